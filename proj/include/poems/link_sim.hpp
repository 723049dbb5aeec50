#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poems/noise_budget.hpp"

namespace poems {

enum class Modulation { ook };

struct LinkConfig {
    double carrier_hz = 1e9;
    double bandwidth_hz = 1e3;
    double bitrate_bps = 1e3;
    Modulation modulation = Modulation::ook;
    double signal_power_dbm = -150.0;
    // Empty means no channel noise.
    std::optional<double> channel_noise_dbm = -165.0;
    bool with_lna = true;
    // Receiver noise (Johnson, LNA, film, optical). Off leaves channel noise only.
    bool internal_noise = true;
    std::uint64_t seed = 1;
    std::size_t n_bits = 100000;
    std::size_t samples_per_symbol = 8;
    unsigned threads = 1;

    void validate() const;
};

struct Interval {
    double low;
    double high;

    bool operator==(const Interval&) const = default;
};

struct BerResult {
    double ber;
    std::size_t n_errors;
    std::size_t n_bits;
    Interval wilson_ci95;
    bool low_confidence;  // fewer than 10 errors observed with ber > 0

    bool operator==(const BerResult&) const = default;
};

Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

// Symbol amplitude A for ones, 0 for zeros; A = sqrt(2 P R_i) so the mean power
// over equiprobable bits equals the configured signal power.
std::vector<double> ook_modulate(const std::vector<std::uint8_t>& bits, const LinkConfig& cfg,
                                 double R_i);

// Per-sample standard deviations of every noise source in the simulated chain.
struct LinkChain {
    double amplitude;      // V, symbol "1"
    double sigma_channel;  // V
    double sigma_johnson;  // V
    double lna_gain;       // linear power gain (1 without LNA)
    double sigma_lna;      // V at the LNA output
    double sqrt_transfer;  // m/V
    double sigma_film;     // m
    double two_k;          // rad/m
    double sigma_optical;  // rad
    std::size_t samples_per_symbol;
};

LinkChain build_link_chain(const ReceiverModel& model, const LinkConfig& cfg);

// Channel noise samples as injected at the antenna, V.
std::vector<double> channel_noise_samples(const ReceiverModel& model, const LinkConfig& cfg,
                                          std::size_t n);

// SNR of the integrate-and-dump decision statistic, (mu1 - mu0)^2 / sigma^2.
// Equals 4 P R_i / (S_in R_b) with S_in the input-referred noise PSD.
double detection_snr(const ReceiverModel& model, const LinkConfig& cfg);

// Same quantity from the per-sample chain parameters.
double detection_snr(const LinkChain& chain);

// Channel noise power (dBm) that brings detection_snr to the requested value.
double channel_noise_for_snr(const ReceiverModel& model, const LinkConfig& cfg, double snr);

// Q(sqrt(snr)/2): midpoint threshold between levels separated by sqrt(snr) sigma.
double analytic_ook_ber(double snr);

BerResult run_link(const ReceiverModel& model, const LinkConfig& cfg);

struct SnrPoint {
    double channel_noise_dbm;
    double snr_db;          // analytic detection SNR
    double mc_snr_db;       // Monte Carlo estimate from the decision statistics
    Interval mc_ci95_db;
    std::size_t n_bits;
};

std::vector<SnrPoint> snr_curve(const ReceiverModel& model, const LinkConfig& base,
                                const std::vector<double>& channel_noise_dbm);

struct CapacityBound {
    std::string name;
    std::function<double(double snr)> spectral_efficiency;  // bit/s/Hz
};

// Gaussian-input upper bound 1/2 log2(1 + snr) and half-Gaussian-input lower
// bound 1/2 log2(1 + snr/4) from the entropy-power inequality.
CapacityBound default_upper_bound();
CapacityBound default_lower_bound();

struct CapacityBounds {
    double lower;
    double upper;
};

CapacityBounds capacity_bounds(double signal_power_w, double noise_power_w,
                               const CapacityBound& lower = default_lower_bound(),
                               const CapacityBound& upper = default_upper_bound());

// Input-referred receiver noise power in the link bandwidth, W, including channel noise.
double total_noise_power(const ReceiverModel& model, const LinkConfig& cfg);

}  // namespace poems
