#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poems/coupled_response.hpp"
#include "poems/interferometer.hpp"
#include "poems/material_film.hpp"
#include "poems/noise_psd.hpp"

namespace poems {

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

struct LnaParams {
    double G_L;  // linear power gain
    double n_L;  // V^2/Hz referred to the LNA output

    // n_L = 2 k_B R_L T_L G_L
    static LnaParams from_temperature(double gain_db, double T_L, double R_L);
};

struct NoiseComponents {
    NoisePsd electro = NoisePsd::voltage(0.0);        // V^2/Hz at the circuit input
    NoisePsd film = NoisePsd::displacement(0.0);      // m^2/Hz
    NoisePsd optical = NoisePsd::phase(0.0);          // rad^2/Hz at the output
};

NoisePsd electrical_noise_psd(double temperature_k, double R_L);

NoisePsd output_noise_psd(double T_fn, const NoisePsd& N_electro, const NoisePsd& N_film,
                          const NoisePsd& N_optical_phase, double k);

double system_snr(const NoisePsd& S_VV_in, const NoiseComponents& n, double T_fn, double k);

// Closed-form inversion of system_snr = 1.
NoisePsd min_signal_psd(const NoiseComponents& n, double T_fn, double k);

struct PowerLevel {
    double watts;
    double dbm;
};

PowerLevel min_power(const NoisePsd& S_min, double bandwidth_hz, double R_i);

struct LnaGain {
    double snr_without;
    double snr_with;
    double gain;        // snr_with - snr_without, evaluated in closed form
    double threshold;   // G_L* = n_L/n_xx + 1
    bool improves;      // G_L > G_L*
};

LnaGain lna_snr_gain(double s_I, double n_I, double n_xx, const LnaParams& lna);

struct ReferenceLevel {
    std::string standard;
    std::string bs_class;
    double bandwidth_hz;
    double dbm;
};

std::vector<ReferenceLevel> reference_levels();

// P = (A / 2 G_A) eps0 c E_min^2 B
double atom_equivalent_sensitivity(double E_min, double area_m2, double antenna_gain, double B);

// Overrides that bypass the cavity derivation from the optical layout.
struct CavityOverrides {
    std::optional<double> detuning;
    std::optional<double> kappa;
    std::optional<double> vacuum_coupling;
    std::optional<double> n_cav;
    std::optional<double> G_opt;
};

// Per-frequency noise contributions of the full chain, each referred to the
// receiver input (V^2/Hz) so they can be compared with the signal directly.
struct ChainContributions {
    double frequency_hz;
    double transfer;
    double johnson;   // thermal noise of the inductor resistance
    double channel;   // wireless channel noise
    double lna;       // LNA noise divided by its gain (0 without LNA)
    double film;      // film thermal displacement noise through 1/T
    double optical;   // optical readout noise through 1/T
    double min_signal_psd;
};

struct SensitivityResult {
    double bandwidth_hz;
    double loss_coefficient;
    double min_power_dbm;
    double min_psd;  // band-average S_min, V^2/Hz
    bool with_lna;
};

// Receiver: antenna -> (channel noise, Johnson noise) -> optional LNA ->
// LC/film transfer -> film and optical noise -> phase readout.
struct ReceiverModel {
    MaterialParams material;
    FilmGeometry geometry;
    FilmOscillator oscillator;
    CircuitParams circuit;
    OpticalLayout optics;
    CavityOverrides cavity_overrides;
    NoiseStrength film_strength;
    double temperature_k;
    double channel_noise_psd;  // V^2/Hz
    LnaParams lna;
    double center_hz;

    CavityCoupling cavity() const;
    // Sets the power loss of all four arm mirrors, keeping their transmissivity.
    ReceiverModel with_loss(double loss) const;
    ReceiverModel with_coupling(double G) const;

    ChainContributions contributions(double frequency_hz, bool with_lna) const;
    double min_signal_psd(double frequency_hz, bool with_lna) const;
    // Band-integrated minimum detectable power around center_hz.
    SensitivityResult sensitivity(double bandwidth_hz, bool with_lna) const;
};

std::vector<SensitivityResult> sensitivity_sweep(const ReceiverModel& model,
                                                 const std::vector<double>& bandwidths,
                                                 const std::vector<double>& losses, bool with_lna,
                                                 unsigned threads = 1);

struct CalibrationTarget {
    double bandwidth_hz = 3.75e3;
    double loss = 1e-5;
    bool with_lna = true;
    double target_dbm = -152.3;
};

struct CalibrationResult {
    double coupling_g;
    double matched_g;
    double achieved_dbm;
};

// Solves for the coupling on the weak-coupling branch (0, matched_g] so that
// the model sensitivity equals the target. Throws CalibrationInfeasible when
// the target lies below the best achievable sensitivity.
CalibrationResult calibrate_coupling(const ReceiverModel& model, const CalibrationTarget& target);

}  // namespace poems
