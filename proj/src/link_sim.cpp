#include "poems/link_sim.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "poems/constants.hpp"
#include "poems/diagnostics.hpp"
#include "poems/errors.hpp"
#include "poems/parallel.hpp"
#include "poems/philox.hpp"

namespace poems {

namespace {

constexpr std::size_t kBlockBits = 4096;
constexpr std::uint32_t kStreamBits = 0;
constexpr std::uint32_t kStreamNoise = 1;
constexpr std::uint32_t kStreamChannelProbe = 2;

Philox4x32::Counter counter(std::uint64_t index, std::uint32_t sub, std::uint32_t stream) {
    return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), sub, stream};
}

double to_db(double x) { return 10.0 * std::log10(x); }

struct Statistics {
    std::vector<std::uint8_t> bits;
    std::vector<double> y;
    std::size_t n_pilot;
};

std::size_t pilot_length(std::size_t n_bits) {
    return std::max<std::size_t>(2, (n_bits + 99) / 100);
}

// Integrate-and-dump statistic of every transmitted bit (pilot prefix first).
Statistics simulate(const LinkChain& ch, const LinkConfig& cfg) {
    Statistics s;
    s.n_pilot = pilot_length(cfg.n_bits);
    const std::size_t total = s.n_pilot + cfg.n_bits;
    s.bits.resize(total);
    s.y.resize(total);
    const Philox4x32 rng(cfg.seed);
    const std::size_t n_blocks = (total + kBlockBits - 1) / kBlockBits;
    const double gain = std::sqrt(ch.lna_gain);

    parallel_for(n_blocks, cfg.threads, [&](std::size_t b) {
        const std::size_t end = std::min(total, (b + 1) * kBlockBits);
        for (std::size_t i = b * kBlockBits; i < end; ++i) {
            std::uint8_t bit;
            if (i < s.n_pilot)
                bit = static_cast<std::uint8_t>(i & 1u);
            else
                bit = static_cast<std::uint8_t>(rng(counter(i, 0, kStreamBits))[0] & 1u);
            const double v_sig = bit ? ch.amplitude : 0.0;
            double acc = 0.0;
            for (std::size_t j = 0; j < ch.samples_per_symbol; ++j) {
                const auto sub = static_cast<std::uint32_t>(3 * j);
                const auto n01 = rng.normals(counter(i, sub, kStreamNoise));
                const auto n23 = rng.normals(counter(i, sub + 1, kStreamNoise));
                const auto n4 = rng.normals(counter(i, sub + 2, kStreamNoise));
                const double v_in = v_sig + ch.sigma_channel * n01[0] + ch.sigma_johnson * n01[1];
                const double v_amp = gain * v_in + ch.sigma_lna * n23[0];
                const double x = ch.sqrt_transfer * v_amp + ch.sigma_film * n23[1];
                acc += ch.two_k * x + ch.sigma_optical * n4[0];
            }
            s.bits[i] = bit;
            s.y[i] = acc;
        }
    });
    return s;
}

struct LevelStats {
    double mean0 = 0.0, mean1 = 0.0, var = 0.0;
    std::size_t n0 = 0, n1 = 0;
};

LevelStats level_stats(const Statistics& s, std::size_t from, std::size_t to) {
    LevelStats st;
    for (std::size_t i = from; i < to; ++i) {
        if (s.bits[i]) {
            st.mean1 += s.y[i];
            ++st.n1;
        } else {
            st.mean0 += s.y[i];
            ++st.n0;
        }
    }
    if (st.n0) st.mean0 /= static_cast<double>(st.n0);
    if (st.n1) st.mean1 /= static_cast<double>(st.n1);
    double ss = 0.0;
    for (std::size_t i = from; i < to; ++i) {
        const double d = s.y[i] - (s.bits[i] ? st.mean1 : st.mean0);
        ss += d * d;
    }
    const std::size_t n = to - from;
    st.var = n > 2 ? ss / static_cast<double>(n - 2) : 0.0;
    return st;
}

}  // namespace

void LinkConfig::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0) || std::isinf(v))
            throw ValidationError(std::string(name) + " must be positive and finite");
    };
    pos(carrier_hz, "link.carrier_hz");
    pos(bandwidth_hz, "link.bandwidth_hz");
    pos(bitrate_bps, "link.bitrate_bps");
    if (bitrate_bps > bandwidth_hz)
        throw ValidationError("link.bitrate_bps must not exceed link.bandwidth_hz");
    if (n_bits < 1000) throw ValidationError("link.n_bits must be at least 1000");
    if (samples_per_symbol < 1) throw ValidationError("link.samples_per_symbol must be at least 1");
    if (!std::isfinite(signal_power_dbm))
        throw ValidationError("link.signal_power_dbm must be finite");
    if (channel_noise_dbm && std::isnan(*channel_noise_dbm))
        throw ValidationError("link.channel_noise_dbm must be a number");
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The bounds touch 0 and 1 exactly at the extremes; rounding would leave a residue.
    return {successes == 0 ? 0.0 : std::max(0.0, center - half),
            successes == trials ? 1.0 : std::min(1.0, center + half)};
}

std::vector<double> ook_modulate(const std::vector<std::uint8_t>& bits, const LinkConfig& cfg,
                                 double R_i) {
    const double A = std::sqrt(2.0 * dbm_to_watts(cfg.signal_power_dbm) * R_i);
    std::vector<double> out;
    out.reserve(bits.size());
    for (auto b : bits) out.push_back(b ? A : 0.0);
    return out;
}

LinkChain build_link_chain(const ReceiverModel& model, const LinkConfig& cfg) {
    const double R_i = model.circuit.R_i;
    const double half_rate = 0.5 * cfg.bitrate_bps * static_cast<double>(cfg.samples_per_symbol);
    const ChainContributions c = model.contributions(cfg.carrier_hz, cfg.with_lna);
    const double G = cfg.with_lna ? model.lna.G_L : 1.0;
    const double k0 = wave_number(model.optics.lambda0);

    LinkChain ch;
    ch.amplitude = std::sqrt(2.0 * dbm_to_watts(cfg.signal_power_dbm) * R_i);
    const double N_ch =
        cfg.channel_noise_dbm ? dbm_to_watts(*cfg.channel_noise_dbm) * R_i / cfg.bandwidth_hz : 0.0;
    ch.sigma_channel = std::sqrt(N_ch * half_rate);
    ch.lna_gain = G;
    ch.sqrt_transfer = std::sqrt(c.transfer);
    ch.two_k = 2.0 * k0;
    ch.samples_per_symbol = cfg.samples_per_symbol;
    if (cfg.internal_noise) {
        // Contributions are input-referred; undo the referral to get each source at its own node.
        ch.sigma_johnson = std::sqrt(c.johnson * half_rate);
        ch.sigma_lna = cfg.with_lna ? std::sqrt(model.lna.n_L * half_rate) : 0.0;
        ch.sigma_film = std::sqrt(c.film * G * c.transfer * half_rate);
        ch.sigma_optical = ch.two_k * std::sqrt(c.optical * G * c.transfer * half_rate);
    } else {
        ch.sigma_johnson = ch.sigma_lna = ch.sigma_film = ch.sigma_optical = 0.0;
    }
    return ch;
}

std::vector<double> channel_noise_samples(const ReceiverModel& model, const LinkConfig& cfg,
                                          std::size_t n) {
    const LinkChain ch = build_link_chain(model, cfg);
    const Philox4x32 rng(cfg.seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const auto z = rng.normals(counter(i / 2, 0, kStreamChannelProbe));
        out[i] = ch.sigma_channel * z[0];
        if (i + 1 < n) out[i + 1] = ch.sigma_channel * z[1];
    }
    return out;
}

double detection_snr(const LinkChain& ch) {
    const double signal = ch.two_k * ch.sqrt_transfer * std::sqrt(ch.lna_gain) * ch.amplitude;
    const double var =
        ch.two_k * ch.two_k *
            (ch.sqrt_transfer * ch.sqrt_transfer *
                 (ch.lna_gain * (ch.sigma_channel * ch.sigma_channel +
                                 ch.sigma_johnson * ch.sigma_johnson) +
                  ch.sigma_lna * ch.sigma_lna) +
             ch.sigma_film * ch.sigma_film) +
        ch.sigma_optical * ch.sigma_optical;
    if (var == 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(ch.samples_per_symbol) * signal * signal / var;
}

namespace {

double input_noise_psd(const ReceiverModel& model, const LinkConfig& cfg) {
    const double R_i = model.circuit.R_i;
    double S = cfg.channel_noise_dbm
                   ? dbm_to_watts(*cfg.channel_noise_dbm) * R_i / cfg.bandwidth_hz
                   : 0.0;
    if (cfg.internal_noise) {
        ReceiverModel quiet = model;
        quiet.channel_noise_psd = 0.0;
        S += quiet.min_signal_psd(cfg.carrier_hz, cfg.with_lna);
    }
    return S;
}

}  // namespace

double detection_snr(const ReceiverModel& model, const LinkConfig& cfg) {
    const double S = input_noise_psd(model, cfg);
    const double P = dbm_to_watts(cfg.signal_power_dbm);
    if (S == 0.0) return std::numeric_limits<double>::infinity();
    return 4.0 * P * model.circuit.R_i / (S * cfg.bitrate_bps);
}

double channel_noise_for_snr(const ReceiverModel& model, const LinkConfig& cfg, double snr) {
    LinkConfig quiet = cfg;
    quiet.channel_noise_dbm.reset();
    const double internal = input_noise_psd(model, quiet);
    const double P = dbm_to_watts(cfg.signal_power_dbm);
    const double N_ch = 4.0 * P * model.circuit.R_i / (snr * cfg.bitrate_bps) - internal;
    if (!(N_ch > 0.0)) {
        std::ostringstream os;
        os << "detection SNR " << snr << " is above the receiver-noise limit "
           << 4.0 * P * model.circuit.R_i / (internal * cfg.bitrate_bps);
        throw NumericError(os.str());
    }
    return watts_to_dbm(N_ch * cfg.bandwidth_hz / model.circuit.R_i);
}

double analytic_ook_ber(double snr) {
    if (std::isinf(snr)) return 0.0;
    return 0.5 * std::erfc(std::sqrt(snr) / 2.0 / std::sqrt(2.0));
}

BerResult run_link(const ReceiverModel& model, const LinkConfig& cfg) {
    cfg.validate();
    const LinkChain ch = build_link_chain(model, cfg);
    const Statistics s = simulate(ch, cfg);
    const LevelStats pilot = level_stats(s, 0, s.n_pilot);
    const double threshold = 0.5 * (pilot.mean0 + pilot.mean1);
    const double orientation = pilot.mean1 >= pilot.mean0 ? 1.0 : -1.0;

    std::size_t errors = 0;
    for (std::size_t i = s.n_pilot; i < s.bits.size(); ++i) {
        const bool decided = orientation * (s.y[i] - threshold) > 0.0;
        if (decided != static_cast<bool>(s.bits[i])) ++errors;
    }
    BerResult r;
    r.n_bits = cfg.n_bits;
    r.n_errors = errors;
    r.ber = static_cast<double>(errors) / static_cast<double>(cfg.n_bits);
    r.wilson_ci95 = wilson_interval(errors, cfg.n_bits);
    r.low_confidence = errors > 0 && errors < 10;
    if (r.low_confidence) {
        std::ostringstream os;
        os << "only " << errors << " bit errors in " << cfg.n_bits
           << " bits; BER estimate has low confidence";
        warn(os.str());
    }
    return r;
}

std::vector<SnrPoint> snr_curve(const ReceiverModel& model, const LinkConfig& base,
                                const std::vector<double>& channel_noise_dbm) {
    base.validate();
    std::vector<SnrPoint> out;
    out.reserve(channel_noise_dbm.size());
    for (double noise : channel_noise_dbm) {
        LinkConfig cfg = base;
        cfg.channel_noise_dbm = noise;
        const Statistics s = simulate(build_link_chain(model, cfg), cfg);
        const LevelStats st = level_stats(s, s.n_pilot, s.bits.size());
        const double d = st.mean1 - st.mean0;
        const double mc = d * d / st.var;
        // Variance uncertainty dominates for the sizes used here.
        const double dof = static_cast<double>(cfg.n_bits - 2);
        boost::math::chi_squared chi(dof);
        const double lo = mc * dof / boost::math::quantile(chi, 0.975);
        const double hi = mc * dof / boost::math::quantile(chi, 0.025);
        out.push_back({noise, to_db(detection_snr(model, cfg)), to_db(mc), {to_db(lo), to_db(hi)},
                       cfg.n_bits});
    }
    return out;
}

CapacityBound default_upper_bound() {
    return {"gaussian_input", [](double snr) { return 0.5 * std::log2(1.0 + snr); }};
}

CapacityBound default_lower_bound() {
    return {"half_gaussian_epi", [](double snr) { return 0.5 * std::log2(1.0 + snr / 4.0); }};
}

CapacityBounds capacity_bounds(double signal_power_w, double noise_power_w,
                               const CapacityBound& lower, const CapacityBound& upper) {
    if (!(noise_power_w > 0.0)) throw NumericError("capacity bounds need positive noise power");
    if (signal_power_w < 0.0) throw NumericError("signal power must be nonnegative");
    const double snr = signal_power_w / noise_power_w;
    return {lower.spectral_efficiency(snr), upper.spectral_efficiency(snr)};
}

double total_noise_power(const ReceiverModel& model, const LinkConfig& cfg) {
    return input_noise_psd(model, cfg) * cfg.bandwidth_hz / model.circuit.R_i;
}

}  // namespace poems
