#include "poems/noise_budget.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "poems/constants.hpp"
#include "poems/diagnostics.hpp"
#include "poems/errors.hpp"
#include "poems/parallel.hpp"

namespace poems {

using constants::pi;

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }
double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

LnaParams LnaParams::from_temperature(double gain_db, double T_L, double R_L) {
    const double G = std::pow(10.0, gain_db / 10.0);
    return {G, 2.0 * constants::k_B * R_L * T_L * G};
}

NoisePsd electrical_noise_psd(double temperature_k, double R_L) {
    return NoisePsd::voltage(2.0 * constants::k_B * R_L * temperature_k);
}

NoisePsd output_noise_psd(double T_fn, const NoisePsd& N_electro, const NoisePsd& N_film,
                          const NoisePsd& N_optical_phase, double k) {
    N_electro.require(PsdDomain::voltage);
    N_film.require(PsdDomain::displacement);
    N_optical_phase.require(PsdDomain::phase);
    return NoisePsd::phase(4.0 * k * k * (T_fn * N_electro.value() + N_film.value()) +
                           N_optical_phase.value());
}

double system_snr(const NoisePsd& S_VV_in, const NoiseComponents& n, double T_fn, double k) {
    S_VV_in.require(PsdDomain::voltage);
    const double noise = output_noise_psd(T_fn, n.electro, n.film, n.optical, k).value();
    const double signal = 4.0 * k * k * S_VV_in.value() * T_fn;
    if (signal == 0.0) return 0.0;
    if (noise == 0.0) throw ZeroNoise("total noise is zero; SNR is unbounded");
    return signal / noise;
}

NoisePsd min_signal_psd(const NoiseComponents& n, double T_fn, double k) {
    n.electro.require(PsdDomain::voltage);
    n.film.require(PsdDomain::displacement);
    n.optical.require(PsdDomain::phase);
    if (!(T_fn > 0.0)) throw ZeroTransfer("transfer function is zero; no signal reaches the output");
    return NoisePsd::voltage(n.electro.value() +
                             (n.film.value() + n.optical.value() / (4.0 * k * k)) / T_fn);
}

PowerLevel min_power(const NoisePsd& S_min, double bandwidth_hz, double R_i) {
    S_min.require(PsdDomain::voltage);
    const double w = S_min.value() * bandwidth_hz / R_i;
    return {w, watts_to_dbm(w)};
}

LnaGain lna_snr_gain(double s_I, double n_I, double n_xx, const LnaParams& lna) {
    LnaGain g;
    g.snr_without = s_I / (n_I + n_xx);
    g.snr_with = lna.G_L * s_I / (lna.G_L * n_I + lna.n_L + n_xx);
    g.gain = s_I * ((lna.G_L - 1.0) * n_xx - lna.n_L) /
             ((lna.G_L * n_I + lna.n_L + n_xx) * (n_I + n_xx));
    g.threshold = lna.n_L / n_xx + 1.0;
    g.improves = lna.G_L > g.threshold;
    return g;
}

std::vector<ReferenceLevel> reference_levels() {
    return {
        {"E-UTRA", "Wide Area", 5e6, -101.5},   {"E-UTRA", "Local Area", 5e6, -93.5},
        {"E-UTRA", "Home", 5e6, -93.5},         {"E-UTRA", "Medium Range", 5e6, -96.5},
        {"NB-IoT", "Wide Area", 3.75e3, -133.3}, {"NB-IoT", "Local Area", 3.75e3, -125.3},
        {"NB-IoT", "Home", 3.75e3, -125.3},      {"NB-IoT", "Medium Range", 3.75e3, -128.3},
    };
}

double atom_equivalent_sensitivity(double E_min, double area_m2, double antenna_gain, double B) {
    return area_m2 / (2.0 * antenna_gain) * constants::eps0 * constants::c * E_min * E_min * B;
}

CavityCoupling ReceiverModel::cavity() const {
    CavityCoupling cav = derive_cavity_coupling(optics, oscillator);
    const CavityOverrides& o = cavity_overrides;
    if (o.kappa) cav.kappa = *o.kappa;
    if (o.n_cav) cav.n_cav = *o.n_cav;
    if (o.G_opt) cav.G_opt = *o.G_opt;
    if (o.detuning) cav.detuning = *o.detuning;
    const double x_zpf =
        std::sqrt(constants::hbar / (2.0 * oscillator.m_eff * oscillator.Omega_m));
    cav.vacuum_coupling = o.vacuum_coupling ? *o.vacuum_coupling
                                            : cav.G_opt * x_zpf * std::sqrt(cav.n_cav);
    return cav;
}

ReceiverModel ReceiverModel::with_loss(double loss) const {
    ReceiverModel m = *this;
    for (MirrorSpec* mirror : {&m.optics.itmn, &m.optics.etmn, &m.optics.itme, &m.optics.etme})
        *mirror = MirrorSpec::from_power(mirror->t * mirror->t, loss);
    return m;
}

ReceiverModel ReceiverModel::with_coupling(double G) const {
    ReceiverModel m = *this;
    m.circuit.G = G;
    return m;
}

namespace {

// Optical noise with the cavity already resolved, to avoid re-deriving it per sample.
ChainContributions contributions_with(const ReceiverModel& m, const CavityCoupling& cav,
                                      double frequency_hz, bool with_lna) {
    const double W = 2.0 * pi * frequency_hz;
    const double T = transfer_function(m.oscillator, m.circuit, W);
    if (!(T > 0.0)) throw ZeroTransfer("transfer function is zero; no signal reaches the output");
    const cplx chi = mechanical_susceptibility(m.oscillator, W);
    const double delta = m.optics.sideband_detuning(W);
    const double gain = with_lna ? m.lna.G_L : 1.0;

    ChainContributions c;
    c.frequency_hz = frequency_hz;
    c.transfer = T;
    c.johnson = electrical_noise_psd(m.temperature_k, m.circuit.R_L).value();
    c.channel = m.channel_noise_psd;
    c.lna = with_lna ? m.lna.n_L / gain : 0.0;
    c.film = film_thermal_noise_psd(m.oscillator, m.film_strength, W).value() / T / gain;
    c.optical = optical_noise_total(cav.kappa, cav.n_cav, cav.G_opt, chi, delta).value() / T / gain;
    c.min_signal_psd = c.johnson + c.channel + c.lna + c.film + c.optical;
    return c;
}

}  // namespace

ChainContributions ReceiverModel::contributions(double frequency_hz, bool with_lna) const {
    return contributions_with(*this, cavity(), frequency_hz, with_lna);
}

double ReceiverModel::min_signal_psd(double frequency_hz, bool with_lna) const {
    return contributions(frequency_hz, with_lna).min_signal_psd;
}

SensitivityResult ReceiverModel::sensitivity(double bandwidth_hz, bool with_lna) const {
    if (!(bandwidth_hz > 0.0)) throw NumericError("bandwidth must be positive");
    const CavityCoupling cav = cavity();
    auto S = [&](double offset) {
        return contributions_with(*this, cav, center_hz + offset, with_lna).min_signal_psd;
    };
    const double half = bandwidth_hz / 2.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(S, -half, half, 12, 1e-10);
    const double watts = integral / circuit.R_i;
    double loss = optics.itmn.loss;
    return {bandwidth_hz, loss, watts_to_dbm(watts), integral / bandwidth_hz, with_lna};
}

std::vector<SensitivityResult> sensitivity_sweep(const ReceiverModel& model,
                                                 const std::vector<double>& bandwidths,
                                                 const std::vector<double>& losses, bool with_lna,
                                                 unsigned threads) {
    for (double B : bandwidths) {
        if (B < 1e3 || B > 1e7) {
            std::ostringstream os;
            os << "bandwidth " << B << " Hz is outside the 1 kHz - 10 MHz design range";
            warn(os.str());
        }
    }
    std::vector<SensitivityResult> out(bandwidths.size() * losses.size());
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const std::size_t b = i / losses.size();
        const std::size_t l = i % losses.size();
        out[i] = model.with_loss(losses[l]).sensitivity(bandwidths[b], with_lna);
    });
    return out;
}

CalibrationResult calibrate_coupling(const ReceiverModel& model, const CalibrationTarget& target) {
    const ReceiverModel base = model.with_loss(target.loss);
    const double G_match = matched_coupling(base.oscillator, base.circuit);
    auto residual = [&](double log_g) {
        return base.with_coupling(std::exp(log_g)).sensitivity(target.bandwidth_hz, target.with_lna)
                   .min_power_dbm -
               target.target_dbm;
    };
    const double hi = std::log(G_match);
    const double lo = hi - 12.0 * std::log(10.0);
    const double r_hi = residual(hi);
    if (r_hi >= 0.0) {
        std::ostringstream os;
        os << "target " << target.target_dbm << " dBm is below the best achievable sensitivity "
           << r_hi + target.target_dbm << " dBm at the matched coupling (R_i = " << base.circuit.R_i
           << " ohm, R_L = " << base.circuit.R_L << " ohm)";
        throw CalibrationInfeasible(os.str());
    }
    const double r_lo = residual(lo);
    if (r_lo <= 0.0)
        throw CalibrationInfeasible("target is reachable even at vanishing coupling");
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, r_lo, r_hi,
                                                    boost::math::tools::eps_tolerance<double>(45),
                                                    iters);
    const double G = std::exp(0.5 * (a + b));
    return {G, G_match, base.with_coupling(G).sensitivity(target.bandwidth_hz, target.with_lna)
                            .min_power_dbm};
}

}  // namespace poems
