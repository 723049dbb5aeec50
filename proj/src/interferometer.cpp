#include "poems/interferometer.hpp"

#include <cmath>
#include <string>

#include "poems/constants.hpp"
#include "poems/errors.hpp"

namespace poems {

using constants::c;
using constants::hbar;
using constants::pi;

namespace {

double wrap_phase(double phi) {
    // to (-pi, pi]
    double w = std::remainder(phi, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

void require_positive(double v, const std::string& name) {
    if (!(v > 0.0) || std::isinf(v)) throw ValidationError(name + " must be positive and finite");
}

}  // namespace

MirrorSpec MirrorSpec::from_power(double transmissivity, double loss) {
    const double R = 1.0 - transmissivity - loss;
    return {std::sqrt(std::max(R, 0.0)), std::sqrt(std::max(transmissivity, 0.0)), loss};
}

void MirrorSpec::validate(const char* name) const {
    const std::string n(name);
    if (r < 0.0 || r > 1.0 || t < 0.0 || t > 1.0 || loss < 0.0 || loss > 1.0)
        throw ValidationError(n + ": r, t and loss must lie in [0, 1]");
    if (std::abs(r * r + t * t + loss - 1.0) > 1e-9)
        throw ValidationError(n + ": r^2 + t^2 + loss must equal 1 within 1e-9");
}

OpticalLayout OpticalLayout::reference() {
    OpticalLayout o;
    o.P0 = 1.0;
    o.lambda0 = 1064e-9;
    o.L_N = 0.075;
    o.L_E = 0.075;
    o.bs = MirrorSpec::from_power(0.5, 0.0);
    o.itmn = MirrorSpec::from_power(0.014, 1e-5);
    o.etmn = MirrorSpec::from_power(5e-6, 1e-5);
    o.itme = o.itmn;
    o.etme = o.etmn;
    o.g_prm = 1.0;
    o.g_srm = 1.0;
    o.responsivity = watts_to_ampere(o.lambda0);
    o.signal_resonance_hz = 1e9;
    return o;
}

void OpticalLayout::validate() const {
    require_positive(P0, "optics.laser_power_w");
    require_positive(lambda0, "optics.wavelength_m");
    require_positive(L_N, "optics.arm_north_m");
    require_positive(L_E, "optics.arm_east_m");
    require_positive(responsivity, "optics.responsivity_a_per_w");
    require_positive(signal_resonance_hz, "optics.signal_resonance_hz");
    bs.validate("optics.bs");
    itmn.validate("optics.itmn");
    etmn.validate("optics.etmn");
    itme.validate("optics.itme");
    etme.validate("optics.etme");
    if (!(g_prm >= 1.0)) throw ValidationError("optics.g_prm must be >= 1");
    if (!(g_srm >= 1.0)) throw ValidationError("optics.g_srm must be >= 1");
}

double OpticalLayout::carrier_round_trip_phase() const {
    if (arm_tuning_rad) return *arm_tuning_rad;
    return wrap_phase(-2.0 * (2.0 * pi * signal_resonance_hz) * L_N / c);
}

double OpticalLayout::sideband_detuning(double Omega) const {
    const double round_trip = 2.0 * L_N / c;
    return wrap_phase(carrier_round_trip_phase() + Omega * round_trip) / round_trip;
}

double wave_number(double lambda0) { return 2.0 * pi / lambda0; }

double watts_to_ampere(double lambda0) {
    return constants::e * lambda0 / (constants::h * c);
}

double michelson_output_current(const OpticalLayout& layout, double delta_L,
                                const MirrorModulation& mod, double t) {
    const double k0 = wave_number(layout.lambda0);
    // A reflection phase difference between the arms shifts the fringe; the
    // common transmission phase drops out of the intensity.
    const double theta = k0 * delta_L - 0.5 * (layout.phase_r1_rad - layout.phase_r2_rad);
    const double cs = std::cos(theta);
    return layout.responsivity * layout.P0 *
           (cs * cs + k0 * mod.a_s * std::sin(2.0 * theta) * std::cos(mod.omega_s * t + mod.phi_s));
}

cplx cavity_reflectance(const MirrorSpec& m1, const MirrorSpec& m2, double length, double k0,
                        double x_m) {
    const cplx e = std::polar(1.0, -2.0 * k0 * length);
    const cplx den = std::polar(1.0, -2.0 * k0 * x_m) - m1.r * m2.r * e;
    if (std::abs(den) < 1e-15) throw DegenerateCavity("two-mirror cavity denominator vanishes");
    return m1.r - m2.r * m1.t * m1.t * e / den;
}

double drfpmi_output_current(const OpticalLayout& layout, double x_m) {
    const double k0 = wave_number(layout.lambda0);
    const cplx east = cavity_reflectance(layout.itme, layout.etme, layout.L_E, k0, 0.0);
    const cplx north = cavity_reflectance(layout.itmn, layout.etmn, layout.L_N, k0, x_m);
    const double g2 = layout.g_prm * layout.g_prm * layout.g_srm * layout.g_srm;
    return 0.5 * layout.responsivity * g2 * layout.P0 * std::norm(east + north);
}

std::vector<SpectrumPoint> response_spectrum(const OpticalLayout& layout,
                                             const std::vector<double>& mod_omegas, double a_s) {
    const double k0 = wave_number(layout.lambda0);
    const double phi_c = layout.carrier_round_trip_phase();
    const double tau = 2.0 * layout.L_N / c;
    const MirrorSpec& m1 = layout.itmn;
    const MirrorSpec& m2 = layout.etmn;

    // Carrier: both arms share the microscopic tuning; the bright output is the
    // local oscillator for the signal sidebands.
    const double E_in = layout.g_prm / std::sqrt(2.0) * std::sqrt(layout.P0);
    auto arm_reflect = [](const MirrorSpec& a, const MirrorSpec& b, double phi) {
        const cplx e = std::polar(1.0, -phi);
        return a.r - b.r * a.t * a.t * e / (1.0 - a.r * b.r * e);
    };
    const cplx lo = layout.g_srm / std::sqrt(2.0) * E_in *
                    (arm_reflect(layout.itme, layout.etme, phi_c) + arm_reflect(m1, m2, phi_c));
    const cplx E_circ = m1.t * E_in / (1.0 - m1.r * m2.r * std::polar(1.0, -phi_c));

    std::vector<SpectrumPoint> out;
    out.reserve(mod_omegas.size());
    for (double W : mod_omegas) {
        double amp = 0.0;
        if (a_s > 0.0) {
            // Each sideband starts at the end mirror with amplitude i k0 a_s r2 E_circ,
            // then resonates in the arm before leaking out through the input mirror.
            const cplx seed = cplx(0.0, k0 * a_s) * m2.r * E_circ;
            auto leak = [&](double phi) {
                return layout.g_srm / std::sqrt(2.0) * m1.t * seed * std::polar(1.0, -phi / 2.0) /
                       (1.0 - m1.r * m2.r * std::polar(1.0, -phi));
            };
            const cplx up = leak(phi_c + W * tau);
            const cplx dn = leak(phi_c - W * tau);
            const double beat = 2.0 * std::abs(std::conj(lo) * up + lo * std::conj(dn));
            amp = layout.responsivity * beat / (a_s * 1e12);
        }
        out.push_back({W / (2.0 * pi), amp});
    }
    return out;
}

CavityCoupling derive_cavity_coupling(const OpticalLayout& layout, const FilmOscillator& osc) {
    const double T_in = layout.itmn.t * layout.itmn.t;
    const double T_end = layout.etmn.t * layout.etmn.t;
    const double total = T_in + T_end + layout.itmn.loss + layout.etmn.loss;
    if (!(total > 0.0)) throw DegenerateCavity("arm cavity has no decay channel");
    const double L = layout.L_N;
    const double kappa = c * total / (2.0 * L);
    const double eta = T_in / total;
    const double finesse = pi * c / (L * kappa);
    const double P_circ = layout.g_prm * layout.g_prm * layout.P0 * finesse / pi;
    const double photon_energy = constants::h * c / layout.lambda0;
    const double n_cav = eta * P_circ * (2.0 * L / c) / photon_energy;
    const double G_opt = eta * wave_number(layout.lambda0) * c / (2.0 * L);
    const double x_zpf = std::sqrt(hbar / (2.0 * osc.m_eff * osc.Omega_m));
    return {0.0, kappa, G_opt * x_zpf * std::sqrt(n_cav), n_cav, G_opt};
}

NoisePsd optical_imprecision_psd(double kappa, double n_cav, double G_opt, double omega) {
    const double f = 1.0 + 4.0 * omega * omega / (kappa * kappa);
    return NoisePsd::displacement(kappa * f / (16.0 * n_cav * G_opt * G_opt));
}

NoisePsd radiation_pressure_psd(double kappa, double n_cav, double G_opt, cplx chi_m,
                                double omega) {
    const double f = 1.0 + 4.0 * omega * omega / (kappa * kappa);
    return NoisePsd::displacement(n_cav * 4.0 * hbar * hbar * G_opt * G_opt / kappa / f *
                                  std::norm(chi_m));
}

NoisePsd optical_noise_total(double kappa, double n_cav, double G_opt, cplx chi_m,
                             double omega) {
    return optical_imprecision_psd(kappa, n_cav, G_opt, omega) +
           radiation_pressure_psd(kappa, n_cav, G_opt, chi_m, omega);
}

double sql_optimal_n_cav(double kappa, double G_opt, cplx chi_m, double omega) {
    const double C = kappa * (1.0 + 4.0 * omega * omega / (kappa * kappa)) / (G_opt * G_opt);
    return C / (8.0 * hbar * std::abs(chi_m));
}

NoisePsd phase_noise_psd(const NoisePsd& N_xx, double k) {
    N_xx.require(PsdDomain::displacement);
    return NoisePsd::phase(4.0 * k * k * N_xx.value());
}

std::vector<SpectrumPoint> noise_limited_sensitivity_spectrum(const OpticalLayout& layout,
                                                              const CavityCoupling& cav,
                                                              const FilmOscillator& osc,
                                                              const std::vector<double>& freqs_hz) {
    std::vector<SpectrumPoint> out;
    out.reserve(freqs_hz.size());
    for (double f : freqs_hz) {
        const double W = 2.0 * pi * f;
        const double delta = layout.sideband_detuning(W);
        const NoisePsd total =
            optical_noise_total(cav.kappa, cav.n_cav, cav.G_opt, mechanical_susceptibility(osc, W), delta);
        out.push_back({f, std::sqrt(total.value())});
    }
    return out;
}

}  // namespace poems
