#include "poems/material_film.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>
#include <string>

#include "poems/constants.hpp"
#include "poems/diagnostics.hpp"
#include "poems/errors.hpp"

namespace poems {

using constants::pi;

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || std::isinf(v))
        throw ValidationError(std::string(name) + " must be positive and finite");
}

}  // namespace

MaterialParams MaterialParams::aln() {
    MaterialParams m;
    m.c_D = 4.19e11;
    m.e33 = 1.55;
    m.d33 = 4.98e-12;
    m.s33 = 3.21e-12;
    m.eps_S = 7.97e-11;
    m.rho = 3300.0;
    return m;
}

double MaterialParams::stiffness_constant_field() const {
    return c_E ? *c_E : c_D - e33 * e33 / eps_S;
}

void MaterialParams::validate() const {
    require_positive(c_D, "material.c_d");
    require_positive(e33, "material.e33");
    require_positive(d33, "material.d33");
    require_positive(s33, "material.s33");
    require_positive(eps_S, "material.eps_s");
    require_positive(rho, "material.rho");
    if (c_E) {
        require_positive(*c_E, "material.c_e");
        const double expected = *c_E + e33 * e33 / eps_S;
        if (std::abs(c_D - expected) > 1e-6 * c_D) {
            std::ostringstream os;
            os << "material.c_d must equal c_e + e33^2/eps_s within 1e-6 relative (c_d = " << c_D
               << ", c_e + e33^2/eps_s = " << expected << ")";
            throw ValidationError(os.str());
        }
    }
}

FilmGeometry FilmGeometry::reference() { return {500e-6, 500e-6, 5.5e-6}; }

void FilmGeometry::validate() const {
    require_positive(L, "geometry.length_m");
    require_positive(W, "geometry.width_m");
    require_positive(L_T, "geometry.thickness_m");
    if (!thin_film_valid()) {
        std::ostringstream os;
        os << "film lateral size / thickness = " << std::min(L, W) / L_T
           << " < 10; the thickness-mode model is outside its validity range";
        warn(os.str());
    }
}

FilmOscillator FilmOscillator::from_quality(double m_eff, double Omega_m, double Q) {
    return {m_eff, Omega_m, Omega_m / Q, Q};
}

void FilmOscillator::validate() const {
    require_positive(m_eff, "oscillator.m_eff_kg");
    require_positive(Omega_m, "oscillator.f_m_hz");
    require_positive(Gamma_m, "oscillator damping");
    require_positive(Q, "oscillator.quality_factor");
    if (std::abs(Q - Omega_m / Gamma_m) > 1e-9 * Q)
        throw ValidationError("oscillator Q must equal Omega_m / Gamma_m within 1e-9 relative");
}

double phase_velocity(const MaterialParams& mat) { return std::sqrt(mat.c_D / mat.rho); }

double coupling_kt2(const MaterialParams& mat) {
    const double k2 = mat.e33 * mat.e33 / (mat.c_D * mat.eps_S);
    if (k2 >= 1.0)
        throw NonPhysicalCoupling("k_t^2 = " + std::to_string(k2) + " is not below 1");
    return k2;
}

double series_resonance(const MaterialParams& mat, const FilmGeometry& geom) {
    const double k2 = coupling_kt2(mat);
    const double arg = pi * pi - 8.0 * k2;
    if (arg <= 0.0)
        throw NonPhysicalCoupling("pi^2 - 8 k_t^2 is not positive; no series resonance");
    return phase_velocity(mat) / geom.L_T * std::sqrt(arg);
}

double exact_series_resonance(const MaterialParams& mat, const FilmGeometry& geom) {
    const double k2 = coupling_kt2(mat);
    // k2 sin x - x cos x changes sign once on (0, pi/2] for 0 <= k2 < 1.
    auto g = [k2](double x) { return k2 * std::sin(x) - x * std::cos(x); };
    double x = pi / 2.0;
    if (g(x) > 0.0) {
        auto [lo, hi] = boost::math::tools::bisect(g, 1e-9, pi / 2.0,
                                                   boost::math::tools::eps_tolerance<double>(52));
        x = 0.5 * (lo + hi);
    }
    return 2.0 * x * phase_velocity(mat) / geom.L_T;
}

double static_capacitance(const MaterialParams& mat, const FilmGeometry& geom) {
    return geom.L * geom.W * mat.eps_S / geom.L_T;
}

double film_mass(const MaterialParams& mat, const FilmGeometry& geom) {
    return mat.rho * geom.L * geom.W * geom.L_T;
}

cplx input_impedance(const MaterialParams& mat, const FilmGeometry& geom, double omega) {
    if (!(omega > 0.0)) throw NumericError("input impedance needs omega > 0");
    const double k2 = coupling_kt2(mat);
    const double x = omega / phase_velocity(mat) * geom.L_T / 2.0;
    if (std::abs(std::cos(x)) < 1e-12)
        throw TangentPole("beta L_T is an odd multiple of pi at omega = " + std::to_string(omega));
    const double C0 = static_capacitance(mat, geom);
    const double factor = 1.0 - k2 * std::tan(x) / x;
    return factor / cplx(0.0, omega * C0);
}

AdmittanceSweep admittance_spectrum(const MaterialParams& mat, const FilmGeometry& geom,
                                    double f_start, double f_stop, std::size_t n_points) {
    if (!(f_start > 0.0) || !(f_stop > f_start))
        throw UsageError("admittance sweep needs 0 < f_start < f_stop");
    if (n_points < 2) throw UsageError("admittance sweep needs at least 2 points");

    AdmittanceSweep sweep;
    sweep.samples.reserve(n_points);
    sweep.peak_index = 0;
    double peak = -1.0;
    const double step = (f_stop - f_start) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double f = i + 1 == n_points ? f_stop : f_start + step * static_cast<double>(i);
        AdmittanceSample s{f, cplx(0.0, 0.0), false};
        try {
            const cplx y = 1.0 / input_impedance(mat, geom, 2.0 * pi * f);
            s.admittance = cplx(y.real() + 0.0, y.imag());  // lossless film: drop the signed zero
        } catch (const TangentPole&) {
            s.is_pole = true;
        }
        if (std::abs(s.admittance) > peak) {
            peak = std::abs(s.admittance);
            sweep.peak_index = i;
        }
        sweep.samples.push_back(s);
    }
    return sweep;
}

cplx surface_displacement_undamped(const MaterialParams& mat, const FilmGeometry& geom,
                                   const DriveSignal& drive) {
    if (!(drive.omega > 0.0)) throw NumericError("drive frequency must be positive");
    const double k2 = coupling_kt2(mat);
    const double beta = drive.omega / phase_velocity(mat);
    const double x = beta * geom.L_T / 2.0;
    if (std::abs(std::cos(x)) < 1e-12)
        throw TangentPole("beta L_T is an odd multiple of pi; surface displacement undefined");
    const double t = std::tan(x);
    const double den = beta * geom.L_T - 2.0 * k2 * t;
    if (std::abs(den) <= 1e-12 * (beta * geom.L_T + 2.0 * k2 * std::abs(t)))
        throw ResonanceSingularity(
            "undamped displacement diverges at the series resonance; use the damped model");
    const double D0 = drive.V0 * beta * mat.eps_S / den;
    const double u = mat.e33 * D0 / (mat.eps_S * mat.c_D * beta) * t;
    return u * std::polar(1.0, drive.phase);
}

cplx surface_displacement_damped(const MaterialParams& mat, const FilmGeometry& geom,
                                 const DriveSignal& drive, double Q) {
    const double ws = series_resonance(mat, geom);
    if (std::abs(drive.omega - ws) / ws > 0.05) {
        std::ostringstream os;
        os << "damped displacement evaluated " << 100.0 * std::abs(drive.omega - ws) / ws
           << "% away from the series resonance (approximation window is 5%)";
        warn(os.str());
    }
    const double amplitude = 4.0 * Q * drive.V0 * mat.e33 / (pi * pi * mat.c_D);
    return cplx(0.0, -amplitude) * std::polar(1.0, drive.phase);
}

cplx mechanical_susceptibility(const FilmOscillator& osc, double Omega) {
    const cplx den(osc.Omega_m * osc.Omega_m - Omega * Omega, -Omega * osc.Gamma_m);
    return 1.0 / (osc.m_eff * den);
}

NoisePsd film_thermal_noise_psd(const FilmOscillator& osc, const NoiseStrength& strength,
                                double Omega) {
    return NoisePsd::displacement(2.0 * strength.alpha_ex *
                                  std::norm(mechanical_susceptibility(osc, Omega)));
}

NoiseStrength fdt_noise_strength(const FilmOscillator& osc, double temperature_k) {
    return {2.0 * osc.m_eff * osc.Gamma_m * constants::k_B * temperature_k};
}

NoiseStrength noise_strength_for_peak(const FilmOscillator& osc, double peak_m2_per_hz) {
    return {peak_m2_per_hz / (2.0 * std::norm(mechanical_susceptibility(osc, osc.Omega_m)))};
}

}  // namespace poems
