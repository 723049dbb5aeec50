#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "poems/noise_psd.hpp"

namespace poems {

using cplx = std::complex<double>;

struct MaterialParams {
    double c_D;                  // N/m^2, constant electric displacement
    std::optional<double> c_E;   // N/m^2, constant field; derived when absent
    double e33;                  // C/m^2
    double d33;                  // C/N
    double s33;                  // m^2/N
    double eps_S;                // F/m, constant strain
    double rho;                  // kg/m^3

    // Aluminium nitride thickness-mode constants.
    static MaterialParams aln();

    // c_E if supplied, otherwise c_D - e33^2/eps_S.
    double stiffness_constant_field() const;
    void validate() const;
};

struct FilmGeometry {
    double L;    // m
    double W;    // m
    double L_T;  // m

    static FilmGeometry reference();

    // The 1-D thickness-mode model assumes lateral size >> thickness.
    bool thin_film_valid() const { return std::min(L, W) / L_T >= 10.0; }
    // Throws ValidationError on nonpositive sizes; warns on thick films.
    void validate() const;
};

struct DriveSignal {
    double V0;     // V
    double omega;  // rad/s
    double phase = 0.0;
};

struct FilmOscillator {
    double m_eff;    // kg
    double Omega_m;  // rad/s
    double Gamma_m;  // rad/s
    double Q;

    static FilmOscillator from_quality(double m_eff, double Omega_m, double Q);
    void validate() const;
};

struct NoiseStrength {
    double alpha_ex;  // white force-noise intensity
};

double phase_velocity(const MaterialParams& mat);
double coupling_kt2(const MaterialParams& mat);

// Closed-form approximation near the first tangent pole.
double series_resonance(const MaterialParams& mat, const FilmGeometry& geom);
// Root of k_t^2 tan(beta L_T / 2) = beta L_T / 2 on the first branch, by bisection.
double exact_series_resonance(const MaterialParams& mat, const FilmGeometry& geom);

double static_capacitance(const MaterialParams& mat, const FilmGeometry& geom);
double film_mass(const MaterialParams& mat, const FilmGeometry& geom);

cplx input_impedance(const MaterialParams& mat, const FilmGeometry& geom, double omega);

struct AdmittanceSample {
    double frequency_hz;
    cplx admittance;  // 0 at a tangent pole
    bool is_pole;
};

struct AdmittanceSweep {
    std::vector<AdmittanceSample> samples;
    std::size_t peak_index;  // largest |Y|
};

AdmittanceSweep admittance_spectrum(const MaterialParams& mat, const FilmGeometry& geom,
                                    double f_start, double f_stop, std::size_t n_points);

cplx surface_displacement_undamped(const MaterialParams& mat, const FilmGeometry& geom,
                                   const DriveSignal& drive);

// Resonance-neighbourhood approximation; warns when the drive is more than
// 5% away from the series resonance.
cplx surface_displacement_damped(const MaterialParams& mat, const FilmGeometry& geom,
                                 const DriveSignal& drive, double Q);

cplx mechanical_susceptibility(const FilmOscillator& osc, double Omega);

NoisePsd film_thermal_noise_psd(const FilmOscillator& osc, const NoiseStrength& strength,
                                double Omega);

// Fluctuation-dissipation closure 2 m Gamma k_B T.
NoiseStrength fdt_noise_strength(const FilmOscillator& osc, double temperature_k);
// Strength that puts the noise peak (at Omega_m) at the given value.
NoiseStrength noise_strength_for_peak(const FilmOscillator& osc, double peak_m2_per_hz);

}  // namespace poems
