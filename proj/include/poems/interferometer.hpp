#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "poems/material_film.hpp"
#include "poems/noise_psd.hpp"

namespace poems {

struct MirrorSpec {
    double r;     // amplitude reflection
    double t;     // amplitude transmission
    double loss;  // power loss

    // From power transmissivity and power loss; r takes the remainder.
    static MirrorSpec from_power(double transmissivity, double loss);
    void validate(const char* name) const;
};

struct OpticalLayout {
    double P0;          // W
    double lambda0;     // m
    double L_N;         // m
    double L_E;         // m
    MirrorSpec bs;
    MirrorSpec itmn, etmn, itme, etme;
    double g_prm;        // amplitude gain of the power-recycling cavity
    double g_srm;        // amplitude gain of the signal-recycling cavity
    double responsivity; // A/W
    // Microscopic carrier round-trip phase of the arm cavities. When unset the
    // arms are tuned so the upper signal sideband at signal_resonance_hz is resonant.
    std::optional<double> arm_tuning_rad;
    double signal_resonance_hz;
    // Reflection/transmission phase offsets of the beam splitter surfaces.
    double phase_t_rad = 0.0;
    double phase_r1_rad = 0.0;
    double phase_r2_rad = 0.0;

    static OpticalLayout reference();
    void validate() const;

    double carrier_round_trip_phase() const;
    // Detuning (rad/s) of a signal sideband at Omega from the nearest arm resonance.
    double sideband_detuning(double Omega) const;
};

struct MirrorModulation {
    double a_s;      // m
    double omega_s;  // rad/s
    double phi_s = 0.0;
};

// Readout parameters of the modulated arm cavity.
struct CavityCoupling {
    double detuning;         // Delta, rad/s
    double kappa;            // rad/s, energy decay rate
    double vacuum_coupling;  // g, rad/s
    double n_cav;            // mean intracavity photon number
    double G_opt;            // rad/(s m)
};

double wave_number(double lambda0);
double watts_to_ampere(double lambda0);

double michelson_output_current(const OpticalLayout& layout, double delta_L,
                                const MirrorModulation& mod, double t);

cplx cavity_reflectance(const MirrorSpec& input_mirror, const MirrorSpec& end_mirror,
                        double length, double k0, double x_m);

double drfpmi_output_current(const OpticalLayout& layout, double x_m);

struct SpectrumPoint {
    double frequency_hz;
    double value;
};

// Photocurrent at the modulation frequency per picometre of end-mirror motion.
std::vector<SpectrumPoint> response_spectrum(const OpticalLayout& layout,
                                             const std::vector<double>& mod_omegas, double a_s);

// kappa from total round-trip losses, n_cav from the circulating power, G_opt = eta k0 c / 2L,
// g = G_opt x_zpf sqrt(n_cav); detuning 0.
CavityCoupling derive_cavity_coupling(const OpticalLayout& layout, const FilmOscillator& osc);

NoisePsd optical_imprecision_psd(double kappa, double n_cav, double G_opt, double omega);
NoisePsd radiation_pressure_psd(double kappa, double n_cav, double G_opt, cplx chi_m,
                                double omega);
NoisePsd optical_noise_total(double kappa, double n_cav, double G_opt, cplx chi_m, double omega);
// Photon number balancing imprecision and back-action.
double sql_optimal_n_cav(double kappa, double G_opt, cplx chi_m, double omega);
NoisePsd phase_noise_psd(const NoisePsd& N_xx, double k);

// sqrt of the total optical displacement noise, m/sqrt(Hz), evaluated at each
// sideband's detuning from the arm resonance.
std::vector<SpectrumPoint> noise_limited_sensitivity_spectrum(const OpticalLayout& layout,
                                                              const CavityCoupling& cav,
                                                              const FilmOscillator& osc,
                                                              const std::vector<double>& freqs_hz);

}  // namespace poems
