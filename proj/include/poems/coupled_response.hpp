#pragma once

#include "poems/interferometer.hpp"
#include "poems/material_film.hpp"
#include "poems/noise_psd.hpp"

namespace poems {

struct CircuitParams {
    double L0;        // inductance, H
    double Omega_LC;  // rad/s
    double Gamma_LC;  // rad/s
    double G;         // electromechanical coupling; G^2 chi_m chi_LC is dimensionless
    double R_L;       // ohm
    double R_i;       // ohm

    // Series RLC around the film's static capacitance: L0 = 1/(Omega_LC^2 C0), Gamma = R_L/L0.
    static CircuitParams resonant_with(double C0, double Omega_LC, double R_L, double R_i,
                                       double G);
    void validate() const;
};

cplx circuit_susceptibility(const CircuitParams& c, double Omega);
cplx effective_susceptibility(const FilmOscillator& osc, const CircuitParams& c, double Omega);
double transfer_function(const FilmOscillator& osc, const CircuitParams& c, double Omega);

// Coupling that maximises the resonant transfer when Omega_m = Omega_LC.
double matched_coupling(const FilmOscillator& osc, const CircuitParams& c);

struct OpticalSpring {
    double delta_Omega_m;  // rad/s
    double Gamma_opt;      // rad/s
};

OpticalSpring optical_spring(const CavityCoupling& cav, const FilmOscillator& osc, double omega);
// Self-energy from the two-sideband form.
cplx optical_self_energy(const CavityCoupling& cav, const FilmOscillator& osc, double omega);
cplx modified_susceptibility(const CavityCoupling& cav, const FilmOscillator& osc, double omega);

NoisePsd output_phase_psd(double T, const NoisePsd& S_VV_in, const NoisePsd& N_xx_th,
                          const NoisePsd& N_phiphi_imp, double k);

}  // namespace poems
