#include "poems/coupled_response.hpp"

#include <cmath>
#include <string>

#include "poems/errors.hpp"

namespace poems {

CircuitParams CircuitParams::resonant_with(double C0, double Omega_LC, double R_L, double R_i,
                                           double G) {
    const double L0 = 1.0 / (Omega_LC * Omega_LC * C0);
    return {L0, Omega_LC, R_L / L0, G, R_L, R_i};
}

void CircuitParams::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0) || std::isinf(v))
            throw ValidationError(std::string(name) + " must be positive and finite");
    };
    pos(L0, "circuit.inductance_h");
    pos(Omega_LC, "circuit.f_lc_hz");
    pos(Gamma_LC, "circuit.damping_rad_s");
    pos(R_L, "calibration.r_l_ohm");
    pos(R_i, "calibration.r_i_ohm");
    if (!(G >= 0.0) || std::isinf(G))
        throw ValidationError("calibration.coupling_g must be nonnegative and finite");
}

cplx circuit_susceptibility(const CircuitParams& c, double Omega) {
    const cplx den(c.Omega_LC * c.Omega_LC - Omega * Omega, -Omega * c.Gamma_LC);
    return 1.0 / (c.L0 * den);
}

cplx effective_susceptibility(const FilmOscillator& osc, const CircuitParams& c, double Omega) {
    const cplx inv = 1.0 / mechanical_susceptibility(osc, Omega) -
                     c.G * c.G * circuit_susceptibility(c, Omega);
    return 1.0 / inv;
}

double transfer_function(const FilmOscillator& osc, const CircuitParams& c, double Omega) {
    if (c.G == 0.0) return 0.0;
    return std::norm(c.G * effective_susceptibility(osc, c, Omega) * circuit_susceptibility(c, Omega));
}

double matched_coupling(const FilmOscillator& osc, const CircuitParams& c) {
    return std::sqrt(osc.m_eff * osc.Omega_m * osc.Gamma_m * c.L0 * c.Omega_LC * c.Gamma_LC);
}

OpticalSpring optical_spring(const CavityCoupling& cav, const FilmOscillator& osc, double omega) {
    const double g2 = cav.vacuum_coupling * cav.vacuum_coupling;
    const double k2 = cav.kappa * cav.kappa / 4.0;
    const double dp = cav.detuning + omega;
    const double dm = cav.detuning - omega;
    const double Dp = dp * dp + k2;
    const double Dm = dm * dm + k2;
    const double scale = g2 * osc.Omega_m / omega;
    return {scale * (dp / Dp + dm / Dm), scale * (cav.kappa / Dp - cav.kappa / Dm)};
}

cplx optical_self_energy(const CavityCoupling& cav, const FilmOscillator& osc, double omega) {
    const double g2 = cav.vacuum_coupling * cav.vacuum_coupling;
    const cplx up(cav.detuning + omega, cav.kappa / 2.0);
    const cplx dn(cav.detuning - omega, -cav.kappa / 2.0);
    return 2.0 * osc.m_eff * osc.Omega_m * g2 * (1.0 / up + 1.0 / dn);
}

cplx modified_susceptibility(const CavityCoupling& cav, const FilmOscillator& osc, double omega) {
    return 1.0 / (1.0 / mechanical_susceptibility(osc, omega) + optical_self_energy(cav, osc, omega));
}

NoisePsd output_phase_psd(double T, const NoisePsd& S_VV_in, const NoisePsd& N_xx_th,
                          const NoisePsd& N_phiphi_imp, double k) {
    S_VV_in.require(PsdDomain::voltage);
    N_xx_th.require(PsdDomain::displacement);
    N_phiphi_imp.require(PsdDomain::phase);
    if (!(T >= 0.0)) throw NumericError("transfer value must be nonnegative");
    return NoisePsd::phase(4.0 * k * k * (T * S_VV_in.value() + N_xx_th.value()) +
                           N_phiphi_imp.value());
}

}  // namespace poems
