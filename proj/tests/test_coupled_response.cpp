#include <doctest.h>

#include <cmath>

#include "poems/constants.hpp"
#include "poems/coupled_response.hpp"
#include "poems/errors.hpp"
#include "support/gen.hpp"

using namespace poems;
using poems::constants::pi;

TEST_CASE("circuit built around the film capacitance resonates at the requested frequency") {
    const double C0 = 3.623e-12;
    const CircuitParams c = CircuitParams::resonant_with(C0, 2.0 * pi * 1e9, 1.0, 75.0, 0.0);
    CHECK(1.0 / std::sqrt(c.L0 * C0) == doctest::Approx(2.0 * pi * 1e9).epsilon(1e-12));
    CHECK(c.Gamma_LC == doctest::Approx(1.0 / c.L0));
    const cplx chi = circuit_susceptibility(c, c.Omega_LC);
    CHECK(std::abs(chi.real()) < 1e-12 * std::abs(chi));
}

TEST_CASE("uncoupled circuit leaves the mechanics alone") {
    const FilmOscillator osc = FilmOscillator::from_quality(2e-9, 2.0 * pi * 1e9, 1000.0);
    const CircuitParams c = CircuitParams::resonant_with(3.6e-12, 2.0 * pi * 1e9, 1.0, 75.0, 0.0);
    for (double f : {0.9e9, 1e9, 1.1e9}) {
        const double w = 2.0 * pi * f;
        const cplx chi = mechanical_susceptibility(osc, w);
        CHECK(std::abs(effective_susceptibility(osc, c, w) - chi) <= 1e-14 * std::abs(chi));
        CHECK(transfer_function(osc, c, w) == 0.0);
    }
}

TEST_CASE("matched coupling maximises the resonant transfer") {
    test::Gen gen(31);
    for (int i = 0; i < 1000; ++i) {
        CAPTURE(i);
        const double W = 2.0 * pi * gen.log_uniform(1e6, 1e10);
        const FilmOscillator osc = FilmOscillator::from_quality(gen.log_uniform(1e-12, 1e-6), W,
                                                                gen.log_uniform(10.0, 1e5));
        CircuitParams c = CircuitParams::resonant_with(gen.log_uniform(1e-13, 1e-10), W,
                                                       gen.log_uniform(0.1, 10.0), 50.0, 0.0);
        const double g_star = matched_coupling(osc, c);
        c.G = g_star;
        const double best = transfer_function(osc, c, W);
        c.G = g_star * gen.log_uniform(1e-3, 1e3);
        CHECK(transfer_function(osc, c, W) <= best * (1.0 + 1e-9));
    }
}

TEST_CASE("self-energy real and imaginary parts are the optical spring and damping") {
    test::Gen gen(32);
    for (int i = 0; i < 1000; ++i) {
        CAPTURE(i);
        const FilmOscillator osc = FilmOscillator::from_quality(gen.log_uniform(1e-12, 1e-6),
                                                                2.0 * pi * gen.log_uniform(1e6, 1e10), 1000.0);
        const double kappa = gen.log_uniform(1e5, 1e10);
        const CavityCoupling cav{gen.uniform(-2.0, 2.0) * kappa, kappa, gen.log_uniform(1.0, 1e6), 1e10, 1e18};
        const double w = osc.Omega_m * gen.uniform(0.5, 1.5);
        const cplx sigma = optical_self_energy(cav, osc, w);
        const OpticalSpring s = optical_spring(cav, osc, w);
        CHECK(sigma.real() / (2.0 * osc.m_eff * w) == doctest::Approx(s.delta_Omega_m).epsilon(1e-9));
        CHECK(-sigma.imag() / (osc.m_eff * w) == doctest::Approx(s.Gamma_opt).epsilon(1e-9));
        const cplx inv = 1.0 / modified_susceptibility(cav, osc, w);
        CHECK(std::abs(inv - (1.0 / mechanical_susceptibility(osc, w) + sigma)) <= 1e-12 * std::abs(inv));
    }
}

TEST_CASE("resonant readout has no optical spring") {
    const FilmOscillator osc = FilmOscillator::from_quality(1e-9, 2.0 * pi * 1e9, 1000.0);
    const CavityCoupling cav{0.0, 2.8e7, 100.0, 1e12, 1e17};
    const OpticalSpring s = optical_spring(cav, osc, osc.Omega_m);
    CHECK(s.delta_Omega_m == 0.0);
    CHECK(s.Gamma_opt == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("output phase noise combines domains in the right order") {
    const double k = 2.0 * pi / 1064e-9;
    const NoisePsd out = output_phase_psd(2.0, NoisePsd::voltage(3.0), NoisePsd::displacement(5.0),
                                          NoisePsd::phase(7.0), k);
    CHECK(out.value() == doctest::Approx(4.0 * k * k * (2.0 * 3.0 + 5.0) + 7.0));
    CHECK(out.domain() == PsdDomain::phase);
    CHECK_THROWS_AS(output_phase_psd(2.0, NoisePsd::displacement(3.0), NoisePsd::displacement(5.0),
                                     NoisePsd::phase(7.0), k),
                    DomainMismatch);
    CHECK_THROWS_AS(output_phase_psd(2.0, NoisePsd::voltage(3.0), NoisePsd::phase(5.0), NoisePsd::phase(7.0), k),
                    DomainMismatch);
}

TEST_CASE("noise PSD arithmetic respects domains") {
    CHECK((NoisePsd::voltage(1.0) + NoisePsd::voltage(2.0)).value() == 3.0);
    CHECK_THROWS_AS(NoisePsd::voltage(1.0) + NoisePsd::phase(2.0), DomainMismatch);
    CHECK_THROWS_AS(NoisePsd::voltage(-1.0), NumericError);
    CHECK_THROWS_AS(NoisePsd::voltage(std::nan("")), NumericError);
    CHECK((2.0 * NoisePsd::current(1.5)).value() == 3.0);
}

TEST_CASE("circuit validation") {
    CircuitParams c = CircuitParams::resonant_with(3.6e-12, 2.0 * pi * 1e9, 1.0, 75.0, 0.0);
    CHECK_NOTHROW(c.validate());
    c.G = -1.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}
