#include <doctest.h>

#include <cmath>

#include "poems/constants.hpp"
#include "poems/errors.hpp"
#include "poems/interferometer.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace poems;
using poems::constants::hbar;
using poems::constants::pi;

namespace {

FilmOscillator reference_oscillator() {
    const double m = film_mass(MaterialParams::aln(), FilmGeometry::reference()) / 2.0;
    return FilmOscillator::from_quality(m, 2.0 * pi * 1e9, 1000.0);
}

}  // namespace

TEST_CASE("mirror from power splits r, t and loss") {
    const MirrorSpec m = MirrorSpec::from_power(0.014, 1e-5);
    CHECK(m.r * m.r + m.t * m.t + m.loss == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_NOTHROW(m.validate("m"));
    MirrorSpec bad = m;
    bad.r += 1e-6;
    CHECK_THROWS_AS(bad.validate("m"), ValidationError);
}

TEST_CASE("linearised Michelson current tracks the full field sum") {
    test::Gen gen(21);
    for (int i = 0; i < 1000; ++i) {
        CAPTURE(i);
        OpticalLayout o = OpticalLayout::reference();
        o.P0 = gen.log_uniform(1e-3, 10.0);
        o.lambda0 = gen.uniform(500e-9, 1600e-9);
        o.responsivity = gen.uniform(0.1, 1.0);
        o.phase_t_rad = gen.uniform(-pi, pi);
        o.phase_r1_rad = gen.uniform(-pi, pi);
        o.phase_r2_rad = gen.uniform(-pi, pi);
        const double k0 = wave_number(o.lambda0);
        const MirrorModulation mod{gen.log_uniform(1e-13, 1e-9), gen.log_uniform(1e3, 1e10),
                                   gen.uniform(-pi, pi)};
        const double dL = gen.uniform(-o.lambda0, o.lambda0);
        const double t = gen.uniform(0.0, 1e-6);
        const double x = mod.a_s * std::cos(mod.omega_s * t + mod.phi_s);
        const double lin = michelson_output_current(o, dL, mod, t);
        const double exact = test::michelson_field_current(o.responsivity, o.P0, k0, dL, x, o.phase_t_rad,
                                                           o.phase_r1_rad, o.phase_r2_rad);
        const double ka = k0 * mod.a_s;
        CHECK(std::abs(lin - exact) <= ka * ka * (1.0 + ka) * o.responsivity * o.P0);
    }
}

TEST_CASE("arm reflectance equals its round-trip series") {
    test::Gen gen(22);
    for (int i = 0; i < 1000; ++i) {
        CAPTURE(i);
        const MirrorSpec m1 = MirrorSpec::from_power(gen.log_uniform(1e-3, 0.5), gen.uniform(0.0, 1e-3));
        const MirrorSpec m2 = MirrorSpec::from_power(gen.coin() ? 0.0 : gen.log_uniform(1e-6, 0.5),
                                                     gen.uniform(0.0, 1e-3));
        const double k0 = wave_number(gen.uniform(500e-9, 1600e-9));
        const double L = gen.uniform(1e-3, 1.0);
        const double x = gen.uniform(-1e-9, 1e-9);
        const cplx closed = cavity_reflectance(m1, m2, L, k0, x);
        const cplx series = test::cavity_round_trip_sum(m1.r, m1.t, m2.r, L, k0, x);
        CHECK(std::abs(closed - series) <= 1e-9);
    }
}

TEST_CASE("arm reflectance edge cases") {
    const double k0 = wave_number(1064e-9);
    const MirrorSpec m1 = MirrorSpec::from_power(0.1, 0.0);
    const MirrorSpec perfect = MirrorSpec::from_power(0.0, 0.0);
    // Lossless cavity with a perfect end mirror is all-pass.
    for (double L : {0.01, 0.0751, 0.3})
        CHECK(std::abs(cavity_reflectance(m1, perfect, L, k0, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
    // Two perfect mirrors on resonance have no defined steady state.
    CHECK_THROWS_AS(cavity_reflectance(perfect, perfect, 1064e-9 / 2.0, k0, 0.0), DegenerateCavity);
}

TEST_CASE("dual-recycled output repeats every half wavelength of end-mirror motion") {
    const OpticalLayout o = OpticalLayout::reference();
    test::Gen gen(23);
    for (int i = 0; i < 50; ++i) {
        const double x = gen.uniform(-1e-7, 1e-7);
        const double a = drfpmi_output_current(o, x);
        const double b = drfpmi_output_current(o, x + o.lambda0 / 2.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-6));
        CHECK(a >= 0.0);
    }
    OpticalLayout g = o;
    g.g_prm = 2.0;
    g.g_srm = 3.0;
    CHECK(drfpmi_output_current(g, 1e-10) == doctest::Approx(36.0 * drfpmi_output_current(o, 1e-10)));
}

TEST_CASE("response spectrum is linear and peaks on the tuned sideband") {
    const OpticalLayout o = OpticalLayout::reference();
    CHECK(std::abs(o.sideband_detuning(2.0 * pi * o.signal_resonance_hz)) < 1.0);
    const std::vector<double> w{2.0 * pi * 1e9, 2.0 * pi * 1.05e9, 2.0 * pi * 0.95e9};
    const auto a = response_spectrum(o, w, 1e-12);
    const auto b = response_spectrum(o, w, 3e-12);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(a[i].value == doctest::Approx(b[i].value).epsilon(1e-12));
    CHECK(a[0].value > 10.0 * a[1].value);
    CHECK(a[0].value > 10.0 * a[2].value);
    CHECK(response_spectrum(o, w, 0.0)[0].value == 0.0);
    CHECK(a[0].frequency_hz == doctest::Approx(1e9));
}

TEST_CASE("cavity readout parameters from the layout") {
    const OpticalLayout o = OpticalLayout::reference();
    const FilmOscillator osc = reference_oscillator();
    const CavityCoupling c = derive_cavity_coupling(o, osc);
    const double total = 0.014 + 5e-6 + 2e-5;
    CHECK(c.kappa == doctest::Approx(constants::c * total / (2.0 * 0.075)).epsilon(1e-12));
    CHECK(c.G_opt == doctest::Approx(0.014 / total * wave_number(o.lambda0) * constants::c / 0.15).epsilon(1e-12));
    const double x_zpf = std::sqrt(hbar / (2.0 * osc.m_eff * osc.Omega_m));
    CHECK(c.vacuum_coupling == doctest::Approx(c.G_opt * x_zpf * std::sqrt(c.n_cav)).epsilon(1e-12));
    CHECK(c.detuning == 0.0);
    CHECK(c.n_cav > 0.0);
}

TEST_CASE("optical noise never beats the quantum limit and meets it at the optimum") {
    test::Gen gen(24);
    for (int i = 0; i < 1000; ++i) {
        CAPTURE(i);
        const double kappa = gen.log_uniform(1e4, 1e10);
        const double G = gen.log_uniform(1e10, 1e20);
        const double omega = gen.log_uniform(1.0, 1e10);
        const cplx chi(gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0));
        const cplx chi_m = chi * gen.log_uniform(1e-6, 1e6);
        const double sql = hbar * std::abs(chi_m);
        const double n_star = sql_optimal_n_cav(kappa, G, chi_m, omega);
        const double at_opt = optical_noise_total(kappa, n_star, G, chi_m, omega).value();
        CHECK(at_opt == doctest::Approx(sql).epsilon(1e-9));
        const double n = n_star * gen.log_uniform(1e-3, 1e3);
        CHECK(optical_noise_total(kappa, n, G, chi_m, omega).value() >= sql * (1.0 - 1e-12));
        const double product = optical_imprecision_psd(kappa, n, G, omega).value() *
                               radiation_pressure_psd(kappa, n, G, chi_m, omega).value();
        CHECK(product == doctest::Approx(sql * sql / 4.0).epsilon(1e-9));
    }
}

TEST_CASE("phase noise conversion checks its domain") {
    const NoisePsd x = NoisePsd::displacement(2e-30);
    CHECK(phase_noise_psd(x, 3.0).value() == doctest::Approx(4.0 * 9.0 * 2e-30));
    CHECK(phase_noise_psd(x, 3.0).domain() == PsdDomain::phase);
    CHECK_THROWS_AS(phase_noise_psd(NoisePsd::voltage(1.0), 3.0), DomainMismatch);
}

TEST_CASE("noise-limited spectrum is positive and finite") {
    const OpticalLayout o = OpticalLayout::reference();
    const FilmOscillator osc = reference_oscillator();
    const auto pts = noise_limited_sensitivity_spectrum(o, derive_cavity_coupling(o, osc), osc, {1e3, 1e6, 1e9});
    for (const auto& p : pts) {
        CHECK(p.value > 0.0);
        CHECK(std::isfinite(p.value));
    }
}

TEST_CASE("layout validation names the field") {
    OpticalLayout o = OpticalLayout::reference();
    CHECK_NOTHROW(o.validate());
    o.g_prm = 0.5;
    try {
        o.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("optics.g_prm") != std::string::npos);
    }
}
