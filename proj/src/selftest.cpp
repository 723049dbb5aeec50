#include "poems/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "poems/constants.hpp"
#include "poems/coupled_response.hpp"
#include "poems/emit.hpp"
#include "poems/errors.hpp"
#include "poems/interferometer.hpp"
#include "poems/link_sim.hpp"
#include "poems/material_film.hpp"
#include "poems/noise_budget.hpp"

namespace poems {

namespace {

using constants::pi;

bool close(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

std::string show(double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << a << " vs " << b;
    return os.str();
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
    std::vector<SelfCheck> out;
    auto check = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        try {
            auto [ok, detail] = fn();
            out.push_back({name, ok, detail});
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    const MaterialParams aln = MaterialParams::aln();
    const FilmGeometry geom = FilmGeometry::reference();
    const FilmOscillator osc = FilmOscillator::from_quality(1e-9, 2 * pi * 1e9, 1000.0);

    check("phase velocity is 1 m/s when c_D equals rho", [&] {
        MaterialParams m = aln;
        m.c_D = m.rho;
        return std::pair{close(phase_velocity(m), 1.0), show(phase_velocity(m), 1.0)};
    });
    check("zero e33 gives zero coupling", [&] {
        MaterialParams m = aln;
        m.e33 = 0.0;
        return std::pair{coupling_kt2(m) == 0.0, show(coupling_kt2(m), 0.0)};
    });
    check("uncoupled series resonance is the half-wave frequency", [&] {
        MaterialParams m = aln;
        m.e33 = 0.0;
        const double expect = pi * phase_velocity(m) / geom.L_T;
        return std::pair{close(series_resonance(m, geom), expect), show(series_resonance(m, geom), expect)};
    });
    check("uncoupled film impedance is a pure capacitor", [&] {
        MaterialParams m = aln;
        m.e33 = 0.0;
        const double w = 2 * pi * 7e8;
        const cplx z = input_impedance(m, geom, w);
        const cplx expect = 1.0 / cplx(0.0, w * static_capacitance(m, geom));
        return std::pair{std::abs(z - expect) <= 1e-12 * std::abs(expect), show(z.imag(), expect.imag())};
    });
    check("damped displacement doubles with Q", [&] {
        const DriveSignal d{1.0, series_resonance(aln, geom)};
        const double a = std::abs(surface_displacement_damped(aln, geom, d, 1000.0));
        const double b = std::abs(surface_displacement_damped(aln, geom, d, 2000.0));
        return std::pair{close(b, 2.0 * a), show(b, 2.0 * a)};
    });
    check("mechanical susceptibility is imaginary at resonance", [&] {
        const cplx chi = mechanical_susceptibility(osc, osc.Omega_m);
        const double expect = 1.0 / (osc.m_eff * osc.Omega_m * osc.Gamma_m);
        return std::pair{chi.real() == 0.0 && close(chi.imag(), expect), show(chi.imag(), expect)};
    });
    check("Michelson dark fringe carries no current", [&] {
        OpticalLayout o = OpticalLayout::reference();
        const double k0 = wave_number(o.lambda0);
        const double i = michelson_output_current(o, pi / 2.0 / k0, {1e-12, 1e6, 0.3}, 1e-7);
        return std::pair{std::abs(i) < 1e-12 * o.responsivity * o.P0, show(i, 0.0)};
    });
    check("cavity without end mirror reflects like the input mirror", [&] {
        const MirrorSpec m1 = MirrorSpec::from_power(0.014, 1e-5);
        const MirrorSpec m2{0.0, 1.0, 0.0};
        const cplx r = cavity_reflectance(m1, m2, 0.075, wave_number(1064e-9), 0.0);
        return std::pair{r == cplx(m1.r, 0.0), show(r.real(), m1.r)};
    });
    check("lossless cavity with a perfect end mirror reflects all power", [&] {
        const MirrorSpec m1 = MirrorSpec::from_power(0.3, 0.0);
        const MirrorSpec m2 = MirrorSpec::from_power(0.0, 0.0);
        const double mag = std::abs(cavity_reflectance(m1, m2, 0.0123, 4.1e6, 0.0));
        return std::pair{std::abs(mag - 1.0) < 1e-9, show(mag, 1.0)};
    });
    check("opaque input mirrors give both arm brackets equal to one", [&] {
        OpticalLayout o = OpticalLayout::reference();
        o.itmn = o.itme = MirrorSpec{1.0, 0.0, 0.0};
        const double i = drfpmi_output_current(o, 3e-13);
        const double expect = 0.5 * o.responsivity * o.P0 * 4.0;
        return std::pair{close(i, expect), show(i, expect)};
    });
    check("responsivity is 1 A/W at lambda = hc/e", [&] {
        const double lam = constants::h * constants::c / constants::e;
        return std::pair{close(watts_to_ampere(lam), 1.0), show(watts_to_ampere(lam), 1.0)};
    });
    check("imprecision noise doubles at omega = kappa/2", [&] {
        const double a = optical_imprecision_psd(1e7, 1e9, 1e15, 0.0).value();
        const double b = optical_imprecision_psd(1e7, 1e9, 1e15, 5e6).value();
        return std::pair{close(b, 2.0 * a), show(b, 2.0 * a)};
    });
    check("imprecision times back-action is hbar^2 |chi|^2 / 4", [&] {
        const cplx chi = mechanical_susceptibility(osc, 0.99 * osc.Omega_m);
        const double p = optical_imprecision_psd(3e7, 4e11, 1e16, 2e6).value() *
                         radiation_pressure_psd(3e7, 4e11, 1e16, chi, 2e6).value();
        const double expect = constants::hbar * constants::hbar * std::norm(chi) / 4.0;
        return std::pair{close(p, expect, 1e-10), show(p, expect)};
    });
    check("phase noise scales with (2k)^2", [&] {
        const double a = phase_noise_psd(NoisePsd::displacement(3.4e-55), 1.0).value();
        const double b = phase_noise_psd(NoisePsd::displacement(3.4e-55), 2.0).value();
        return std::pair{close(b, 4.0 * a), show(b, 4.0 * a)};
    });
    check("zero coupling transfers nothing", [&] {
        const CircuitParams c = CircuitParams::resonant_with(3.6e-12, 2 * pi * 1e9, 1.0, 75.0, 0.0);
        return std::pair{transfer_function(osc, c, osc.Omega_m) == 0.0, std::string("T = 0")};
    });
    check("optical spring vanishes at zero detuning", [&] {
        const auto s = optical_spring({0.0, 3e7, 1e5, 1e11, 1e16}, osc, osc.Omega_m);
        return std::pair{std::abs(s.delta_Omega_m) < 1e-20 && std::abs(s.Gamma_opt) < 1e-20,
                         show(s.delta_Omega_m, s.Gamma_opt)};
    });
    check("output phase PSD of unit input is (2k)^2 T", [&] {
        const double k = 5.9e6, T = 3.7e-20;
        const double v = output_phase_psd(T, NoisePsd::voltage(1.0), NoisePsd::displacement(0.0),
                                          NoisePsd::phase(0.0), k).value();
        return std::pair{close(v, 4 * k * k * T), show(v, 4 * k * k * T)};
    });
    check("Johnson noise vanishes at zero temperature", [&] {
        return std::pair{electrical_noise_psd(0.0, 1.0).value() == 0.0, std::string("0")};
    });
    check("zero signal gives zero SNR", [&] {
        NoiseComponents n{NoisePsd::voltage(1e-20), NoisePsd::displacement(1e-50), NoisePsd::phase(1e-30)};
        return std::pair{system_snr(NoisePsd::voltage(0.0), n, 1e-10, 5.9e6) == 0.0, std::string("0")};
    });
    check("doubling bandwidth doubles minimum power", [&] {
        const double a = min_power(NoisePsd::voltage(1e-18), 1e6, 50.0).watts;
        const double b = min_power(NoisePsd::voltage(1e-18), 2e6, 50.0).watts;
        return std::pair{close(b, 2.0 * a), show(b, 2.0 * a)};
    });
    check("reference table has eight rows", [&] {
        return std::pair{reference_levels().size() == 8u, std::to_string(reference_levels().size())};
    });
    check("LNA at the threshold gain changes nothing", [&] {
        const double n_xx = 3e-21, n_L = 6e-19;
        const LnaGain g = lna_snr_gain(1e-20, 8e-21, n_xx, {n_L / n_xx + 1.0, n_L});
        return std::pair{!g.improves && std::abs(g.gain) <= 1e-12 * g.snr_without, show(g.gain, 0.0)};
    });
    check("OOK BER at zero SNR is one half", [&] {
        return std::pair{analytic_ook_ber(0.0) == 0.5, show(analytic_ook_ber(0.0), 0.5)};
    });
    check("capacity bounds vanish without signal", [&] {
        const auto b = capacity_bounds(0.0, 1e-18);
        return std::pair{b.lower == 0.0 && b.upper == 0.0, show(b.lower, b.upper)};
    });
    check("all-zero bits modulate to silence", [&] {
        const auto s = ook_modulate(std::vector<std::uint8_t>(16, 0), LinkConfig{}, 75.0);
        bool ok = true;
        for (double v : s) ok = ok && v == 0.0;
        return std::pair{ok, std::string("16 symbols")};
    });
    check("empty table renders as a header-only CSV", [&] {
        Table t{{"a", "b"}, {}};
        return std::pair{render_table(t, Format::csv) == "a,b\n", render_table(t, Format::csv)};
    });
    return out;
}

}  // namespace poems
