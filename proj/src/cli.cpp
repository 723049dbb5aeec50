#include "poems/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "poems/config.hpp"
#include "poems/constants.hpp"
#include "poems/diagnostics.hpp"
#include "poems/emit.hpp"
#include "poems/errors.hpp"
#include "poems/link_sim.hpp"
#include "poems/noise_budget.hpp"
#include "poems/selftest.hpp"

namespace poems {

using constants::pi;

void SweepSpec::validate() const {
    if (!(start < stop)) throw UsageError("sweep needs start < stop");
    if (n_points < 2) throw UsageError("sweep needs at least 2 points");
    if (log_spacing && !(start > 0.0)) throw UsageError("log spacing needs a positive start");
}

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> g(n_points);
    const double n = static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double u = static_cast<double>(i) / n;
        g[i] = log_spacing ? start * std::pow(stop / start, u) : start + (stop - start) * u;
    }
    g.front() = start;
    g.back() = stop;
    return g;
}

SweepVariable parse_sweep_variable(const std::string& name) {
    static const std::map<std::string, SweepVariable> names = {
        {"bandwidth", SweepVariable::bandwidth},
        {"loss", SweepVariable::loss},
        {"channel_noise", SweepVariable::channel_noise},
        {"signal_power", SweepVariable::signal_power},
        {"frequency", SweepVariable::frequency},
    };
    const auto it = names.find(name);
    if (it == names.end()) throw UsageError("unknown sweep variable '" + name + "'");
    return it->second;
}

namespace {

struct Common {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
    unsigned threads = 0;
    // Options of the subcommand that actually ran.
    const CLI::App* chosen = nullptr;
    bool given(const std::string& name) const {
        const CLI::Option* o = chosen ? chosen->get_option_no_throw(name) : nullptr;
        return o && o->count() > 0;
    }
};

void add_common(CLI::App* cmd, Common& c, bool seeded, bool parallel) {
    cmd->add_option("--config", c.config, "Config file (default: $POEMS_CONFIG)");
    cmd->add_option("--out", c.out, "Output file (default: stdout)");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    if (seeded) cmd->add_option("--seed", c.seed, "Monte Carlo seed (overrides link.seed)");
    if (parallel) cmd->add_option("--threads", c.threads, "Worker threads (overrides link.threads)");
}

struct Context {
    RunConfig cfg;
    std::optional<std::string> config_path;
    std::ostream& out;
    std::ostream& err;
    const Common& common;

    LinkConfig link() const {
        LinkConfig l = cfg.link.link;
        if (common.given("--seed")) l.seed = common.seed;
        if (common.given("--threads")) l.threads = common.threads;
        return l;
    }

    ReceiverModel model() const {
        std::optional<CalibrationResult> info;
        ReceiverModel m = calibrated_model(cfg, &info);
        if (info)
            err << "note: calibration.coupling_g not set; calibrated to " << format_double(info->coupling_g)
                << " against " << cfg.calibration.anchor.target_dbm << " dBm\n";
        return m;
    }

    void emit(const Table& t) const { poems::emit(t, parse_format(common.format), common.out, out); }
};

Table sensitivity_table(const std::vector<SensitivityResult>& rows) {
    Table t{{"bandwidth_hz", "loss_coeff", "with_lna", "min_power_dbm", "min_psd_v2_per_hz"}, {}};
    for (const auto& r : rows)
        t.add_row({r.bandwidth_hz, r.loss_coefficient, r.with_lna, r.min_power_dbm, r.min_psd});
    return t;
}

Table ber_table(const std::string& x_name, const std::vector<double>& xs,
                const std::vector<BerResult>& results, std::uint64_t seed) {
    Table t{{x_name, "value", "ci_low", "ci_high", "n_bits", "seed"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const BerResult& r = results[i];
        t.add_row({xs[i], r.ber, r.wilson_ci95.low, r.wilson_ci95.high,
                   static_cast<std::int64_t>(r.n_bits), static_cast<std::int64_t>(seed)});
    }
    return t;
}

std::vector<BerResult> ber_over(const ReceiverModel& model, LinkConfig base, bool vary_noise,
                                const std::vector<double>& xs) {
    std::vector<BerResult> out;
    for (double x : xs) {
        LinkConfig c = base;
        if (vary_noise)
            c.channel_noise_dbm = x;
        else
            c.signal_power_dbm = x;
        out.push_back(run_link(model, c));
    }
    return out;
}

std::vector<double> range(double start, double stop, double step) {
    std::vector<double> v;
    for (double x = start; x <= stop + 1e-9 * std::abs(step); x += step) v.push_back(x);
    return v;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Frequency-domain simulator and noise budget for a piezo-opto-electro-mechanical RF receiver",
                 "poems"};
    app.require_subcommand(1);
    Common common;
    std::function<void(Context&)> action;

    // admittance
    double f_start = 0.85e9, f_stop = 1.15e9;
    std::size_t points = 601;
    auto* adm = app.add_subcommand("admittance", "Film admittance spectrum");
    add_common(adm, common, false, false);
    adm->add_option("--f-start", f_start, "Start frequency, Hz");
    adm->add_option("--f-stop", f_stop, "Stop frequency, Hz");
    adm->add_option("--points", points, "Number of samples");
    adm->callback([&] {
        action = [&](Context& ctx) {
            const AdmittanceSweep s =
                admittance_spectrum(ctx.cfg.material, ctx.cfg.geometry, f_start, f_stop, points);
            Table t{{"frequency_hz", "re_admittance_s", "im_admittance_s", "abs_admittance_s", "is_pole"}, {}};
            for (const auto& p : s.samples)
                t.add_row({p.frequency_hz, p.admittance.real(), p.admittance.imag(),
                           std::abs(p.admittance), p.is_pole});
            ctx.emit(t);
            ctx.err << "peak |Y| at " << format_double(s.samples[s.peak_index].frequency_hz) << " Hz\n";
        };
    });

    // response
    double amplitude_m = 1e-12;
    bool noise_limited = false;
    auto* resp = app.add_subcommand("response", "Optical response or noise-limited sensitivity spectrum");
    add_common(resp, common, false, false);
    resp->add_option("--f-start", f_start, "Start frequency, Hz");
    resp->add_option("--f-stop", f_stop, "Stop frequency, Hz");
    resp->add_option("--points", points, "Number of samples");
    resp->add_option("--amplitude-m", amplitude_m, "End-mirror modulation amplitude, m");
    resp->add_flag("--noise-limited", noise_limited, "Emit the noise-limited displacement sensitivity");
    resp->callback([&] {
        action = [&](Context& ctx) {
            const SweepSpec spec{SweepVariable::frequency, f_start, f_stop, points};
            const std::vector<double> freqs = spec.grid();
            const OpticalLayout layout = ctx.cfg.optical_layout();
            if (noise_limited) {
                const ReceiverModel m = ctx.cfg.receiver_model();
                const auto pts = noise_limited_sensitivity_spectrum(layout, m.cavity(), m.oscillator, freqs);
                Table t{{"frequency_hz", "sensitivity_m_per_rthz"}, {}};
                for (const auto& p : pts) t.add_row({p.frequency_hz, p.value});
                ctx.emit(t);
                return;
            }
            std::vector<double> omegas;
            for (double f : freqs) omegas.push_back(2.0 * pi * f);
            Table t{{"frequency_hz", "response_a_per_pm"}, {}};
            const auto pts = response_spectrum(layout, omegas, amplitude_m);
            for (std::size_t i = 0; i < pts.size(); ++i) t.add_row({freqs[i], pts[i].value});
            ctx.emit(t);
        };
    });

    // sensitivity
    std::vector<double> bandwidths{3.75e3};
    std::vector<double> losses{1e-5};
    bool with_lna = false;
    CLI::Option* lna_opt = nullptr;
    auto lna_setting = [&](const Context& ctx) {
        return lna_opt && lna_opt->count() ? with_lna : ctx.cfg.link.link.with_lna;
    };
    auto* sens = app.add_subcommand("sensitivity", "Minimum detectable power (SNR = 0 dB)");
    add_common(sens, common, false, true);
    sens->add_option("--bandwidth", bandwidths, "Bandwidth(s), Hz")->delimiter(',');
    sens->add_option("--loss", losses, "Mirror power loss coefficient(s)")->delimiter(',');
    lna_opt = sens->add_flag("--lna,!--no-lna", with_lna, "Include or omit the LNA (default: link.lna)");
    sens->callback([&] {
        action = [&](Context& ctx) {
            ctx.emit(sensitivity_table(sensitivity_sweep(ctx.model(), bandwidths, losses, lna_setting(ctx),
                                                         ctx.link().threads)));
        };
    });

    // noise-budget
    double signal_dbm = -160.0;
    double channel_dbm = -165.0;
    bool no_lna = false, transfer = false;
    CLI::Option* channel_opt = nullptr;
    CLI::Option* fstart_opt = nullptr;
    CLI::Option* fstop_opt = nullptr;
    auto* nb = app.add_subcommand("noise-budget", "Input-referred noise contributions across frequency");
    add_common(nb, common, false, false);
    fstart_opt = nb->add_option("--f-start", f_start, "Start frequency, Hz (default carrier - 5 MHz)");
    fstop_opt = nb->add_option("--f-stop", f_stop, "Stop frequency, Hz (default carrier + 5 MHz)");
    nb->add_option("--points", points, "Number of samples");
    nb->add_option("--signal-power-dbm", signal_dbm, "Signal power, dBm");
    channel_opt = nb->add_option("--channel-noise-dbm", channel_dbm, "Channel noise power, dBm");
    nb->add_flag("--no-lna", no_lna, "Omit the LNA");
    nb->add_flag("--transfer", transfer, "Emit the electromechanical transfer function instead");
    nb->callback([&] {
        action = [&](Context& ctx) {
            ReceiverModel m = ctx.model();
            const LinkConfig link = ctx.link();
            const double fc = link.carrier_hz;
            const double a = fstart_opt->count() ? f_start : fc - 5e6;
            const double b = fstop_opt->count() ? f_stop : fc + 5e6;
            const std::vector<double> freqs = SweepSpec{SweepVariable::frequency, a, b, points}.grid();
            if (transfer) {
                Table t{{"omega_rad_s", "transfer_dimensionless", "abs_chi_m_eff", "abs_chi_lc"}, {}};
                for (double f : freqs) {
                    const double w = 2.0 * pi * f;
                    t.add_row({w, transfer_function(m.oscillator, m.circuit, w),
                               std::abs(effective_susceptibility(m.oscillator, m.circuit, w)),
                               std::abs(circuit_susceptibility(m.circuit, w))});
                }
                ctx.emit(t);
                return;
            }
            const double R_i = m.circuit.R_i;
            const std::optional<double> ch =
                channel_opt->count() ? std::optional<double>(channel_dbm) : link.channel_noise_dbm;
            m.channel_noise_psd = ch ? dbm_to_watts(*ch) * R_i / link.bandwidth_hz : 0.0;
            const bool lna = link.with_lna && !no_lna;
            const double signal = dbm_to_watts(signal_dbm) * R_i / link.bandwidth_hz;
            Table t{{"frequency_hz", "transfer_dimensionless", "signal_v2_per_hz", "johnson_v2_per_hz",
                     "channel_v2_per_hz", "lna_v2_per_hz", "film_v2_per_hz", "optical_v2_per_hz",
                     "total_noise_v2_per_hz"},
                    {}};
            for (double f : freqs) {
                const ChainContributions c = m.contributions(f, lna);
                t.add_row({f, c.transfer, signal, c.johnson, c.channel, c.lna, c.film, c.optical,
                           c.min_signal_psd});
            }
            ctx.emit(t);
        };
    });

    // sweep
    std::string variable;
    double start = 0.0, stop = 0.0;
    std::size_t sweep_points = 11;
    bool log_spacing = false;
    double fixed_bandwidth = 3.75e3;
    auto* sw = app.add_subcommand("sweep", "One-dimensional parameter sweep");
    add_common(sw, common, true, true);
    sw->add_option("--variable", variable, "bandwidth|loss|channel_noise|signal_power|frequency")
        ->required()
        ->check(CLI::IsMember({"bandwidth", "loss", "channel_noise", "signal_power", "frequency"}));
    sw->add_option("--start", start, "Sweep start")->required();
    sw->add_option("--stop", stop, "Sweep stop")->required();
    sw->add_option("--points", sweep_points, "Number of points");
    sw->add_flag("--log", log_spacing, "Logarithmic spacing");
    CLI::Option* sw_lna = sw->add_flag("--lna,!--no-lna", with_lna, "Include or omit the LNA (default: link.lna)");
    sw->add_option("--loss", losses, "Loss coefficient(s) for a bandwidth sweep")->delimiter(',');
    sw->add_option("--bandwidth", fixed_bandwidth, "Bandwidth for a loss sweep, Hz");
    sw->callback([&] {
        action = [&](Context& ctx) {
            const SweepSpec spec{parse_sweep_variable(variable), start, stop, sweep_points, log_spacing};
            const std::vector<double> g = spec.grid();
            const LinkConfig link = ctx.link();
            const ReceiverModel m = ctx.model();
            const bool lna = sw_lna->count() ? with_lna : link.with_lna;
            switch (spec.variable) {
                case SweepVariable::bandwidth:
                    ctx.emit(sensitivity_table(sensitivity_sweep(m, g, losses, lna, link.threads)));
                    break;
                case SweepVariable::loss:
                    ctx.emit(sensitivity_table(
                        sensitivity_sweep(m, {fixed_bandwidth}, g, lna, link.threads)));
                    break;
                case SweepVariable::channel_noise:
                    ctx.emit(ber_table("channel_noise_dbm", g, ber_over(m, link, true, g), link.seed));
                    break;
                case SweepVariable::signal_power:
                    ctx.emit(ber_table("signal_power_dbm", g, ber_over(m, link, false, g), link.seed));
                    break;
                case SweepVariable::frequency: {
                    Table t{{"frequency_hz", "transfer_dimensionless", "min_signal_psd_v2_per_hz"}, {}};
                    for (double f : g) {
                        const ChainContributions c = m.contributions(f, lna);
                        t.add_row({f, c.transfer, c.min_signal_psd});
                    }
                    ctx.emit(t);
                    break;
                }
            }
        };
    });

    // ber
    std::vector<double> ber_signal, ber_noise;
    auto* ber = app.add_subcommand("ber", "Monte Carlo OOK bit error rate");
    add_common(ber, common, true, true);
    ber->add_option("--signal-power-dbm", ber_signal, "Signal power(s), dBm")->delimiter(',');
    ber->add_option("--channel-noise-dbm", ber_noise, "Channel noise power(s), dBm")->delimiter(',');
    ber->callback([&] {
        action = [&](Context& ctx) {
            const LinkConfig link = ctx.link();
            if (ber_signal.size() > 1 && ber_noise.size() > 1)
                throw UsageError("vary either --signal-power-dbm or --channel-noise-dbm, not both");
            LinkConfig base = link;
            if (ber_signal.size() == 1) base.signal_power_dbm = ber_signal.front();
            if (ber_noise.size() == 1) base.channel_noise_dbm = ber_noise.front();
            const ReceiverModel m = ctx.model();
            if (ber_signal.size() > 1) {
                ctx.emit(ber_table("signal_power_dbm", ber_signal, ber_over(m, base, false, ber_signal),
                                   link.seed));
                return;
            }
            std::vector<double> xs = ber_noise;
            if (xs.empty()) {
                if (!base.channel_noise_dbm)
                    throw UsageError("link.channel_noise_dbm is none; pass --channel-noise-dbm");
                xs = {*base.channel_noise_dbm};
            }
            ctx.emit(ber_table("channel_noise_dbm", xs, ber_over(m, base, true, xs), link.seed));
        };
    });

    // snr
    std::vector<double> snr_noise;
    double snr_signal = -150.0;
    auto* snr = app.add_subcommand("snr", "Output SNR versus channel noise power");
    add_common(snr, common, true, true);
    snr->add_option("--channel-noise-dbm", snr_noise, "Channel noise power(s), dBm")->delimiter(',');
    snr->add_option("--signal-power-dbm", snr_signal, "Signal power, dBm");
    snr->callback([&] {
        action = [&](Context& ctx) {
            LinkConfig link = ctx.link();
            link.signal_power_dbm = snr_signal;
            const std::vector<double> xs = snr_noise.empty() ? range(-180.0, -140.0, 5.0) : snr_noise;
            Table t{{"channel_noise_dbm", "value", "ci_low", "ci_high", "n_bits", "seed"}, {}};
            for (const auto& p : snr_curve(ctx.model(), link, xs))
                t.add_row({p.channel_noise_dbm, p.mc_snr_db, p.mc_ci95_db.low, p.mc_ci95_db.high,
                           static_cast<std::int64_t>(p.n_bits), static_cast<std::int64_t>(link.seed)});
            ctx.emit(t);
        };
    });

    // capacity
    double cap_start = -170.0, cap_stop = -130.0;
    std::size_t cap_points = 41;
    double cap_noise = -165.0;
    auto* cap = app.add_subcommand("capacity", "Capacity bounds versus received power");
    add_common(cap, common, false, false);
    cap->add_option("--start", cap_start, "First signal power, dBm");
    cap->add_option("--stop", cap_stop, "Last signal power, dBm");
    cap->add_option("--points", cap_points, "Number of points");
    cap->add_option("--channel-noise-dbm", cap_noise, "Channel noise power, dBm");
    cap->callback([&] {
        action = [&](Context& ctx) {
            LinkConfig link = ctx.link();
            link.channel_noise_dbm = cap_noise;
            const ReceiverModel m = ctx.model();
            const double noise = total_noise_power(m, link);
            Table t{{"signal_power_dbm", "snr_db", "lower_bits_per_s_per_hz", "upper_bits_per_s_per_hz"}, {}};
            for (double p : SweepSpec{SweepVariable::signal_power, cap_start, cap_stop, cap_points}.grid()) {
                const double s = dbm_to_watts(p);
                const CapacityBounds b = capacity_bounds(s, noise);
                t.add_row({p, 10.0 * std::log10(s / noise), b.lower, b.upper});
            }
            ctx.emit(t);
        };
    });

    // reference-table
    bool atom = false;
    auto* ref = app.add_subcommand("reference-table", "Base-station reference sensitivity levels");
    add_common(ref, common, false, false);
    ref->add_flag("--atom", atom, "Emit the atom-sensing baseline instead");
    ref->callback([&] {
        action = [&](Context& ctx) {
            if (atom) {
                const double E = 5e-4, A = 1e-4, G = std::pow(10.0, 1.5);
                Table t{{"e_min_v_per_m_rthz", "area_m2", "antenna_gain", "bandwidth_hz", "watts", "dbm"}, {}};
                for (double B : {1.0, 3.75e3}) {
                    const double w = atom_equivalent_sensitivity(E, A, G, B);
                    t.add_row({E, A, G, B, w, watts_to_dbm(w)});
                }
                ctx.emit(t);
                return;
            }
            Table t{{"standard", "class", "bandwidth_hz", "dbm"}, {}};
            for (const auto& r : reference_levels()) t.add_row({r.standard, r.bs_class, r.bandwidth_hz, r.dbm});
            ctx.emit(t);
        };
    });

    // selftest
    bool calibrate = false;
    int selftest_status = 0;
    auto* st = app.add_subcommand("selftest", "Run the built-in identity checks, or calibrate the coupling");
    add_common(st, common, false, false);
    st->add_flag("--calibrate", calibrate, "Solve coupling_g against the sensitivity anchor and write it back");
    st->callback([&] {
        action = [&](Context& ctx) {
            if (calibrate) {
                const CalibrationResult r =
                    calibrate_coupling(ctx.cfg.receiver_model(), ctx.cfg.calibration.anchor);
                Table t{{"coupling_g", "matched_g", "achieved_dbm", "target_dbm"}, {}};
                t.add_row({r.coupling_g, r.matched_g, r.achieved_dbm, ctx.cfg.calibration.anchor.target_dbm});
                ctx.emit(t);
                if (ctx.config_path) {
                    write_coupling_g(*ctx.config_path, r.coupling_g);
                    ctx.err << "wrote calibration.coupling_g to " << *ctx.config_path << '\n';
                } else {
                    ctx.err << "no config file given; coupling_g not written back\n";
                }
                return;
            }
            std::size_t failed = 0;
            for (const auto& c : run_selftest()) {
                ctx.out << (c.passed ? "PASS " : "FAIL ") << c.name;
                if (!c.passed) {
                    ctx.out << " (" << c.detail << ')';
                    ++failed;
                }
                ctx.out << '\n';
            }
            if (failed) selftest_status = static_cast<int>(ErrorClass::numeric);
        };
    });

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorClass::usage);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    }

    try {
        common.chosen = app.get_subcommands().front();
        const std::optional<std::string> path = resolve_config_path(
            common.given("--config") ? std::optional<std::string>(common.config) : std::nullopt);
        const WarningHandler previous =
            set_warning_handler([&err](const std::string& m) { err << "warning: " << m << '\n'; });
        struct Restore {
            WarningHandler h;
            ~Restore() { set_warning_handler(std::move(h)); }
        } restore{previous};
        // Calibration write-back may target a file that does not exist yet.
        RunConfig cfg;
        if (path && !(calibrate && !std::ifstream(*path)))
            cfg = load_config(*path);
        else
            cfg.validate();
        Context ctx{cfg, path, out, err, common};
        action(ctx);
        return selftest_status;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace poems
