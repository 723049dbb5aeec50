#include "poems/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <sstream>
#include <vector>

#include "poems/constants.hpp"
#include "poems/errors.hpp"

namespace poems {

using constants::pi;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct Value {
    std::string text;
    std::size_t line;
    std::size_t column;

    [[noreturn]] void fail(const std::string& why) const { throw ParseError(why, line, column); }

    double number() const {
        double v = 0.0;
        const char* b = text.data();
        const char* e = b + text.size();
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e || !std::isfinite(v))
            fail("expected a finite number, got '" + text + "'");
        return v;
    }

    std::optional<double> number_or(const char* keyword) const {
        if (text == keyword) return std::nullopt;
        return number();
    }

    std::uint64_t unsigned_integer() const {
        std::uint64_t v = 0;
        const char* b = text.data();
        const char* e = b + text.size();
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) fail("expected a nonnegative integer, got '" + text + "'");
        return v;
    }

    bool boolean() const {
        if (text == "true") return true;
        if (text == "false") return false;
        fail("expected true or false, got '" + text + "'");
    }
};

using Setter = std::function<void(RunConfig&, const Value&)>;
using Registry = std::map<std::string, std::map<std::string, Setter>>;

#define NUM(field) [](RunConfig& c, const Value& v) { c.field = v.number(); }
#define OPT(field, kw) [](RunConfig& c, const Value& v) { c.field = v.number_or(kw); }

const Registry& registry() {
    static const Registry r = {
        {"material",
         {
             {"c_d", NUM(material.c_D)},
             {"c_e", OPT(material.c_E, "auto")},
             {"e33", NUM(material.e33)},
             {"d33", NUM(material.d33)},
             {"s33", NUM(material.s33)},
             {"eps_s", NUM(material.eps_S)},
             {"rho", NUM(material.rho)},
         }},
        {"geometry",
         {
             {"length_m", NUM(geometry.L)},
             {"width_m", NUM(geometry.W)},
             {"thickness_m", NUM(geometry.L_T)},
         }},
        {"oscillator",
         {
             {"f_m_hz", NUM(oscillator.f_m_hz)},
             {"quality_factor", NUM(oscillator.quality_factor)},
             {"m_eff_kg", OPT(oscillator.m_eff_kg, "auto")},
         }},
        {"circuit",
         {
             {"f_lc_hz", NUM(circuit.f_lc_hz)},
             {"inductance_h", OPT(circuit.inductance_h, "auto")},
             {"damping_rad_s", OPT(circuit.damping_rad_s, "auto")},
         }},
        {"optics",
         {
             {"laser_power_w", NUM(optics.laser_power_w)},
             {"wavelength_m", NUM(optics.wavelength_m)},
             {"arm_north_m", NUM(optics.arm_north_m)},
             {"arm_east_m", NUM(optics.arm_east_m)},
             {"bs_transmissivity", NUM(optics.bs_transmissivity)},
             {"bs_loss", NUM(optics.bs_loss)},
             {"itmn_transmissivity", NUM(optics.itmn_transmissivity)},
             {"itmn_loss", NUM(optics.itmn_loss)},
             {"etmn_transmissivity", NUM(optics.etmn_transmissivity)},
             {"etmn_loss", NUM(optics.etmn_loss)},
             {"itme_transmissivity", NUM(optics.itme_transmissivity)},
             {"itme_loss", NUM(optics.itme_loss)},
             {"etme_transmissivity", NUM(optics.etme_transmissivity)},
             {"etme_loss", NUM(optics.etme_loss)},
             {"g_prm", NUM(optics.g_prm)},
             {"g_srm", NUM(optics.g_srm)},
             {"responsivity_a_per_w", OPT(optics.responsivity_a_per_w, "auto")},
             {"arm_tuning_rad", OPT(optics.arm_tuning_rad, "auto")},
             {"signal_resonance_hz", NUM(optics.signal_resonance_hz)},
             {"phase_t_rad", NUM(optics.phase_t_rad)},
             {"phase_r1_rad", NUM(optics.phase_r1_rad)},
             {"phase_r2_rad", NUM(optics.phase_r2_rad)},
         }},
        {"cavity",
         {
             {"detuning_rad_s", OPT(cavity.detuning, "auto")},
             {"kappa_rad_s", OPT(cavity.kappa, "auto")},
             {"vacuum_coupling_rad_s", OPT(cavity.vacuum_coupling, "auto")},
             {"n_cav", OPT(cavity.n_cav, "auto")},
             {"g_opt_rad_per_s_m", OPT(cavity.G_opt, "auto")},
         }},
        {"link",
         {
             {"carrier_hz", NUM(link.link.carrier_hz)},
             {"bandwidth_hz", NUM(link.link.bandwidth_hz)},
             {"bitrate_bps", NUM(link.link.bitrate_bps)},
             {"modulation",
              [](RunConfig& c, const Value& v) {
                  if (v.text != "ook") v.fail("unsupported modulation '" + v.text + "' (only ook)");
                  c.link.link.modulation = Modulation::ook;
              }},
             {"signal_power_dbm", NUM(link.link.signal_power_dbm)},
             {"channel_noise_dbm", OPT(link.link.channel_noise_dbm, "none")},
             {"lna", [](RunConfig& c, const Value& v) { c.link.link.with_lna = v.boolean(); }},
             {"internal_noise",
              [](RunConfig& c, const Value& v) { c.link.link.internal_noise = v.boolean(); }},
             {"lna_gain_db", NUM(link.lna_gain_db)},
             {"lna_noise_temperature_k", NUM(link.lna_noise_temperature_k)},
             {"temperature_k", NUM(link.temperature_k)},
             {"seed", [](RunConfig& c, const Value& v) { c.link.link.seed = v.unsigned_integer(); }},
             {"n_bits",
              [](RunConfig& c, const Value& v) { c.link.link.n_bits = v.unsigned_integer(); }},
             {"samples_per_symbol",
              [](RunConfig& c, const Value& v) {
                  c.link.link.samples_per_symbol = v.unsigned_integer();
              }},
             {"threads",
              [](RunConfig& c, const Value& v) {
                  c.link.link.threads = static_cast<unsigned>(v.unsigned_integer());
              }},
         }},
        {"calibration",
         {
             {"coupling_g", OPT(calibration.coupling_g, "auto")},
             {"alpha_ex_mode",
              [](RunConfig& c, const Value& v) {
                  if (v.text == "fdt")
                      c.calibration.alpha_ex_mode = AlphaMode::fdt;
                  else if (v.text == "table_iii")
                      c.calibration.alpha_ex_mode = AlphaMode::table_iii;
                  else
                      v.fail("alpha_ex_mode must be fdt or table_iii, got '" + v.text + "'");
              }},
             {"film_noise_peak_m2_per_hz", NUM(calibration.film_noise_peak_m2_per_hz)},
             {"r_l_ohm", NUM(calibration.r_l_ohm)},
             {"r_i_ohm", NUM(calibration.r_i_ohm)},
             {"anchor_bandwidth_hz", NUM(calibration.anchor.bandwidth_hz)},
             {"anchor_loss", NUM(calibration.anchor.loss)},
             {"anchor_dbm", NUM(calibration.anchor.target_dbm)},
             {"anchor_lna",
              [](RunConfig& c, const Value& v) { c.calibration.anchor.with_lna = v.boolean(); }},
         }},
    };
    return r;
}

#undef NUM
#undef OPT

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips a trailing comment; returns the content part.
std::string strip_comment(const std::string& line) {
    const auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::string section;
    std::set<std::string> seen;
    const Registry& reg = registry();

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string content = strip_comment(raw);
        const std::string line = trim(content);
        if (line.empty()) continue;
        const std::size_t indent = content.find_first_not_of(" \t") + 1;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no, indent);
            section = trim(line.substr(1, line.size() - 2));
            if (!reg.count(section))
                throw ParseError("unknown section [" + section + "] in " + origin, line_no, indent + 1);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, indent);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ParseError("key '" + key + "' appears before any [section]", line_no, indent);
        const auto& keys = reg.at(section);
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ParseError("unknown key '" + key + "' in section [" + section + "]", line_no, indent);
        if (!seen.insert(section + "." + key).second)
            throw ParseError("duplicate key '" + section + "." + key + "'", line_no, indent);
        if (value.empty())
            throw ParseError("missing value for key '" + key + "'", line_no, indent + eq + 1);
        const std::size_t value_col = content.find(value, content.find('=')) + 1;
        it->second(cfg, Value{value, line_no, value_col});
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

std::optional<std::string> resolve_config_path(const std::optional<std::string>& cli_path) {
    if (cli_path) return cli_path;
    if (const char* env = std::getenv("POEMS_CONFIG"); env && *env) return std::string(env);
    return std::nullopt;
}

void RunConfig::validate() const {
    material.validate();
    geometry.validate();
    coupling_kt2(material);

    require(oscillator.f_m_hz > 0.0, "oscillator.f_m_hz must be positive");
    require(oscillator.quality_factor > 0.0, "oscillator.quality_factor must be positive");
    require(!oscillator.m_eff_kg || *oscillator.m_eff_kg > 0.0, "oscillator.m_eff_kg must be positive");
    require(circuit.f_lc_hz > 0.0, "circuit.f_lc_hz must be positive");
    require(!circuit.inductance_h || *circuit.inductance_h > 0.0, "circuit.inductance_h must be positive");
    require(!circuit.damping_rad_s || *circuit.damping_rad_s > 0.0,
            "circuit.damping_rad_s must be positive");

    for (auto [t, l, name] :
         {std::tuple{optics.bs_transmissivity, optics.bs_loss, "bs"},
          std::tuple{optics.itmn_transmissivity, optics.itmn_loss, "itmn"},
          std::tuple{optics.etmn_transmissivity, optics.etmn_loss, "etmn"},
          std::tuple{optics.itme_transmissivity, optics.itme_loss, "itme"},
          std::tuple{optics.etme_transmissivity, optics.etme_loss, "etme"}}) {
        require(t >= 0.0 && l >= 0.0 && t + l <= 1.0,
                std::string("optics.") + name + "_transmissivity + " + name +
                    "_loss must lie in [0, 1] with both nonnegative");
    }
    optical_layout().validate();

    const CavityOverrides& o = cavity;
    require(!o.kappa || *o.kappa > 0.0, "cavity.kappa_rad_s must be positive");
    require(!o.n_cav || *o.n_cav >= 0.0, "cavity.n_cav must be nonnegative");
    require(!o.G_opt || *o.G_opt > 0.0, "cavity.g_opt_rad_per_s_m must be positive");
    require(!o.vacuum_coupling || *o.vacuum_coupling >= 0.0,
            "cavity.vacuum_coupling_rad_s must be nonnegative");

    link.link.validate();
    require(link.lna_gain_db >= 0.0, "link.lna_gain_db must be >= 0 (LNA gain >= 1)");
    require(link.lna_noise_temperature_k >= 0.0, "link.lna_noise_temperature_k must be >= 0");
    require(link.temperature_k >= 0.0, "link.temperature_k must be >= 0");

    require(calibration.r_l_ohm > 0.0, "calibration.r_l_ohm must be positive");
    require(calibration.r_i_ohm > 0.0, "calibration.r_i_ohm must be positive");
    require(calibration.film_noise_peak_m2_per_hz >= 0.0,
            "calibration.film_noise_peak_m2_per_hz must be >= 0");
    require(!calibration.coupling_g || *calibration.coupling_g >= 0.0,
            "calibration.coupling_g must be nonnegative");
    require(calibration.anchor.bandwidth_hz > 0.0, "calibration.anchor_bandwidth_hz must be positive");
    require(calibration.anchor.loss >= 0.0, "calibration.anchor_loss must be >= 0");
}

FilmOscillator RunConfig::film_oscillator() const {
    const double m = oscillator.m_eff_kg.value_or(film_mass(material, geometry) / 2.0);
    return FilmOscillator::from_quality(m, 2.0 * pi * oscillator.f_m_hz, oscillator.quality_factor);
}

OpticalLayout RunConfig::optical_layout() const {
    const OpticsSettings& s = optics;
    OpticalLayout o;
    o.P0 = s.laser_power_w;
    o.lambda0 = s.wavelength_m;
    o.L_N = s.arm_north_m;
    o.L_E = s.arm_east_m;
    o.bs = MirrorSpec::from_power(s.bs_transmissivity, s.bs_loss);
    o.itmn = MirrorSpec::from_power(s.itmn_transmissivity, s.itmn_loss);
    o.etmn = MirrorSpec::from_power(s.etmn_transmissivity, s.etmn_loss);
    o.itme = MirrorSpec::from_power(s.itme_transmissivity, s.itme_loss);
    o.etme = MirrorSpec::from_power(s.etme_transmissivity, s.etme_loss);
    o.g_prm = s.g_prm;
    o.g_srm = s.g_srm;
    o.responsivity = s.responsivity_a_per_w.value_or(watts_to_ampere(s.wavelength_m));
    o.arm_tuning_rad = s.arm_tuning_rad;
    o.signal_resonance_hz = s.signal_resonance_hz;
    o.phase_t_rad = s.phase_t_rad;
    o.phase_r1_rad = s.phase_r1_rad;
    o.phase_r2_rad = s.phase_r2_rad;
    return o;
}

LnaParams RunConfig::lna() const {
    return LnaParams::from_temperature(link.lna_gain_db, link.lna_noise_temperature_k,
                                       calibration.r_l_ohm);
}

ReceiverModel RunConfig::receiver_model() const {
    ReceiverModel m;
    m.material = material;
    m.geometry = geometry;
    m.oscillator = film_oscillator();
    const double C0 = static_capacitance(material, geometry);
    m.circuit = CircuitParams::resonant_with(C0, 2.0 * pi * circuit.f_lc_hz, calibration.r_l_ohm,
                                             calibration.r_i_ohm, calibration.coupling_g.value_or(0.0));
    if (circuit.inductance_h) {
        m.circuit.L0 = *circuit.inductance_h;
        m.circuit.Gamma_LC = calibration.r_l_ohm / m.circuit.L0;
    }
    if (circuit.damping_rad_s) m.circuit.Gamma_LC = *circuit.damping_rad_s;
    m.optics = optical_layout();
    m.cavity_overrides = cavity;
    m.film_strength = calibration.alpha_ex_mode == AlphaMode::fdt
                          ? fdt_noise_strength(m.oscillator, link.temperature_k)
                          : noise_strength_for_peak(m.oscillator, calibration.film_noise_peak_m2_per_hz);
    m.temperature_k = link.temperature_k;
    m.channel_noise_psd = 0.0;
    m.lna = lna();
    m.center_hz = link.link.carrier_hz;
    return m;
}

ReceiverModel calibrated_model(const RunConfig& cfg, std::optional<CalibrationResult>* info) {
    ReceiverModel m = cfg.receiver_model();
    if (cfg.calibration.coupling_g) return m;
    const CalibrationResult r = calibrate_coupling(m, cfg.calibration.anchor);
    if (info) *info = r;
    return m.with_coupling(r.coupling_g);
}

void write_coupling_g(const std::string& path, double coupling_g) {
    std::vector<std::string> lines;
    {
        std::ifstream f(path, std::ios::binary);
        std::string l;
        while (f && std::getline(f, l)) lines.push_back(l);
    }
    const std::string entry = "coupling_g = " + format_double(coupling_g);
    std::optional<std::size_t> header;
    bool done = false;
    std::string section;
    for (std::size_t i = 0; i < lines.size() && !done; ++i) {
        const std::string t = trim(strip_comment(lines[i]));
        if (t.size() > 1 && t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            if (section == "calibration") header = i;
            continue;
        }
        const auto eq = t.find('=');
        if (section == "calibration" && eq != std::string::npos && trim(t.substr(0, eq)) == "coupling_g") {
            lines[i] = entry;
            done = true;
        }
    }
    if (!done) {
        if (header) {
            lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(*header) + 1, entry);
        } else {
            if (!lines.empty() && !trim(lines.back()).empty()) lines.emplace_back();
            lines.emplace_back("[calibration]");
            lines.push_back(entry);
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write config file '" + path + "'");
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw IoError("failed writing config file '" + path + "'");
}

}  // namespace poems
