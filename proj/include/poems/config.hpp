#pragma once

#include <optional>
#include <string>

#include "poems/link_sim.hpp"
#include "poems/noise_budget.hpp"

namespace poems {

enum class AlphaMode { fdt, table_iii };

struct OscillatorSettings {
    double f_m_hz = 1e9;
    double quality_factor = 1000.0;
    std::optional<double> m_eff_kg;  // default: half the film mass
};

struct CircuitSettings {
    double f_lc_hz = 1e9;
    std::optional<double> inductance_h;   // default: resonates with the film capacitance
    std::optional<double> damping_rad_s;  // default: R_L / L0
};

struct OpticsSettings {
    double laser_power_w = 1.0;
    double wavelength_m = 1064e-9;
    double arm_north_m = 0.075;
    double arm_east_m = 0.075;
    double bs_transmissivity = 0.5;
    double bs_loss = 0.0;
    double itmn_transmissivity = 0.014;
    double itmn_loss = 1e-5;
    double etmn_transmissivity = 5e-6;
    double etmn_loss = 1e-5;
    double itme_transmissivity = 0.014;
    double itme_loss = 1e-5;
    double etme_transmissivity = 5e-6;
    double etme_loss = 1e-5;
    double g_prm = 1.0;
    double g_srm = 1.0;
    std::optional<double> responsivity_a_per_w;  // default: e lambda / (h c)
    std::optional<double> arm_tuning_rad;        // default: signal sideband resonant
    double signal_resonance_hz = 1e9;
    double phase_t_rad = 0.0;
    double phase_r1_rad = 0.0;
    double phase_r2_rad = 0.0;
};

struct LinkSettings {
    LinkConfig link;
    double lna_gain_db = 30.0;
    double lna_noise_temperature_k = 25.0;
    double temperature_k = 300.0;
};

struct CalibrationSettings {
    std::optional<double> coupling_g;
    AlphaMode alpha_ex_mode = AlphaMode::table_iii;
    double film_noise_peak_m2_per_hz = 3.4e-55;
    double r_l_ohm = 1.0;
    double r_i_ohm = 75.0;
    CalibrationTarget anchor;
};

struct RunConfig {
    MaterialParams material = MaterialParams::aln();
    FilmGeometry geometry = FilmGeometry::reference();
    OscillatorSettings oscillator;
    CircuitSettings circuit;
    OpticsSettings optics;
    CavityOverrides cavity;
    LinkSettings link;
    CalibrationSettings calibration;

    void validate() const;

    FilmOscillator film_oscillator() const;
    OpticalLayout optical_layout() const;
    LnaParams lna() const;
    // Receiver with the configured coupling (0 when not yet calibrated) and no channel noise.
    ReceiverModel receiver_model() const;
};

// Strict INI-style parser: `[section]` headers, `key = value` lines, `#`/`;` comments.
// Missing keys keep their defaults; unknown sections or keys are ParseErrors.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

// Path from --config, else the POEMS_CONFIG environment variable, else none.
std::optional<std::string> resolve_config_path(const std::optional<std::string>& cli_path);

// Rewrites (or inserts) calibration.coupling_g in the config file, keeping the rest intact.
void write_coupling_g(const std::string& path, double coupling_g);

// Model with coupling resolved: the configured value, or a fresh calibration
// against the configured anchor when coupling_g is absent.
ReceiverModel calibrated_model(const RunConfig& cfg, std::optional<CalibrationResult>* info = nullptr);

std::string format_double(double v);

}  // namespace poems
