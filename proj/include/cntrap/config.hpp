#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cntrap/material.hpp"
#include "cntrap/trap.hpp"

// Run configuration: a sectioned key = value file with units in the key
// names. Values are stored in the units of their keys so that the echoed
// configuration re-parses bit for bit.
namespace cntrap::config {

enum class Scale { linear, log };

struct NanotubeSection {
    int a = 9;
    int b = 0;
    double radius_nm = 0.352;
    double ell_nm = 0.213;
    double t0_J = 4.32e-19;
    double hbar_over_tau_J = 4.8e-21;
    double mu_J = 0.0;
    double sheet_length_m = 1.0;
    material::ConductivityMode mode = material::ConductivityMode::calibrated;
    double calibration_sigma_S_per_m = 1.19e9;
    double calibration_frequency_kHz = 70.0;
    bool operator==(const NanotubeSection&) const = default;
};

struct TrapSection {
    double current_uA = 20.0;
    std::optional<double> y0_nm;   // surface distance of the field zero
    std::optional<double> B_b_mT;
    std::optional<double> B_o_mT;
    std::optional<double> f0_kHz;
    bool operator==(const TrapSection&) const = default;
};

struct AtomSection {
    std::string species = "rb87";  // rb87 or custom
    double mass_u = 86.909180527;
    double g_F = 0.5;
    int m_F = 2;
    double g_S = 2.0;
    double d2_wavelength_nm = 780.0;
    double d2_dipole_ea0 = 4.227;
    double spin_x = 0.25;
    double spin_y = 0.25;
    bool operator==(const AtomSection&) const = default;
};

struct SweepSection {
    double y_min_nm = 1.0;
    double y_max_nm = 200.0;
    int y_points = 200;
    Scale y_scale = Scale::linear;
    double tunnel_min_nm = 90.0;
    double tunnel_max_nm = 200.0;
    int tunnel_points = 23;
    double omega_min_rad_s = 2.0 * 3.141592653589793 * 70e3;
    double omega_max_rad_s = 1e17;
    int omega_points = 61;
    std::vector<double> profile_y0_nm{100.0, 150.0, 200.0};
    bool operator==(const SweepSection&) const = default;
};

struct OutputSection {
    int digits = 10;  // significant digits in CSV values
    bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
    NanotubeSection nanotube;
    TrapSection trap;
    AtomSection atom;
    double temperature_K = 380.0;
    SweepSection sweep;
    OutputSection output;
    bool operator==(const RunConfig&) const = default;
};

// Defaults with the trap distance and offset field left unset.
RunConfig defaults();

// Throws ConfigError on unknown sections or keys, malformed values, or a
// violated either-or rule.
RunConfig parse(std::istream& in);
RunConfig parse_file(const std::string& path);
RunConfig parse_string(const std::string& text);

// Fills a config that gives neither y0 nor B_b (or neither B_o nor f0) with
// y0 = 150 nm and f0 = 70 kHz.
RunConfig with_trap_defaults(RunConfig c);

// Checks the either-or rules and physical ranges. Throws ConfigError.
void validate(const RunConfig& c);

// Parameters in SI with every derived quantity resolved.
struct Resolved {
    material::NanotubeSpec nanotube;
    trap::TrapConfig trap;
    trap::AtomSpec atom;
    double y0_surface_m = 0.0;
    double f0_Hz = 0.0;
    double temperature_K = 0.0;
};
Resolved resolve(const RunConfig& c);

// Config text that parse() maps back to c. Derived quantities follow as
// ';' comments.
std::string to_text(const RunConfig& c);
// Same text with every line prefixed by "# ", for CSV headers.
std::string echo(const RunConfig& c);
// Recovers a config from a CSV or report carrying an echo block.
RunConfig parse_echo(const std::string& text);

}  // namespace cntrap::config
