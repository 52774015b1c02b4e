#include "cntrap/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"

namespace cntrap::config {

namespace C = constants;
namespace pt = boost::property_tree;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw ConfigError("'" + key + "': not a number: '" + s + "'");
    return v;
}

int to_int(const std::string& key, const std::string& s) {
    const double v = to_double(key, s);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "': not an integer: '" + s + "'");
    return int(v);
}

material::ConductivityMode to_mode(const std::string& s) {
    if (s == "calibrated") return material::ConductivityMode::calibrated;
    if (s == "tight-binding") return material::ConductivityMode::tight_binding;
    throw ConfigError("mode must be 'calibrated' or 'tight-binding', got '" + s + "'");
}

const char* mode_name(material::ConductivityMode m) {
    return m == material::ConductivityMode::calibrated ? "calibrated" : "tight-binding";
}

Scale to_scale(const std::string& s) {
    if (s == "linear") return Scale::linear;
    if (s == "log") return Scale::log;
    throw ConfigError("scale must be 'linear' or 'log', got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(","));
    std::vector<double> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(to_double(key, p));
    }
    if (out.empty()) throw ConfigError("'" + key + "': empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

// "section.key" -> setter. One table keeps parser and writer in step.
const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&t](const std::string& k, auto member) {
            t[k] = [k, member](RunConfig& c, const std::string& v) { member(c) = to_double(k, v); };
        };
        auto integer = [&t](const std::string& k, auto member) {
            t[k] = [k, member](RunConfig& c, const std::string& v) { member(c) = to_int(k, v); };
        };
        auto opt = [&t](const std::string& k, auto member) {
            t[k] = [k, member](RunConfig& c, const std::string& v) { member(c) = to_double(k, v); };
        };
        integer("nanotube.a", [](RunConfig& c) -> int& { return c.nanotube.a; });
        integer("nanotube.b", [](RunConfig& c) -> int& { return c.nanotube.b; });
        num("nanotube.radius_nm", [](RunConfig& c) -> double& { return c.nanotube.radius_nm; });
        num("nanotube.ell_nm", [](RunConfig& c) -> double& { return c.nanotube.ell_nm; });
        num("nanotube.t0_J", [](RunConfig& c) -> double& { return c.nanotube.t0_J; });
        num("nanotube.hbar_over_tau_J", [](RunConfig& c) -> double& { return c.nanotube.hbar_over_tau_J; });
        num("nanotube.mu_J", [](RunConfig& c) -> double& { return c.nanotube.mu_J; });
        num("nanotube.sheet_length_m", [](RunConfig& c) -> double& { return c.nanotube.sheet_length_m; });
        t["nanotube.mode"] = [](RunConfig& c, const std::string& v) { c.nanotube.mode = to_mode(v); };
        num("nanotube.calibration_sigma_S_per_m",
            [](RunConfig& c) -> double& { return c.nanotube.calibration_sigma_S_per_m; });
        num("nanotube.calibration_frequency_kHz",
            [](RunConfig& c) -> double& { return c.nanotube.calibration_frequency_kHz; });

        num("trap.current_uA", [](RunConfig& c) -> double& { return c.trap.current_uA; });
        opt("trap.y0_nm", [](RunConfig& c) -> std::optional<double>& { return c.trap.y0_nm; });
        opt("trap.B_b_mT", [](RunConfig& c) -> std::optional<double>& { return c.trap.B_b_mT; });
        opt("trap.B_o_mT", [](RunConfig& c) -> std::optional<double>& { return c.trap.B_o_mT; });
        opt("trap.f0_kHz", [](RunConfig& c) -> std::optional<double>& { return c.trap.f0_kHz; });

        t["atom.species"] = [](RunConfig& c, const std::string& v) {
            if (v != "rb87" && v != "custom") throw ConfigError("species must be 'rb87' or 'custom'");
            c.atom.species = v;
        };
        num("atom.mass_u", [](RunConfig& c) -> double& { return c.atom.mass_u; });
        num("atom.g_F", [](RunConfig& c) -> double& { return c.atom.g_F; });
        integer("atom.m_F", [](RunConfig& c) -> int& { return c.atom.m_F; });
        num("atom.g_S", [](RunConfig& c) -> double& { return c.atom.g_S; });
        num("atom.d2_wavelength_nm", [](RunConfig& c) -> double& { return c.atom.d2_wavelength_nm; });
        num("atom.d2_dipole_ea0", [](RunConfig& c) -> double& { return c.atom.d2_dipole_ea0; });
        num("atom.spin_x", [](RunConfig& c) -> double& { return c.atom.spin_x; });
        num("atom.spin_y", [](RunConfig& c) -> double& { return c.atom.spin_y; });

        num("environment.temperature_K", [](RunConfig& c) -> double& { return c.temperature_K; });

        num("sweep.y_min_nm", [](RunConfig& c) -> double& { return c.sweep.y_min_nm; });
        num("sweep.y_max_nm", [](RunConfig& c) -> double& { return c.sweep.y_max_nm; });
        integer("sweep.y_points", [](RunConfig& c) -> int& { return c.sweep.y_points; });
        t["sweep.y_scale"] = [](RunConfig& c, const std::string& v) { c.sweep.y_scale = to_scale(v); };
        num("sweep.tunnel_min_nm", [](RunConfig& c) -> double& { return c.sweep.tunnel_min_nm; });
        num("sweep.tunnel_max_nm", [](RunConfig& c) -> double& { return c.sweep.tunnel_max_nm; });
        integer("sweep.tunnel_points", [](RunConfig& c) -> int& { return c.sweep.tunnel_points; });
        num("sweep.omega_min_rad_s", [](RunConfig& c) -> double& { return c.sweep.omega_min_rad_s; });
        num("sweep.omega_max_rad_s", [](RunConfig& c) -> double& { return c.sweep.omega_max_rad_s; });
        integer("sweep.omega_points", [](RunConfig& c) -> int& { return c.sweep.omega_points; });
        t["sweep.profile_y0_nm"] = [](RunConfig& c, const std::string& v) {
            c.sweep.profile_y0_nm = to_list("sweep.profile_y0_nm", v);
        };

        integer("output.digits", [](RunConfig& c) -> int& { return c.output.digits; });
        return t;
    }();
    return table;
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

}  // namespace

RunConfig defaults() { return RunConfig{}; }

RunConfig with_trap_defaults(RunConfig c) {
    if (!c.trap.y0_nm && !c.trap.B_b_mT) c.trap.y0_nm = 150.0;
    if (!c.trap.B_o_mT && !c.trap.f0_kHz) c.trap.f0_kHz = 70.0;
    return c;
}

RunConfig parse(std::istream& in) {
    // The INI reader only knows full-line comments; drop trailing ones here.
    std::ostringstream cleaned;
    for (std::string line; std::getline(in, line);) {
        for (std::size_t i = 1; i < line.size(); ++i)
            if ((line[i] == ';' || line[i] == '#') && std::isspace(static_cast<unsigned char>(line[i - 1]))) {
                line.erase(i);
                break;
            }
        cleaned << line << '\n';
    }
    std::istringstream body(cleaned.str());
    pt::ptree tree;
    try {
        pt::read_ini(body, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    RunConfig c;
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) throw ConfigError("unknown key '" + full + "'");
            it->second(c, boost::trim_copy(value.data()));
        }
    }
    return c;
}

RunConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse(in);
}

void validate(const RunConfig& c) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0)) throw ConfigError(std::string(what) + " must be positive");
    };
    const auto& t = c.trap;
    if (t.y0_nm.has_value() == t.B_b_mT.has_value())
        throw ConfigError("give exactly one of trap.y0_nm and trap.B_b_mT");
    if (t.B_o_mT.has_value() == t.f0_kHz.has_value())
        throw ConfigError("give exactly one of trap.B_o_mT and trap.f0_kHz");
    positive(t.current_uA, "trap.current_uA");
    if (t.y0_nm) positive(*t.y0_nm, "trap.y0_nm");
    if (t.B_b_mT) positive(*t.B_b_mT, "trap.B_b_mT");
    if (t.B_o_mT) positive(*t.B_o_mT, "trap.B_o_mT");
    if (t.f0_kHz) positive(*t.f0_kHz, "trap.f0_kHz");

    const auto& n = c.nanotube;
    if (n.a <= 0 || n.b < 0 || n.b > n.a) throw ConfigError("nanotube indices need a > 0 and 0 <= b <= a");
    positive(n.radius_nm, "nanotube.radius_nm");
    positive(n.ell_nm, "nanotube.ell_nm");
    positive(n.t0_J, "nanotube.t0_J");
    positive(n.hbar_over_tau_J, "nanotube.hbar_over_tau_J");
    positive(n.sheet_length_m, "nanotube.sheet_length_m");
    positive(n.calibration_sigma_S_per_m, "nanotube.calibration_sigma_S_per_m");
    positive(n.calibration_frequency_kHz, "nanotube.calibration_frequency_kHz");

    const auto& a = c.atom;
    positive(a.mass_u, "atom.mass_u");
    positive(a.d2_wavelength_nm, "atom.d2_wavelength_nm");
    positive(a.d2_dipole_ea0, "atom.d2_dipole_ea0");
    if (!(a.g_F * a.m_F > 0)) throw ConfigError("atom state must be low-field seeking (g_F m_F > 0)");
    positive(c.temperature_K, "environment.temperature_K");

    const auto& s = c.sweep;
    if (!(s.y_min_nm > 0) || !(s.y_max_nm >= s.y_min_nm) || s.y_points < 1)
        throw ConfigError("empty or invalid trap-distance sweep range");
    if (s.y_points == 1 && s.y_max_nm != s.y_min_nm)
        throw ConfigError("a one-point sweep needs y_min_nm == y_max_nm");
    if (!(s.tunnel_min_nm > 0) || !(s.tunnel_max_nm >= s.tunnel_min_nm) || s.tunnel_points < 1)
        throw ConfigError("empty or invalid tunneling sweep range");
    if (!(s.omega_min_rad_s > 0) || !(s.omega_max_rad_s >= s.omega_min_rad_s) || s.omega_points < 1)
        throw ConfigError("empty or invalid frequency range");
    if (s.omega_points == 1 && s.omega_max_rad_s != s.omega_min_rad_s)
        throw ConfigError("a one-point frequency sweep needs omega_min == omega_max");
    for (double y : s.profile_y0_nm) positive(y, "sweep.profile_y0_nm entries");
    if (c.output.digits < 9 || c.output.digits > 17) throw ConfigError("output.digits must lie in [9, 17]");
}

Resolved resolve(const RunConfig& c) {
    validate(c);
    Resolved r;
    const auto& n = c.nanotube;
    r.nanotube.a = n.a;
    r.nanotube.b = n.b;
    r.nanotube.radius_m = n.radius_nm * 1e-9;
    r.nanotube.ell_m = n.ell_nm * 1e-9;
    r.nanotube.t0_J = n.t0_J;
    r.nanotube.hbar_over_tau_J = n.hbar_over_tau_J;
    r.nanotube.temperature_K = c.temperature_K;
    r.nanotube.mu_chem_J = n.mu_J;
    r.nanotube.sheet_length_m = n.sheet_length_m;
    r.nanotube.mode = n.mode;
    r.nanotube.calibration_sigma_S_per_m = n.calibration_sigma_S_per_m;
    r.nanotube.calibration_omega_rad_s = 2.0 * C::pi * n.calibration_frequency_kHz * 1e3;
    try {
        r.nanotube.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (c.atom.species == "rb87") {
        r.atom = trap::AtomSpec::rb87();
    } else {
        const auto& a = c.atom;
        r.atom.mass_kg = a.mass_u * C::amu;
        r.atom.g_F = a.g_F;
        r.atom.m_F = a.m_F;
        r.atom.g_S = a.g_S;
        r.atom.d2_wavelength_m = a.d2_wavelength_nm * 1e-9;
        r.atom.d2_dipole_Cm = a.d2_dipole_ea0 * C::e * C::a0;
        r.atom.spin_x = a.spin_x;
        r.atom.spin_y = a.spin_y;
    }

    const double I = c.trap.current_uA * 1e-6;
    const double R = r.nanotube.radius_m;
    r.trap.current_A = I;
    if (c.trap.y0_nm) {
        r.y0_surface_m = *c.trap.y0_nm * 1e-9;
        r.trap.bias_T = C::mu0 * I / (2.0 * C::pi * (r.y0_surface_m + R));
    } else {
        r.trap.bias_T = *c.trap.B_b_mT * 1e-3;
        r.y0_surface_m = r.trap.y0_m() - R;
        if (!(r.y0_surface_m > 0)) throw ConfigError("bias field places the trap inside the nanotube");
    }
    if (c.trap.B_o_mT) {
        r.trap.offset_T = *c.trap.B_o_mT * 1e-3;
        r.f0_Hz = trap::spin_flip_frequency_Hz(r.trap, r.atom);
    } else {
        r.f0_Hz = *c.trap.f0_kHz * 1e3;
        r.trap.offset_T = trap::offset_for_frequency(r.f0_Hz, r.atom);
    }
    r.temperature_K = c.temperature_K;
    return r;
}

std::string to_text(const RunConfig& c) {
    std::ostringstream o;
    const auto& n = c.nanotube;
    o << "[nanotube]\n"
      << "a = " << n.a << "\n"
      << "b = " << n.b << "\n"
      << "radius_nm = " << fmt(n.radius_nm) << "\n"
      << "ell_nm = " << fmt(n.ell_nm) << "\n"
      << "t0_J = " << fmt(n.t0_J) << "\n"
      << "hbar_over_tau_J = " << fmt(n.hbar_over_tau_J) << "\n"
      << "mu_J = " << fmt(n.mu_J) << "\n"
      << "sheet_length_m = " << fmt(n.sheet_length_m) << "\n"
      << "mode = " << mode_name(n.mode) << "\n"
      << "calibration_sigma_S_per_m = " << fmt(n.calibration_sigma_S_per_m) << "\n"
      << "calibration_frequency_kHz = " << fmt(n.calibration_frequency_kHz) << "\n";
    o << "[trap]\n"
      << "current_uA = " << fmt(c.trap.current_uA) << "\n";
    if (c.trap.y0_nm) o << "y0_nm = " << fmt(*c.trap.y0_nm) << "\n";
    if (c.trap.B_b_mT) o << "B_b_mT = " << fmt(*c.trap.B_b_mT) << "\n";
    if (c.trap.B_o_mT) o << "B_o_mT = " << fmt(*c.trap.B_o_mT) << "\n";
    if (c.trap.f0_kHz) o << "f0_kHz = " << fmt(*c.trap.f0_kHz) << "\n";
    try {
        const auto r = resolve(c);
        o << "; derived y0_nm = " << fmt(r.y0_surface_m * 1e9) << "\n"
          << "; derived B_b_mT = " << fmt(r.trap.bias_T * 1e3) << "\n"
          << "; derived B_o_mT = " << fmt(r.trap.offset_T * 1e3) << "\n"
          << "; derived f0_kHz = " << fmt(r.f0_Hz * 1e-3) << "\n";
    } catch (const ConfigError&) {
        o << "; unresolved\n";
    }
    const auto& a = c.atom;
    o << "[atom]\n"
      << "species = " << a.species << "\n"
      << "mass_u = " << fmt(a.mass_u) << "\n"
      << "g_F = " << fmt(a.g_F) << "\n"
      << "m_F = " << a.m_F << "\n"
      << "g_S = " << fmt(a.g_S) << "\n"
      << "d2_wavelength_nm = " << fmt(a.d2_wavelength_nm) << "\n"
      << "d2_dipole_ea0 = " << fmt(a.d2_dipole_ea0) << "\n"
      << "spin_x = " << fmt(a.spin_x) << "\n"
      << "spin_y = " << fmt(a.spin_y) << "\n";
    o << "[environment]\n"
      << "temperature_K = " << fmt(c.temperature_K) << "\n";
    const auto& s = c.sweep;
    o << "[sweep]\n"
      << "y_min_nm = " << fmt(s.y_min_nm) << "\n"
      << "y_max_nm = " << fmt(s.y_max_nm) << "\n"
      << "y_points = " << s.y_points << "\n"
      << "y_scale = " << (s.y_scale == Scale::log ? "log" : "linear") << "\n"
      << "tunnel_min_nm = " << fmt(s.tunnel_min_nm) << "\n"
      << "tunnel_max_nm = " << fmt(s.tunnel_max_nm) << "\n"
      << "tunnel_points = " << s.tunnel_points << "\n"
      << "omega_min_rad_s = " << fmt(s.omega_min_rad_s) << "\n"
      << "omega_max_rad_s = " << fmt(s.omega_max_rad_s) << "\n"
      << "omega_points = " << s.omega_points << "\n"
      << "profile_y0_nm = " << list_text(s.profile_y0_nm) << "\n";
    o << "[output]\n"
      << "digits = " << c.output.digits << "\n";
    return o.str();
}

std::string echo(const RunConfig& c) {
    std::istringstream in(to_text(c));
    std::ostringstream o;
    o << "# config-begin\n";
    for (std::string line; std::getline(in, line);) o << "# " << line << "\n";
    o << "# config-end\n";
    return o.str();
}

RunConfig parse_echo(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream body;
    bool inside = false, seen = false;
    for (std::string line; std::getline(in, line);) {
        if (line == "# config-begin") {
            inside = seen = true;
            continue;
        }
        if (line == "# config-end") break;
        if (inside) {
            if (line.rfind("# ", 0) != 0) throw ConfigError("malformed config echo");
            body << line.substr(2) << "\n";
        }
    }
    if (!seen) throw ConfigError("no config echo found");
    return parse_string(body.str());
}

}  // namespace cntrap::config
