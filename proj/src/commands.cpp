#include "cntrap/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"
#include "cntrap/material.hpp"
#include "cntrap/spinflip.hpp"
#include "cntrap/tunneling.hpp"
#include "cntrap/version.hpp"

namespace cntrap::commands {

namespace C = constants;
namespace fs = std::filesystem;

namespace {

struct Num {
    int digits;
    std::string operator()(double v) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
        return buf;
    }
};

std::string header(const config::RunConfig& c, const std::string& command) {
    return "# cntrap " + std::string(version) + "\n# command: " + command + "\n" + config::echo(c);
}

struct Setup {
    config::Resolved r;
    std::shared_ptr<const material::Conductivity> cond;
    green::Shell shell;
};

Setup setup(const config::RunConfig& c) {
    Setup s{config::resolve(c), nullptr, {}};
    s.cond = std::make_shared<material::Conductivity>(s.r.nanotube);
    s.shell = green::Shell::from_conductivity(s.cond);
    return s;
}

std::vector<double> nm_to_m(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(x * 1e-9);
    return out;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << text;
}

void prepare(const RunOptions& o) {
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + o.out_dir + "'");
}

std::string gnuplot(const std::string& csv, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::string& using_cols, bool logx, bool logy) {
    std::ostringstream g;
    g << "set datafile separator ','\n"
      << "set datafile commentschars '#'\n"
      << "set key autotitle columnhead\n"
      << "set title '" << title << "'\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set ylabel '" << ylabel << "'\n"
      << (logx ? "set logscale x\n" : "") << (logy ? "set logscale y\n" : "")
      << "plot '" << csv << "' using " << using_cols << " with lines\n";
    return g.str();
}

}  // namespace

std::vector<double> grid(double lo, double hi, int n, config::Scale scale) {
    if (n < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : double(i) / (n - 1);
        g[i] = scale == config::Scale::log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    g.back() = n == 1 ? lo : hi;
    return g;
}

std::string conductivity_csv(const config::RunConfig& c) {
    const auto s = setup(c);
    const Num f{c.output.digits};
    std::ostringstream o;
    o << header(c, "conductivity");
    o << "# plasma_frequency_rad_s = " << f(s.cond->plasma_frequency()) << "\n";
    o << "omega_rad_s,sigma_bulk_re,sigma_bulk_im,sigma_sheet_re,sigma_sheet_im,eps_re,eps_im\n";
    const auto& sw = c.sweep;
    for (double w : grid(sw.omega_min_rad_s, sw.omega_max_rad_s, sw.omega_points, config::Scale::log)) {
        const auto r = s.cond->sigma_axial(w);
        o << f(w) << ',' << f(r.sigma_bulk_equiv.real()) << ',' << f(r.sigma_bulk_equiv.imag()) << ','
          << f(r.sigma_sheet.real()) << ',' << f(r.sigma_sheet.imag()) << ',' << f(r.eps_r.real()) << ','
          << f(r.eps_r.imag()) << "\n";
    }
    return o.str();
}

std::string spinflip_csv(const config::RunConfig& c, int jobs, bool* all_failed) {
    const auto s = setup(c);
    const Num f{c.output.digits};
    const auto& sw = c.sweep;
    const auto ys = grid(sw.y_min_nm, sw.y_max_nm, sw.y_points, sw.y_scale);
    const auto res =
        spinflip::lifetime_sweep(s.shell, s.r.trap, s.r.atom, nm_to_m(ys), s.r.temperature_K, jobs);
    std::ostringstream o;
    o << header(c, "spinflip-sweep");
    o << "y0_nm,gamma0_hz,n_th,gamma_tot_hz,tau_sf_s,error\n";
    bool any_ok = false;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        o << f(ys[i]) << ',';
        if (r.ok) {
            any_ok = true;
            o << f(r.gamma0) << ',' << f(r.n_th) << ',' << f(r.gamma_tot) << ',' << f(r.tau_sf) << ",\n";
        } else {
            std::string msg = r.error;
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            o << "nan,nan,nan,nan," << msg << "\n";
        }
    }
    if (all_failed) *all_failed = !any_ok;
    return o.str();
}

std::vector<std::string> profile_csvs(const config::RunConfig& c, int jobs) {
    const auto s = setup(c);
    const Num f{c.output.digits};
    const auto y0s = nm_to_m(c.sweep.profile_y0_nm);
    const auto table = tunneling::cp_table_for(s.shell, s.r.atom, y0s, jobs);
    tunneling::SurfacePotential cp = [&table](double y) { return table(y); };
    const double R = s.r.nanotube.radius_m;
    std::vector<std::string> out;
    for (double y0 : y0s) {
        const auto cfg = trap::TrapConfig::from_axis_distance(s.r.trap.current_A, y0 + R, s.r.trap.offset_T);
        const auto p = tunneling::build_profile(cfg, s.r.atom, R, cp, y0);
        const auto w = tunneling::wkb_lifetime(p, s.r.atom);
        std::ostringstream o;
        o << header(c, "potential-profile");
        o << "# profile_y0_nm = " << f(y0 * 1e9) << "\n";
        o << "y_nm,v_mag_J,u_cp_J,v_tot_J\n";
        for (std::size_t i = 0; i < p.y.size(); ++i)
            o << f(p.y[i] * 1e9) << ',' << f(p.v_mag[i]) << ',' << f(p.u_cp[i]) << ',' << f(p.v_tot[i]) << "\n";
        o << "# status = " << tunneling::to_string(p.status) << "\n";
        o << "# barrier: " << (p.status == tunneling::ProfileStatus::barrier ? "present" : "absent") << "\n";
        if (p.status != tunneling::ProfileStatus::trap_destroyed) {
            o << "# minimum_nm = " << f(p.y_min * 1e9) << "\n"
              << "# v_min_J = " << f(p.v_min) << "\n"
              << "# omega_r_rad_s = " << f(p.omega_r) << "\n"
              << "# omega_r_over_2pi_Hz = " << f(p.omega_r / (2 * C::pi)) << "\n";
        }
        o << "# omega_r_magnetic_rad_s = " << f(p.omega_r_magnetic) << "\n";
        if (p.status == tunneling::ProfileStatus::barrier) {
            o << "# barrier_top_nm = " << f(p.y_max * 1e9) << "\n"
              << "# barrier_height_J = " << f(p.height) << "\n"
              << "# barrier_width_nm = " << f(p.width * 1e9) << "\n"
              << "# turning_points_nm = " << f(p.y1 * 1e9) << ", " << f(p.y2 * 1e9) << "\n"
              << "# ln_T = " << f(w.ln_T) << "\n"
              << "# ln_T_at_vmin = " << f(w.ln_T_vmin) << "\n"
              << "# tau_cp_s = " << f(w.tau_cp) << "\n";
        }
        out.push_back(o.str());
    }
    return out;
}

std::string tunneling_csv(const config::RunConfig& c, int jobs) {
    const auto s = setup(c);
    const Num f{c.output.digits};
    const auto& sw = c.sweep;
    const auto ys = grid(sw.tunnel_min_nm, sw.tunnel_max_nm, sw.tunnel_points, config::Scale::linear);
    const auto res = tunneling::tunneling_sweep(s.shell, s.r.trap.current_A, s.r.trap.offset_T, s.r.atom,
                                                nm_to_m(ys), jobs);
    std::ostringstream o;
    o << header(c, "tunneling-sweep");
    o << "y0_nm,barrier_present,T,omega_r_rad_s,tau_cp_s,status,ln_T,ln_T_at_vmin,omega_r_magnetic_rad_s,"
         "barrier_height_J,barrier_width_nm,error\n";
    for (std::size_t i = 0; i < res.size(); ++i) {
        const auto& r = res[i];
        o << f(ys[i]) << ',' << (r.status == tunneling::ProfileStatus::barrier ? "true" : "false") << ','
          << f(r.transmission) << ',' << f(r.omega_r) << ',' << f(r.tau_cp) << ','
          << (r.ok ? tunneling::to_string(r.status) : "error") << ',' << f(r.ln_T) << ','
          << f(r.ln_T_vmin) << ',' << f(r.omega_r_magnetic) << ',' << f(r.height) << ','
          << f(r.width * 1e9) << ',';
        std::string msg = r.error;
        for (auto& ch : msg)
            if (ch == ',' || ch == '\n') ch = ';';
        o << msg << "\n";
    }
    return o.str();
}

std::string summary_text(const config::RunConfig& c, int jobs) {
    const auto s = setup(c);
    const Num f{c.output.digits};
    const double w0 = 2.0 * C::pi * s.r.f0_Hz;
    const auto sig = s.cond->sigma_axial(w0);
    const double y0 = s.r.y0_surface_m;
    const auto sf = spinflip::spin_flip_rate(s.shell, s.r.trap, s.r.atom, y0, s.r.temperature_K);
    const auto tr = tunneling::tunneling_sweep(s.shell, s.r.trap.current_A, s.r.trap.offset_T, s.r.atom,
                                               {y0}, jobs)
                        .front();
    std::ostringstream o;
    o << header(c, "summary");
    o << "conductivity mode          " << (c.nanotube.mode == material::ConductivityMode::calibrated
                                               ? "calibrated"
                                               : "tight-binding")
      << "\n"
      << "plasma frequency [rad/s]   " << f(s.cond->plasma_frequency()) << "\n"
      << "spin-flip frequency [Hz]   " << f(s.r.f0_Hz) << "\n"
      << "sigma_bulk(omega0) [S/m]   " << f(sig.sigma_bulk_equiv.real()) << " + "
      << f(sig.sigma_bulk_equiv.imag()) << "i\n"
      << "eps_r(omega0)              " << f(sig.eps_r.real()) << " + " << f(sig.eps_r.imag()) << "i\n"
      << "trap distance y0 [nm]      " << f(y0 * 1e9) << "\n"
      << "bias field B_b [T]         " << f(s.r.trap.bias_T) << "\n"
      << "offset field B_o [T]       " << f(s.r.trap.offset_T) << "\n"
      << "omega_r magnetic [rad/s]   " << f(tr.omega_r_magnetic) << "\n"
      << "omega_r curvature [rad/s]  " << f(tr.omega_r) << "\n"
      << "profile status             " << (tr.ok ? tunneling::to_string(tr.status) : "error") << "\n";
    if (tr.status == tunneling::ProfileStatus::barrier) {
        o << "barrier height [J]         " << f(tr.height) << "\n"
          << "barrier width [nm]         " << f(tr.width * 1e9) << "\n";
    }
    o << "\n"
      << "                 tau_SF [s]         tau_CP [s]\n"
      << "y0 = " << f(y0 * 1e9) << " nm  " << f(sf.tau_sf) << "  " << f(tr.tau_cp) << "\n";
    if (!tr.ok) o << "tunneling error: " << tr.error << "\n";
    return o.str();
}

int cmd_conductivity(const config::RunConfig& c, const RunOptions& o, std::ostream& log) {
    prepare(o);
    const fs::path dir(o.out_dir);
    write_file(dir / "conductivity.csv", conductivity_csv(c));
    write_file(dir / "conductivity.gp",
               gnuplot("conductivity.csv", "Axial conductivity", "omega [rad/s]", "sigma [S/m]", "1:2", true,
                       true));
    log << "wrote " << (dir / "conductivity.csv").string() << "\n";
    return ok;
}

int cmd_spinflip_sweep(const config::RunConfig& c, const RunOptions& o, std::ostream& log) {
    prepare(o);
    const fs::path dir(o.out_dir);
    bool all_failed = false;
    write_file(dir / "spinflip.csv", spinflip_csv(c, o.jobs, &all_failed));
    write_file(dir / "spinflip.gp", gnuplot("spinflip.csv", "Spin-flip lifetime", "y0 [nm]", "tau_SF [s]",
                                            "1:5", false, true));
    log << "wrote " << (dir / "spinflip.csv").string() << "\n";
    if (all_failed) {
        log << "every sweep point failed\n";
        return numeric_failure;
    }
    return ok;
}

int cmd_potential_profile(const config::RunConfig& c, const RunOptions& o, std::ostream& log) {
    prepare(o);
    const fs::path dir(o.out_dir);
    const auto files = profile_csvs(c, o.jobs);
    std::ostringstream plot;
    plot << "set datafile separator ','\nset datafile commentschars '#'\n"
         << "set title 'Total potential'\nset xlabel 'y [nm]'\nset ylabel 'V_tot [J]'\nplot ";
    for (std::size_t i = 0; i < files.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "profile_%g_nm.csv", c.sweep.profile_y0_nm[i]);
        write_file(dir / name, files[i]);
        plot << (i ? ", " : "") << "'" << name << "' using 1:4 with lines title '" << c.sweep.profile_y0_nm[i]
             << " nm'";
        log << "wrote " << (dir / name).string() << "\n";
    }
    plot << "\n";
    write_file(dir / "profile.gp", plot.str());
    return ok;
}

int cmd_tunneling_sweep(const config::RunConfig& c, const RunOptions& o, std::ostream& log) {
    prepare(o);
    const fs::path dir(o.out_dir);
    write_file(dir / "tunneling.csv", tunneling_csv(c, o.jobs));
    write_file(dir / "tunneling.gp", gnuplot("tunneling.csv", "Tunneling lifetime", "y0 [nm]", "tau_CP [s]",
                                             "1:5", false, true));
    log << "wrote " << (dir / "tunneling.csv").string() << "\n";
    return ok;
}

int cmd_summary(const config::RunConfig& c, const RunOptions& o, std::ostream& out, std::ostream& log) {
    prepare(o);
    const auto text = summary_text(c, o.jobs);
    write_file(fs::path(o.out_dir) / "summary.txt", text);
    out << text;
    log << "wrote " << (fs::path(o.out_dir) / "summary.txt").string() << "\n";
    return ok;
}

int guarded(std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const NumericError& e) {
        log << "numeric failure: " << e.what() << "\n";
        return numeric_failure;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        log << "numeric failure: " << e.what() << "\n";
        return numeric_failure;
    }
}

}  // namespace cntrap::commands
