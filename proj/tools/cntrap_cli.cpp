#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cntrap/commands.hpp"
#include "cntrap/config.hpp"
#include "cntrap/errors.hpp"
#include "cntrap/version.hpp"

using namespace cntrap;

int main(int argc, char** argv) {
    CLI::App app{"Atom trapping near a carbon nanotube: conductivity, spin-flip and tunneling lifetimes"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".", mode;
    int jobs = 1;
    std::optional<double> y_min, y_max, omega_min, omega_max, y0;
    std::optional<int> points;
    app.add_option("--config", config_path, "Config file (sectioned key = value)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--jobs", jobs, "Parallel sweep workers")->check(CLI::PositiveNumber);
    app.add_option("--mode", mode, "Conductivity model")->check(CLI::IsMember({"tight-binding", "calibrated"}));
    app.add_option("--y-min-nm", y_min, "Sweep start [nm]");
    app.add_option("--y-max-nm", y_max, "Sweep end [nm]");
    app.add_option("--points", points, "Sweep points");
    app.add_option("--omega-min", omega_min, "Frequency sweep start [rad/s]");
    app.add_option("--omega-max", omega_max, "Frequency sweep end [rad/s]");
    app.add_option("--y0-nm", y0, "Trap distance from the surface [nm]");

    auto* conductivity = app.add_subcommand("conductivity", "Axial conductivity and permittivity versus frequency");
    auto* spinflip = app.add_subcommand("spinflip-sweep", "Spin-flip lifetime versus trap distance");
    auto* profile = app.add_subcommand("potential-profile", "Total potential along the radial line");
    auto* tunneling = app.add_subcommand("tunneling-sweep", "Tunneling lifetime versus trap distance");
    auto* summary = app.add_subcommand("summary", "Key numbers at the configured trap distance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : commands::config_error;
    }

    return commands::guarded(std::cerr, [&]() -> int {
        auto c = config_path.empty() ? config::defaults() : config::parse_file(config_path);
        if (!mode.empty())
            c.nanotube.mode = mode == "calibrated" ? material::ConductivityMode::calibrated
                                                   : material::ConductivityMode::tight_binding;
        if (y0) {
            c.trap.y0_nm = *y0;
            c.trap.B_b_mT.reset();
            c.sweep.profile_y0_nm = {*y0};
        }
        c = config::with_trap_defaults(c);
        const bool tunnel = tunneling->parsed();
        if (y_min) (tunnel ? c.sweep.tunnel_min_nm : c.sweep.y_min_nm) = *y_min;
        if (y_max) (tunnel ? c.sweep.tunnel_max_nm : c.sweep.y_max_nm) = *y_max;
        if (points) {
            if (conductivity->parsed()) c.sweep.omega_points = *points;
            else (tunnel ? c.sweep.tunnel_points : c.sweep.y_points) = *points;
        }
        if (omega_min) c.sweep.omega_min_rad_s = *omega_min;
        if (omega_max) c.sweep.omega_max_rad_s = *omega_max;
        config::validate(c);

        const commands::RunOptions opt{out_dir, jobs};
        if (conductivity->parsed()) return commands::cmd_conductivity(c, opt, std::cerr);
        if (spinflip->parsed()) return commands::cmd_spinflip_sweep(c, opt, std::cerr);
        if (profile->parsed()) return commands::cmd_potential_profile(c, opt, std::cerr);
        if (tunnel) return commands::cmd_tunneling_sweep(c, opt, std::cerr);
        if (summary->parsed()) return commands::cmd_summary(c, opt, std::cout, std::cerr);
        return commands::config_error;
    });
}
