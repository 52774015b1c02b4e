#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

#include "approx.hpp"
#include "cntrap/commands.hpp"
#include "cntrap/config.hpp"
#include "cntrap/errors.hpp"

using namespace cntrap;
using testutil::Approx;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("cntrap_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// Runs the CLI with arguments, returning its exit status.
int run(const std::string& args) {
    const char* exe = std::getenv("CNTRAP_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "CNTRAP_CLI not set");
    const int rc = std::system((std::string(exe) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    int n = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        ++n;
    }
    return n;
}
}  // namespace

TEST_CASE("config round trip") {
    auto c = config::with_trap_defaults(config::defaults());
    c.nanotube.sheet_length_m = 3.4e-10;
    c.sweep.profile_y0_nm = {90.0, 1.0 / 3.0};
    c.temperature_K = 300.25;
    const auto back = config::parse_string(config::to_text(c));
    CHECK(back == c);
    CHECK(config::parse_echo("# junk\n" + config::echo(c) + "x,y\n1,2\n") == c);
}

TEST_CASE("trailing comments") {
    const auto c = config::parse_string("[nanotube]\nmode = tight-binding   ; band integrals\n[trap]\ny0_nm = 120 # nm\n");
    CHECK(c.nanotube.mode == material::ConductivityMode::tight_binding);
    CHECK(c.trap.y0_nm == 120.0);
}

TEST_CASE("config rejects bad input") {
    CHECK_THROWS_AS(config::parse_string("[nanotube]\nwidth_nm = 3\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_string("[bogus]\na = 1\n"), ConfigError);
    CHECK_THROWS_AS(config::parse_string("[nanotube]\na = nine\n"), ConfigError);
    CHECK_THROWS_AS(config::validate(config::parse_string("[trap]\ny0_nm = 100\nB_b_mT = 0.02\n")), ConfigError);
    CHECK_THROWS_AS(config::validate(config::parse_string("[trap]\nB_o_mT = 0.01\nf0_kHz = 70\n")), ConfigError);
    auto c = config::with_trap_defaults(config::defaults());
    c.sweep.y_min_nm = 50;
    c.sweep.y_max_nm = 10;
    CHECK_THROWS_AS(config::validate(c), ConfigError);
}

TEST_CASE("resolution of trap parameters") {
    const auto r = config::resolve(config::with_trap_defaults(config::defaults()));
    CHECK(r.y0_surface_m == Approx(150e-9).epsilon(1e-12));
    CHECK(r.f0_Hz == Approx(70e3).epsilon(1e-12));
    CHECK(r.trap.y0_m() == Approx(150e-9 + 0.352e-9).epsilon(1e-12));
    auto c = config::defaults();
    c.trap.B_b_mT = 0.02;
    c.trap.B_o_mT = 0.01;
    const auto r2 = config::resolve(c);
    CHECK(r2.trap.bias_T == Approx(2e-5).epsilon(1e-14));
    CHECK(r2.trap.offset_T == Approx(1e-5).epsilon(1e-14));
}

TEST_CASE("grid helper") {
    const auto lin = commands::grid(1.0, 3.0, 3, config::Scale::linear);
    CHECK(lin == std::vector<double>{1.0, 2.0, 3.0});
    const auto lg = commands::grid(1.0, 100.0, 3, config::Scale::log);
    CHECK(lg[1] == Approx(10.0).epsilon(1e-14));
    CHECK(lg.back() == 100.0);
    CHECK(commands::grid(5.0, 5.0, 1, config::Scale::log) == std::vector<double>{5.0});
}

TEST_CASE("library outputs are deterministic") {
    auto c = config::with_trap_defaults(config::defaults());
    c.sweep.omega_points = 5;
    c.sweep.y_points = 4;
    c.sweep.y_min_nm = 50;
    CHECK(commands::conductivity_csv(c) == commands::conductivity_csv(c));
    bool all_failed = true;
    const auto s1 = commands::spinflip_csv(c, 1, &all_failed);
    CHECK_FALSE(all_failed);
    CHECK(s1 == commands::spinflip_csv(c, 3));
    CHECK(data_rows(s1) == 4);
    CHECK(config::parse_echo(s1) == c);
}

TEST_CASE("executable exit codes and outputs") {
    const auto d = scratch("codes");
    const std::string out = " --out " + d.string();
    CHECK(run("--version") == 0);
    CHECK(run("conductivity --omega-min 1e5 --omega-max 1e5 --points 1" + out) == 0);
    CHECK(data_rows(slurp(d / "conductivity.csv")) == 1);
    CHECK(fs::exists(d / "conductivity.gp"));

    CHECK(run("spinflip-sweep --y-min-nm 50 --y-max-nm 10" + out) == 2);
    CHECK(run("spinflip-sweep --points 0" + out) == 2);
    CHECK(run("conductivity --mode metallic" + out) == 2);
    CHECK(run("no-such-command" + out) == 2);
    CHECK(run("summary --config " + (d / "missing.ini").string() + out) == 2);

    std::ofstream(d / "bad.ini") << "[trap]\ny0_nm = 100\nB_b_mT = 0.02\n";
    CHECK(run("spinflip-sweep --config " + (d / "bad.ini").string() + out) == 2);

    std::ofstream(d / "ok.ini") << "[sweep]\ny_min_nm = 40\ny_max_nm = 60\ny_points = 3\n";
    CHECK(run("spinflip-sweep --config " + (d / "ok.ini").string() + out) == 0);
    const auto a = slurp(d / "spinflip.csv");
    CHECK(data_rows(a) == 3);
    CHECK(run("spinflip-sweep --jobs 2 --config " + (d / "ok.ini").string() + out) == 0);
    CHECK(slurp(d / "spinflip.csv") == a);

    // Re-running from the echoed configuration reproduces the file.
    std::ofstream(d / "echo.ini") << config::to_text(config::parse_echo(a));
    CHECK(run("spinflip-sweep --config " + (d / "echo.ini").string() + out) == 0);
    CHECK(slurp(d / "spinflip.csv") == a);
    fs::remove_all(d);
}
