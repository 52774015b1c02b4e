#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "approx.hpp"

#include "cntrap/constants.hpp"
#include "cntrap/material.hpp"
#include "cntrap/spinflip.hpp"

using namespace cntrap;
using namespace cntrap::spinflip;
using testutil::Approx;

namespace {
constexpr double R = 3.52e-10;

green::Shell default_shell() {
    return green::Shell::from_conductivity(std::make_shared<material::Conductivity>(material::NanotubeSpec{}));
}
trap::TrapConfig trap_at(double y0) {
    return trap::TrapConfig::from_axis_distance(20e-6, y0 + R,
                                                trap::offset_for_frequency(70e3, trap::AtomSpec::rb87()));
}
}  // namespace

TEST_CASE("thermal occupation") {
    const double w0 = 2 * constants::pi * 70e3;
    CHECK(thermal_occupation(w0, 380.0) == Approx(1.131e8).epsilon(1e-3));
    CHECK(thermal_occupation(w0, 380.0) ==
          Approx(1.0 / std::expm1(constants::hbar * w0 / (constants::kB * 380.0))).epsilon(1e-12));
    CHECK_THROWS_AS(thermal_occupation(w0, 0.0), std::domain_error);
}

TEST_CASE("rate bookkeeping") {
    const auto atom = trap::AtomSpec::rb87();
    const auto r = spin_flip_rate(default_shell(), trap_at(150e-9), atom, 150e-9, 380.0);
    CHECK(r.gamma_tot == Approx(r.gamma0 * (r.n_th + 1)).epsilon(1e-12));
    CHECK(r.tau_sf == Approx(1.0 / r.gamma_tot).epsilon(1e-14));
    CHECK(r.gamma0 >= r.vacuum_contribution);
    CHECK(r.vacuum_contribution >= 0.0);
    CHECK(r.tau_sf == Approx(94.4).epsilon(0.25));
}

TEST_CASE("no shell leaves the vacuum rate") {
    const auto atom = trap::AtomSpec::rb87();
    const auto empty = green::Shell::constant(R, 0.0, 0.0);
    const auto r = spin_flip_rate(empty, trap_at(150e-9), atom, 150e-9, 380.0);
    CHECK(r.gamma0 == Approx(r.vacuum_contribution).epsilon(1e-14));
    CHECK(r.tau_sf > 1e4);
    // Free-space magnetic-dipole rate: 2 mu0 (g_S muB)^2 / hbar * (1/16 + 1/16) * k^2 omega/(6 pi c).
    const double w = 2 * constants::pi * 70e3, k = w / constants::c;
    const double mu = 2.0 * constants::muB;
    const double expect = 2 * constants::mu0 * mu * mu / constants::hbar * (2.0 / 16.0) * k * k * w /
                          (6 * constants::pi * constants::c);
    CHECK(r.gamma0 == Approx(expect).epsilon(1e-12));
}

TEST_CASE("spin matrix elements enter quadratically") {
    auto atom = trap::AtomSpec::rb87();
    const auto shell = default_shell();
    const auto a = spin_flip_rate(shell, trap_at(100e-9), atom, 100e-9, 380.0);
    atom.spin_x *= 2;
    atom.spin_y *= 2;
    const auto b = spin_flip_rate(shell, trap_at(100e-9), atom, 100e-9, 380.0);
    CHECK(b.gamma0 == Approx(4 * a.gamma0).epsilon(1e-12));
}

TEST_CASE("frame choice") {
    const auto atom = trap::AtomSpec::rb87();
    const auto shell = default_shell();
    Options phi_r, r_z;
    r_z.frame = SpinFrame::r_z;
    const auto a = spin_flip_rate(shell, trap_at(150e-9), atom, 150e-9, 380.0, phi_r);
    const auto b = spin_flip_rate(shell, trap_at(150e-9), atom, 150e-9, 380.0, r_z);
    CHECK(a.gamma0 > 0);
    CHECK(b.gamma0 > 0);
    CHECK(a.gamma0 != b.gamma0);
}

TEST_CASE("lifetime sweep") {
    const auto atom = trap::AtomSpec::rb87();
    const auto shell = default_shell();
    std::vector<double> ys;
    for (double y = 50e-9; y <= 200e-9 + 1e-12; y += 10e-9) ys.push_back(y);
    ys.push_back(-1.0);
    const auto serial = lifetime_sweep(shell, trap_at(150e-9), atom, ys, 380.0, 1);
    const auto par = lifetime_sweep(shell, trap_at(150e-9), atom, ys, 380.0, 4);
    REQUIRE(serial.size() == ys.size());
    CHECK_FALSE(serial.back().ok);
    CHECK_FALSE(serial.back().error.empty());
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        CHECK(serial[i].ok);
        CHECK(serial[i].tau_sf == par[i].tau_sf);
        if (i) CHECK(serial[i].tau_sf > serial[i - 1].tau_sf);
    }
    // Local power law over 50-200 nm: straight line in log-log.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const int n = int(ys.size()) - 1;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(ys[i]), y = std::log(serial[i].tau_sf);
        sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
    }
    const double cov = sxy - sx * sy / n, vx = sxx - sx * sx / n, vy = syy - sy * sy / n;
    const double r2 = cov * cov / (vx * vy);
    MESSAGE("fitted exponent " << cov / vx);
    CHECK(r2 > 0.999);

    const auto near = spin_flip_rate(shell, trap_at(20e-9), atom, 20e-9, 380.0);
    CHECK(near.tau_sf > 0.5);
    CHECK(near.tau_sf < 10.0);
}
