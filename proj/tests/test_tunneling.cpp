#include <cmath>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "doctest.h"

#include "approx.hpp"

#include "cntrap/constants.hpp"
#include "cntrap/material.hpp"
#include "cntrap/tunneling.hpp"

using namespace cntrap;
using namespace cntrap::tunneling;
using testutil::Approx;

namespace {
constexpr double R = 3.52e-10;
const trap::AtomSpec atom = trap::AtomSpec::rb87();

trap::TrapConfig trap_at(double y0) { return trap::TrapConfig::from_axis_distance(20e-6, y0 + R, 1e-5); }

SurfacePotential power_law(double C) {
    return [C](double y) { return -C / (y * y * y * y); };
}

// Turning point of f on [a, b] by bracketing root search.
double root(const std::function<double(double)>& f, double a, double b) {
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::toms748_solve(f, a, b, tol, it);
    return 0.5 * (r.first + r.second);
}
}  // namespace

TEST_CASE("magnetic trap alone") {
    const double y0 = 150e-9;
    const auto p = build_profile(trap_at(y0), atom, R, nullptr, y0);
    CHECK(p.status == ProfileStatus::no_barrier);
    CHECK(p.y_min == Approx(y0).epsilon(1e-7));
    CHECK(p.v_min == Approx(constants::muB * 1e-5).epsilon(1e-9));
    CHECK(p.omega_r == Approx(p.omega_r_magnetic).epsilon(1e-4));
    for (double u : p.u_cp) CHECK(u == 0.0);
    const auto t = wkb_lifetime(p, atom);
    CHECK(t.transmission == 1.0);
    CHECK(t.tau_cp == Approx(2 * constants::pi / p.omega_r).epsilon(1e-12));
}

TEST_CASE("profile arrays") {
    const double y0 = 120e-9;
    const auto p = build_profile(trap_at(y0), atom, R, power_law(1e-58), y0);
    REQUIRE(p.y.size() == 600);
    CHECK(p.y.front() == Approx(0.02 * y0));
    CHECK(p.y.back() == Approx(3 * y0));
    for (std::size_t i = 0; i < p.y.size(); ++i) {
        CHECK(p.v_tot[i] == Approx(p.v_mag[i] + p.u_cp[i]).epsilon(1e-15));
        CHECK(p.v_mag[i] == Approx(trap::zeeman_potential(trap_at(y0), atom, p.y[i] + R)).epsilon(1e-15));
    }
    CHECK(p.total(p.y_min) == Approx(p.v_min).epsilon(1e-15));
    CHECK_THROWS_AS(build_profile(trap_at(y0), atom, R, nullptr, -1.0), std::domain_error);
    ProfileOptions coarse;
    coarse.points = 100;
    CHECK_THROWS_AS(build_profile(trap_at(y0), atom, R, nullptr, y0, coarse), std::invalid_argument);
}

TEST_CASE("barrier geometry") {
    const double y0 = 150e-9;
    const auto p = build_profile(trap_at(y0), atom, R, power_law(1e-58), y0);
    REQUIRE(p.status == ProfileStatus::barrier);
    CHECK(p.y1 < p.y_max);
    CHECK(p.y_max < p.y2);
    CHECK(p.y2 == p.y_min);
    CHECK(p.height == Approx(p.v_max - p.v_min).epsilon(1e-14));
    CHECK(p.width == Approx(p.y2 - p.y1).epsilon(1e-14));
    CHECK(p.total(p.y1) == Approx(p.v_min).epsilon(1e-9));
    const double h = 1e-3 * p.y_max;
    CHECK(p.total(p.y_max) >= p.total(p.y_max + h));
    CHECK(p.total(p.y_max) >= p.total(p.y_max - h));
}

TEST_CASE("WKB exponent against an independent integral") {
    for (double y0 : {100e-9, 150e-9}) {
        const auto p = build_profile(trap_at(y0), atom, R, power_law(1e-58), y0);
        REQUIRE(p.status == ProfileStatus::barrier);
        const auto t = wkb_lifetime(p, atom);
        const double E = p.v_min + 0.5 * constants::hbar * p.omega_r;
        CHECK(t.energy == Approx(E).epsilon(1e-14));
        auto g = [&](double y) { return p.total(y) - E; };
        const double a = root(g, p.y.front(), p.y_max);
        const double b = root(g, p.y_max, p.y_min);
        boost::math::quadrature::tanh_sinh<double> ts;
        const double I = ts.integrate(
            [&](double y) { return std::sqrt(std::max(0.0, 2 * atom.mass_kg * g(y))); }, a, b);
        const double lnT = -2.0 / constants::hbar * I;
        CHECK(t.ln_T == Approx(lnT).epsilon(1e-6));
        CHECK(t.transmission == Approx(std::exp(lnT)).epsilon(1e-6));
        CHECK(t.tau_cp == Approx(2 * constants::pi / (t.transmission * p.omega_r)).epsilon(1e-12));
        CHECK(t.ln_T_vmin < t.ln_T);
    }
}

TEST_CASE("grid refinement") {
    const double y0 = 150e-9;
    ProfileOptions fine;
    fine.points = 2400;
    const auto a = wkb_lifetime(build_profile(trap_at(y0), atom, R, power_law(1e-58), y0), atom);
    const auto b = wkb_lifetime(build_profile(trap_at(y0), atom, R, power_law(1e-58), y0, fine), atom);
    CHECK(std::abs(a.ln_T - b.ln_T) < 5e-3 * std::abs(b.ln_T));
}

TEST_CASE("thick barrier suppresses escape") {
    const double y0 = 150e-9;
    double prev = 0.0;
    for (double C : {3e-59, 1e-59, 1e-60, 3e-61}) {
        const auto t = wkb_lifetime(build_profile(trap_at(y0), atom, R, power_law(C), y0), atom);
        REQUIRE(t.status == ProfileStatus::barrier);
        CHECK(t.ln_T < prev);
        prev = t.ln_T;
    }
    trap::AtomSpec heavy = atom;
    heavy.mass_kg *= 100;
    const auto t = wkb_lifetime(build_profile(trap_at(y0), heavy, R, power_law(1e-60), y0), heavy);
    CHECK(t.ln_T < -200);
    CHECK(t.transmission < 1e-80);
    CHECK(t.tau_cp > 1e80);
}

TEST_CASE("trap destroyed") {
    const double y0 = 150e-9;
    const auto p = build_profile(trap_at(y0), atom, R, power_law(1e-55), y0);
    CHECK(p.status == ProfileStatus::trap_destroyed);
    const auto t = wkb_lifetime(p, atom);
    CHECK(t.transmission == 1.0);
    CHECK(t.tau_cp == 0.0);
    CHECK(std::string(to_string(t.status)) == "trap_destroyed");
}

TEST_CASE("sweep") {
    const auto shell = green::Shell::from_conductivity(
        std::make_shared<material::Conductivity>(material::NanotubeSpec{}));
    const std::vector<double> ys{100e-9, 150e-9};
    // Bookkeeping only; loose potential tolerances keep this quick.
    casimir::Options fast;
    fast.rel_tol = 1e-4;
    fast.green = {1e-5, 1e-6, 200, 4000};
    const ProfileOptions popt;
    const auto a = tunneling_sweep(shell, 20e-6, 1e-5, atom, ys, 1, popt, fast);
    const auto b = tunneling_sweep(shell, 20e-6, 1e-5, atom, ys, 2, popt, fast);
    REQUIRE(a.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(a[i].ok);
        CHECK(a[i].y0_m == ys[i]);
        CHECK(a[i].ln_T == b[i].ln_T);
        CHECK(a[i].tau_cp == b[i].tau_cp);
    }
    // A zero offset field is rejected per point, not for the whole sweep.
    const auto bad = tunneling_sweep(shell, 20e-6, 0.0, atom, ys, 1, popt, fast);
    for (const auto& r : bad) {
        CHECK_FALSE(r.ok);
        CHECK_FALSE(r.error.empty());
    }
    CHECK_THROWS_AS(tunneling_sweep(shell, 20e-6, 1e-5, atom, {-1e-9}, 1), std::domain_error);
}
