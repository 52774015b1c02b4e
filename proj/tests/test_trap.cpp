#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"

#include "approx.hpp"

#include "cntrap/constants.hpp"
#include "cntrap/trap.hpp"

using namespace cntrap;
using namespace cntrap::trap;
using testutil::Approx;

namespace {
constexpr double pi = constants::pi;
}

TEST_CASE("side-guide geometry") {
    const auto c = TrapConfig::from_axis_distance(20e-6, 150e-9, 1e-5);
    CHECK(c.bias_T == Approx(constants::mu0 * 20e-6 / (2 * pi * 150e-9)).epsilon(1e-14));
    CHECK(c.bias_T == Approx(2.67e-5).epsilon(2e-3));
    CHECK(c.y0_m() == Approx(150e-9).epsilon(1e-12));
    const double b1 = c.gradient_T_per_m();
    const double b2 = -constants::mu0 * c.current_A / (2 * pi * std::pow(c.y0_m(), 2));
    CHECK(b1 == Approx(b2).epsilon(1e-12));
    CHECK_THROWS_AS(TrapConfig::from_axis_distance(20e-6, 0.0, 1e-5), std::invalid_argument);
    TrapConfig bad = c;
    bad.offset_T = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("field magnitude") {
    const auto c = TrapConfig::from_axis_distance(20e-6, 150e-9, 1e-5);
    CHECK(field_magnitude(c, c.y0_m()) == Approx(1e-5).epsilon(1e-12));
    CHECK(field_magnitude(c, 1e3) == Approx(std::hypot(c.offset_T, c.bias_T)).epsilon(1e-9));
    CHECK_THROWS_AS(field_magnitude(c, 0.0), std::domain_error);
}

TEST_CASE("Zeeman potential") {
    const auto atom = AtomSpec::rb87();
    const auto c = TrapConfig::from_axis_distance(20e-6, 150e-9, 1e-5);
    const double vmin = zeeman_potential(c, atom, c.y0_m());
    CHECK(vmin == Approx(constants::muB * 1e-5).epsilon(1e-12));
    CHECK(vmin == Approx(9.27e-29).epsilon(1e-3));
    for (double y = 1e-9; y < 1e-5; y *= 1.3) CHECK(zeeman_potential(c, atom, y) >= vmin);
    AtomSpec high = atom;
    high.m_F = -2;
    CHECK_THROWS_AS(zeeman_potential(c, high, c.y0_m()), std::invalid_argument);
    CHECK_THROWS_AS(high.validate(), std::invalid_argument);
}

TEST_CASE("spin-flip frequency") {
    const auto atom = AtomSpec::rb87();
    const auto c = TrapConfig::from_axis_distance(20e-6, 150e-9, 1e-5);
    CHECK(spin_flip_frequency_Hz(c, atom) == Approx(70e3).epsilon(1e-3));
    CHECK(offset_for_frequency(70e3, atom) == Approx(1e-5).epsilon(1e-3));
    auto c2 = c;
    c2.offset_T *= 3.0;
    CHECK(spin_flip_frequency_Hz(c2, atom) == Approx(3.0 * spin_flip_frequency_Hz(c, atom)).epsilon(1e-14));
    const double hw = constants::h_planck * spin_flip_frequency_Hz(c, atom);
    CHECK(hw == Approx(4.64e-29).epsilon(1e-3));
}

TEST_CASE("harmonic diagnostic agrees to second order") {
    const auto atom = AtomSpec::rb87();
    const auto c = TrapConfig::from_axis_distance(20e-6, 150e-9, 1e-5);
    const double y0 = c.y0_m(), vmin = zeeman_potential(c, atom, y0);
    auto err = [&](double f) {
        const double y = y0 * (1 + f);
        const double ve = zeeman_potential(c, atom, y);
        return std::abs(harmonic_potential(c, atom, y) - ve) / (ve - vmin);
    };
    for (double f : {-4e-3, -1e-3, 1e-3, 4e-3}) CHECK(err(f) < 1e-2);
    // Relative error shrinks linearly with the displacement.
    CHECK(err(1e-4) / err(1e-3) == Approx(0.1).epsilon(0.05));
}

TEST_CASE("closed-form trap frequency scaling") {
    const auto atom = AtomSpec::rb87();
    const auto a = TrapConfig::from_axis_distance(20e-6, 150e-9, 1e-5);
    const auto b = TrapConfig::from_axis_distance(20e-6, 300e-9, 1e-5);
    const auto c = TrapConfig::from_axis_distance(20e-6, 150e-9, 4e-5);
    const double w = trap_frequency_closed_form(a, atom);
    CHECK(trap_frequency_closed_form(b, atom) == Approx(w / 4).epsilon(1e-12));
    CHECK(trap_frequency_closed_form(c, atom) == Approx(w / 2).epsilon(1e-12));
    CHECK(w == Approx(4.49e5).epsilon(1e-2));
}
