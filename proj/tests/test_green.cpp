#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "doctest.h"

#include "approx.hpp"

#include "cntrap/constants.hpp"
#include "cntrap/green.hpp"
#include "cntrap/material.hpp"
#include "cntrap/specfun.hpp"

using namespace cntrap;
using namespace cntrap::green;
using testutil::Approx;

namespace {
constexpr double pi = constants::pi;
constexpr double R = 3.52e-10;
const double omega0 = 2 * pi * 70e3;

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

Shell default_shell() {
    return Shell::from_conductivity(std::make_shared<material::Conductivity>(material::NanotubeSpec{}));
}

// Random passive sheet conductance spanning weak to near-perfect shells.
cdouble random_sigma(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(-6.0, 9.0), ph(-0.5 * pi, 0.5 * pi);
    return std::polar(std::pow(10.0, mag(rng)), ph(rng));
}
}  // namespace

TEST_CASE("closed-form C1V matches the boundary solve") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> order(0, 10);
    std::uniform_real_distribution<double> lw(4.0, 17.0), hk(-3.0, 3.0);
    int tested = 0;
    while (tested < 120) {
        const int n = order(rng);
        const double w = std::pow(10.0, lw(rng));
        const double k = w / constants::c;
        const double h = hk(rng) * k;
        if (std::abs(std::abs(h) - k) < 1e-3 * k) continue;
        const cdouble sigma = random_sigma(rng);
        const auto co = solve_boundary_system(n, h, w, R, sigma);
        const cdouble cf = c1v_closed_form(n, h, Frequency::real(w), R, sigma);
        CAPTURE(n);
        CAPTURE(w);
        CAPTURE(h / k);
        CAPTURE(sigma);
        CHECK(rel(cf, co.C1V) < 1e-9);
        const double scale = std::max(1.0, std::abs(co.C1V));
        CHECK(std::abs(co.C1H) < 1e-9 * scale);
        CHECK(std::abs(co.C2H) < 1e-9 * scale);
        CHECK(std::abs(co.C2V) < 1e-9 * scale);
        if (std::abs(h) < k) CHECK(std::abs(co.C1V) <= 1.0 + 1e-12);
        ++tested;
    }
}

TEST_CASE("reflection coefficients without and with a strong shell") {
    const double k = omega0 / constants::c;
    const auto none = solve_boundary_system(1, 0.3 * k, omega0, R, 0.0);
    CHECK(none.C1V == cdouble(0.0));
    CHECK(none.C1H == cdouble(0.0));
    CHECK(none.C2H == cdouble(0.0));
    CHECK(none.C2V == cdouble(0.0));
    CHECK(c1v_closed_form(1, 0.3 * k, Frequency::real(omega0), R, 0.0) == cdouble(0.0));

    const double w = 1e16, kk = w / constants::c;
    for (int n : {0, 1, 2}) {
        const double h = 0.4 * kk;
        const double x = std::sqrt(kk * kk - h * h) * R;
        const cdouble pec = -specfun::bessel_j(n, x).value / specfun::hankel1(n, x).value;
        const auto big = solve_boundary_system(n, h, w, R, 1e6);
        CHECK(rel(big.C1V, pec) < 1e-4);
    }
}

TEST_CASE("scattering tensor vanishes without conductance") {
    const Shell empty = Shell::constant(R, 0.0, 0.0);
    const CylPoint p{R + 150e-9, 0.0, 0.0};
    for (auto fl : {Flavor::electric, Flavor::curlcurl}) {
        CHECK(max_norm(green_scattering(p, p, Frequency::real(omega0), empty, fl).tensor) == 0.0);
        CHECK(max_norm(green_scattering(p, p, Frequency::imag(1e14), empty, fl).tensor) == 0.0);
    }
}

TEST_CASE("reciprocity off coincidence") {
    const Shell s = default_shell();
    const CylPoint a{R + 120e-9, 0.3, 10e-9}, b{R + 200e-9, 1.1, -25e-9};
    for (auto fl : {Flavor::electric, Flavor::curlcurl}) {
        const auto ab = green_scattering(a, b, Frequency::real(omega0), s, fl);
        const auto ba = green_scattering(b, a, Frequency::real(omega0), s, fl);
        CHECK(max_norm(ab.tensor - transpose(ba.tensor)) < 1e-7 * max_norm(ab.tensor));
    }
}

TEST_CASE("imaginary-axis tensor is real with negative trace") {
    const Shell s = default_shell();
    const CylPoint p{R + 150e-9, 0.0, 0.0};
    for (double u : {1e10, 1e13, 1e15, 1e16, 3e16}) {
        CAPTURE(u);
        const auto g = green_scattering(p, p, Frequency::imag(u), s, Flavor::electric);
        for (const auto& e : g.tensor.m) CHECK(std::abs(e.imag()) <= 1e-8 * std::abs(e.real()) + 1e-300);
        CHECK(trace(g.tensor).real() < 0.0);
        CHECK(hermitian_defect(g.tensor) <= 1e-8 * max_norm(g.tensor));
    }
}

TEST_CASE("weak-shell imaginary-axis response is linear in the conductance") {
    const CylPoint p{R + 100e-9, 0.0, 0.0};
    const auto weak1 = green_scattering(p, p, Frequency::imag(1e15), Shell::constant(R, 0.0, 1e-9), Flavor::electric);
    const auto weak2 = green_scattering(p, p, Frequency::imag(1e15), Shell::constant(R, 0.0, 2e-9), Flavor::electric);
    CHECK(trace(weak2.tensor).real() == Approx(2.0 * trace(weak1.tensor).real()).epsilon(1e-6));
}

TEST_CASE("vacuum tensor") {
    const CylPoint p{R + 150e-9, 0.4, 0.0};
    for (double w : {omega0, 1e12, 3e15}) {
        const auto f = Frequency::real(w);
        const auto cf = green_vacuum(p, p, f, Flavor::electric, VacuumMode::closed_form, true);
        const auto ex = green_vacuum(p, p, f, Flavor::electric, VacuumMode::cylindrical_expansion, true);
        CHECK(trace(cf.tensor).imag() == Approx(w / (2 * pi * constants::c)).epsilon(1e-6));
        CHECK(trace(ex.tensor).imag() == Approx(w / (2 * pi * constants::c)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(green_vacuum(p, p, Frequency::real(omega0), Flavor::electric), std::domain_error);

    SUBCASE("expansion and closed form at 50 nm separation") {
        const double w = 3e15;
        const CylPoint a{R + 100e-9, 0.2, 5e-9}, b{R + 145e-9, 0.5, -12e-9};
        const auto cf = green_vacuum(a, b, Frequency::real(w), Flavor::electric);
        const auto ex = green_vacuum(a, b, Frequency::real(w), Flavor::electric, VacuumMode::cylindrical_expansion);
        CHECK(max_norm(cf.tensor - ex.tensor) < 1e-6 * max_norm(cf.tensor));
    }
    SUBCASE("far-field decay 1/d") {
        const double w = 1e15, k = w / constants::c;
        const CylPoint a{1e-6, 0.0, 0.0};
        auto norm_at = [&](double d) {
            return max_norm(green_vacuum(a, CylPoint{1e-6, 0.0, d}, Frequency::real(w), Flavor::electric).tensor);
        };
        const double d1 = 200.0 / k, d2 = 2000.0 / k;
        const double slope = std::log(norm_at(d2) / norm_at(d1)) / std::log(d2 / d1);
        CHECK(slope == Approx(-1.0).epsilon(0.05));
    }
    SUBCASE("curl-curl is k^2 times electric") {
        const double w = 2e15, k = w / constants::c;
        const CylPoint a{R + 50e-9, 0.0, 0.0}, b{R + 80e-9, 0.7, 3e-9};
        const auto e = green_vacuum(a, b, Frequency::real(w), Flavor::electric);
        const auto m = green_vacuum(a, b, Frequency::real(w), Flavor::curlcurl);
        CHECK(max_norm(m.tensor - (k * k) * e.tensor) < 1e-12 * max_norm(m.tensor));
    }
}

TEST_CASE("total equals vacuum plus scattering") {
    const Shell s = default_shell();
    const CylPoint a{R + 100e-9, 0.0, 0.0}, b{R + 160e-9, 0.9, 20e-9};
    const auto f = Frequency::real(omega0);
    const auto t = green_total(a, b, f, s, Flavor::electric);
    const auto v = green_vacuum(a, b, f, Flavor::electric);
    const auto g = green_scattering(a, b, f, s, Flavor::electric);
    CHECK(max_norm(t.tensor - (v.tensor + g.tensor)) <= 1e-12 * max_norm(t.tensor));
}

TEST_CASE("scattering norm decreases with distance") {
    const Shell s = default_shell();
    double prev = INFINITY;
    for (double y : {10e-9, 30e-9, 100e-9, 200e-9, 500e-9}) {
        const CylPoint p{R + y, 0.0, 0.0};
        const double m = max_norm(green_scattering(p, p, Frequency::real(omega0), s, Flavor::curlcurl).tensor);
        CHECK(m < prev);
        prev = m;
    }
}

TEST_CASE("imaginary-axis trace against a direct modified-Bessel evaluation") {
    // Coincident-point trace written out with Boost I_n, K_n:
    //   Tr G = (i/8 pi) sum_n (2 - d_n0) int dh C1V / eta^2 (h^2 eta^2 H'^2 + n^2 h^2 H^2 / r^2 + eta^4 H^2) / k^2
    // with eta = i kappa, J_n(i x) = i^n I_n(x), H_n(i x) = (2/pi) i^-(n+1) K_n(x).
    namespace bm = boost::math;
    const double u = 3e14, r = R + 80e-9;
    const material::Conductivity cond(material::NanotubeSpec{});
    const double sig = cond.sheet_conductance_imag(u);
    const cdouble I(0, 1), k = I * u / constants::c, om = I * u;
    const cdouble a = constants::mu0 * om * R * sig;
    auto ipow = [&](int p) { return std::pow(I, p); };
    cdouble total = 0.0;
    for (int n = 0; n <= 8; ++n) {
        auto f = [&](double h) {
            const double kappa = std::sqrt(u * u / (constants::c * constants::c) + h * h);
            if (kappa * (r - R) > 300.0) return 0.0;  // below exp(-600) of the peak
            const cdouble e2 = -kappa * kappa;
            const cdouble J = ipow(n) * bm::cyl_bessel_i(n, kappa * R);
            const cdouble HR = 2.0 / pi * ipow(-(n + 1)) * bm::cyl_bessel_k(n, kappa * R);
            const cdouble H = 2.0 / pi * ipow(-(n + 1)) * bm::cyl_bessel_k(n, kappa * r);
            const cdouble dH = 2.0 / pi * ipow(-(n + 2)) * bm::cyl_bessel_k_prime(n, kappa * r);
            const cdouble c1v = -pi * a * e2 * J * J / (2.0 * k * k + pi * a * e2 * J * HR);
            const cdouble body = h * h * e2 * dH * dH + double(n * n) * h * h * H * H / (r * r) + e2 * e2 * H * H;
            return (I / (8.0 * pi) * c1v / e2 * body / (k * k)).real();
        };
        bm::quadrature::exp_sinh<double> q;
        const double scale = 1.0 / r;
        const double v = 2.0 * scale * q.integrate([&](double t) { return f(t * scale); }, 1e-12);
        total += (n == 0 ? 1.0 : 2.0) * v;
    }
    const CylPoint p{r, 0.0, 0.0};
    const auto g = green_scattering(p, p, Frequency::imag(u), Shell::constant(R, 0.0, sig), Flavor::electric);
    CHECK(trace(g.tensor).real() == Approx(total.real()).epsilon(1e-6));
}
