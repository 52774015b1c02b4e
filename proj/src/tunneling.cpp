#include "cntrap/tunneling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"
#include "cntrap/parallel.hpp"
#include "cntrap/quadrature.hpp"

namespace cntrap::tunneling {

namespace C = constants;

const char* to_string(ProfileStatus s) {
    switch (s) {
        case ProfileStatus::barrier: return "barrier";
        case ProfileStatus::no_barrier: return "no_barrier";
        default: return "trap_destroyed";
    }
}

namespace {

// Brent in the dimensionless variable y / b: the Boost routine carries an
// absolute tolerance floor that would swamp a bracket measured in metres.
double refine_min(const std::function<double(double)>& f, double a, double b) {
    auto g = [&](double t) { return f(t * b); };
    return boost::math::tools::brent_find_minima(g, a / b, 1.0, 26).first * b;
}

// Root of f on [a, b]; f(a), f(b) must differ in sign.
double bracket_root(const std::function<double(double)>& f, double a, double b) {
    std::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(std::abs(x), std::abs(y)); };
    const auto r = boost::math::tools::toms748_solve(f, a, b, f(a), f(b), tol, iters);
    return 0.5 * (r.first + r.second);
}

// Outermost crossing of V = E between the surface-side grid and the point yb,
// scanning downward from yb so the crossing nearest the barrier is found.
double surface_crossing(const PotentialProfile& p, double E, double yb, int from) {
    auto g = [&](double y) { return p.total(y) - E; };
    for (int i = from; i >= 0; --i)
        if (g(p.y[i]) < 0.0) return bracket_root(g, p.y[i], i + 1 <= from ? p.y[i + 1] : yb);
    // Below the grid the CP attraction always wins eventually.
    double lo = p.y.front();
    for (int k = 0; k < 60; ++k) {
        const double hi = lo;
        lo *= 0.5;
        if (g(lo) < 0.0) return bracket_root(g, lo, hi);
    }
    throw NumericError("no surface-side turning point", lo);
}

double action(const PotentialProfile& p, double mass, double E, double ya, double yb) {
    if (!(yb > ya)) return 0.0;
    // y = ya + (yb - ya)(1 - cos t)/2 removes the square-root endpoint behaviour.
    const double half = 0.5 * (yb - ya);
    auto f = [&](double t) {
        const double y = ya + half * (1.0 - std::cos(t));
        const double d = p.total(y) - E;
        return d > 0.0 ? std::sqrt(2.0 * mass * d) * half * std::sin(t) : 0.0;
    };
    quad::Options q;
    q.rel_tol = 1e-10;
    q.initial_panels = 8;
    return quad::integrate<double>(f, 0.0, C::pi, q).value;
}

}  // namespace

PotentialProfile build_profile(const trap::TrapConfig& cfg, const trap::AtomSpec& atom,
                               double R, SurfacePotential cp, double y0, const ProfileOptions& opt) {
    if (!(y0 > 0)) throw std::domain_error("trap distance must be positive");
    if (opt.points < 400) throw std::invalid_argument("profile needs at least 400 points");
    cfg.validate();
    PotentialProfile p;
    p.y0_m = y0;
    p.radius_m = R;
    p.v_mag_fn = [cfg, atom, R](double y) { return trap::zeeman_potential(cfg, atom, y + R); };
    p.u_cp_fn = cp ? std::move(cp) : SurfacePotential([](double) { return 0.0; });
    p.omega_r_magnetic = trap::trap_frequency_closed_form(cfg, atom);

    const double lo = std::max(opt.lo_floor_m, opt.lo_fraction * y0);
    const double hi = opt.hi_fraction * y0;
    const int n = opt.points;
    p.y.resize(n);
    p.v_mag.resize(n);
    p.u_cp.resize(n);
    p.v_tot.resize(n);
    for (int i = 0; i < n; ++i) {
        const double y = i == n - 1 ? hi : lo * std::pow(hi / lo, double(i) / (n - 1));
        p.y[i] = y;
        p.v_mag[i] = p.v_mag_fn(y);
        p.u_cp[i] = p.u_cp_fn(y);
        p.v_tot[i] = p.v_mag[i] + p.u_cp[i];
    }

    const auto& v = p.v_tot;
    int imin = -1;
    for (int i = 1; i + 1 < n; ++i)
        if (v[i] < v[i - 1] && v[i] <= v[i + 1])
            if (imin < 0 || std::abs(std::log(p.y[i] / y0)) < std::abs(std::log(p.y[imin] / y0)))
                imin = i;
    if (imin < 0) {
        p.status = ProfileStatus::trap_destroyed;
        return p;
    }
    auto tot = [&p](double y) { return p.total(y); };
    p.y_min = refine_min(tot, p.y[imin - 1], p.y[imin + 1]);
    p.v_min = tot(p.y_min);
    p.y2 = p.y_min;

    const double h = opt.curvature_step * p.y_min;
    const double d2 = (-tot(p.y_min - 2 * h) + 16 * tot(p.y_min - h) - 30 * p.v_min +
                       16 * tot(p.y_min + h) - tot(p.y_min + 2 * h)) / (12 * h * h);
    p.omega_r = d2 > 0 ? std::sqrt(d2 / atom.mass_kg) : 0.0;

    int imax = -1;
    for (int i = imin - 1; i >= 1; --i)
        if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
            imax = i;
            break;
        }
    if (imax < 0) {
        p.status = ProfileStatus::no_barrier;
        return p;
    }
    p.y_max = refine_min([&](double y) { return -tot(y); }, p.y[imax - 1], p.y[imax + 1]);
    p.v_max = tot(p.y_max);
    p.height = p.v_max - p.v_min;
    p.y1 = surface_crossing(p, p.v_min, p.y_max, imax - 1);
    p.width = p.y2 - p.y1;
    p.status = ProfileStatus::barrier;
    return p;
}

TunnelResult wkb_lifetime(const PotentialProfile& p, const trap::AtomSpec& atom) {
    TunnelResult r;
    r.y0_m = p.y0_m;
    r.status = p.status;
    r.omega_r = p.omega_r;
    r.omega_r_magnetic = p.omega_r_magnetic;
    r.height = p.height;
    r.width = p.width;
    if (p.status == ProfileStatus::trap_destroyed) {
        r.transmission = 1.0;
        r.tau_cp = 0.0;
        return r;
    }
    r.energy = p.v_min + 0.5 * C::hbar * p.omega_r;
    if (p.status == ProfileStatus::no_barrier || r.energy >= p.v_max) {
        r.transmission = 1.0;
        r.tau_cp = 2.0 * C::pi / p.omega_r;
        return r;
    }
    const int imax = int(std::lower_bound(p.y.begin(), p.y.end(), p.y_max) - p.y.begin()) - 1;
    auto turning_inner = [&](double E) {
        auto g = [&](double y) { return p.total(y) - E; };
        return bracket_root(g, p.y_max, p.y_min);
    };
    const double M = atom.mass_kg;
    const double ya = surface_crossing(p, r.energy, p.y_max, std::max(imax, 0));
    const double yb = turning_inner(r.energy);
    r.ln_T = -2.0 / C::hbar * action(p, M, r.energy, ya, yb);
    r.ln_T_vmin = -2.0 / C::hbar * action(p, M, p.v_min, p.y1, p.y2);
    r.transmission = std::exp(r.ln_T);
    r.tau_cp = 2.0 * C::pi / p.omega_r * std::exp(-r.ln_T);
    return r;
}

casimir::CPTable cp_table_for(const green::Shell& shell, const trap::AtomSpec& atom,
                              const std::vector<double>& y0s, int jobs, const ProfileOptions& popt,
                              const casimir::Options& copt) {
    if (y0s.empty()) throw std::invalid_argument("empty trap-distance list");
    const auto [mn, mx] = std::minmax_element(y0s.begin(), y0s.end());
    const double lo = std::max(popt.lo_floor_m, popt.lo_fraction * *mn) * 0.5;
    const double hi = popt.hi_fraction * *mx * 1.05;
    const int nodes = std::max(48, int(24 * std::log10(hi / lo)) + 1);
    return casimir::CPTable(shell, casimir::PolarizabilityModel::from_atom(atom), lo, hi, nodes,
                            jobs, copt);
}

std::vector<TunnelResult> tunneling_sweep(const green::Shell& shell, double current_A,
                                          double offset_T, const trap::AtomSpec& atom,
                                          const std::vector<double>& y0s, int jobs,
                                          const ProfileOptions& popt,
                                          const casimir::Options& copt) {
    for (double y : y0s)
        if (!(y > 0)) throw std::domain_error("trap distance must be positive");
    const auto table = cp_table_for(shell, atom, y0s, jobs, popt, copt);
    SurfacePotential cp = [&table](double y) { return table(y); };
    std::vector<TunnelResult> out(y0s.size());
    parallel_for(y0s.size(), jobs, [&](std::size_t i) {
        try {
            const auto cfg =
                trap::TrapConfig::from_axis_distance(current_A, y0s[i] + shell.radius_m, offset_T);
            out[i] = wkb_lifetime(build_profile(cfg, atom, shell.radius_m, cp, y0s[i], popt), atom);
        } catch (const std::exception& e) {
            out[i] = TunnelResult{};
            out[i].y0_m = y0s[i];
            out[i].ok = false;
            out[i].error = e.what();
        }
    });
    return out;
}

}  // namespace cntrap::tunneling
