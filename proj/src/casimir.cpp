#include "cntrap/casimir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"
#include "cntrap/parallel.hpp"
#include "cntrap/quadrature.hpp"

namespace cntrap::casimir {

namespace C = constants;

PolarizabilityModel PolarizabilityModel::from_atom(const trap::AtomSpec& atom) {
    atom.validate();
    return {2.0 * C::pi * C::c / atom.d2_wavelength_m, atom.d2_dipole_Cm, {}};
}

double PolarizabilityModel::static_value() const { return polarizability(*this, 0.0); }

double polarizability(const PolarizabilityModel& m, double u) {
    if (u < 0) throw std::domain_error("polarizability requires u >= 0");
    auto line = [u](double w, double d) { return 2.0 / (3.0 * C::hbar) * w * d * d / (w * w + u * u); };
    double a = line(m.omega_D2, m.dipole_Cm);
    for (const auto& [w, d] : m.extra_lines) a += line(w, d);
    return a;
}

CPResult cp_potential(const green::Shell& shell, const PolarizabilityModel& model, double y,
                      const Options& opt) {
    if (!(y > 0)) throw std::domain_error("surface distance must be positive");
    const green::CylPoint p{shell.radius_m + y, 0.0, 0.0};
    const double w = model.omega_D2;
    CPResult res;
    res.y_surface_m = y;
    res.min_integrand = 0.0;
    double min_integrand = INFINITY;
    // u = omega_D2 tan(theta) maps [0, inf) onto [0, pi/2).
    auto integrand = [&](double th) {
        const double u = w * std::tan(th);
        if (u <= 0.0) return 0.0;
        const double jac = w / (std::cos(th) * std::cos(th));
        const auto g = green::green_scattering(p, p, green::Frequency::imag(u), shell,
                                               green::Flavor::electric, opt.green);
        const double tr = trace(g.tensor).real();
        const double v = u * u * polarizability(model, u) * tr * jac;
        min_integrand = std::min(min_integrand, -v);
        return v;
    };
    const double pref = C::hbar * C::mu0 / (2.0 * C::pi);
    const double th_a = std::atan(10.0 * C::c / y / w);
    const double th_b = std::atan(40.0 * C::c / y / w);
    quad::Options q;
    q.rel_tol = opt.rel_tol;
    q.initial_panels = 4;
    const auto low = quad::integrate<double>(integrand, 0.0, th_a, q);
    q.abs_tol = opt.rel_tol * std::abs(low.value);
    const auto mid = quad::integrate<double>(integrand, th_a, th_b, q);
    q.initial_panels = 1;
    const auto tail = quad::integrate<double>(integrand, th_b, 0.5 * C::pi, q);
    res.U = pref * (low.value + mid.value + tail.value);
    res.tail_estimate = pref * tail.value;
    res.low_u_fraction = res.U != 0.0 ? pref * low.value / res.U : 1.0;
    res.nodes = low.evaluations + mid.evaluations + tail.evaluations;
    res.min_integrand = min_integrand;
    if (res.U != 0.0 && std::abs(res.tail_estimate) > 1e-6 * std::abs(res.U))
        throw NumericError("Casimir-Polder tail estimate exceeds tolerance", res.U);
    return res;
}

CPTable::CPTable(const green::Shell& shell, PolarizabilityModel model, double y_lo, double y_hi,
                 int nodes, int jobs, Options opt)
    : shell_(shell), model_(std::move(model)), opt_(opt) {
    if (!(y_lo > 0) || !(y_hi > y_lo) || nodes < 4)
        throw std::invalid_argument("invalid Casimir-Polder table range");
    log_lo_ = std::log(y_lo);
    log_step_ = (std::log(y_hi) - log_lo_) / (nodes - 1);
    y_.resize(nodes);
    u_.resize(nodes);
    for (int i = 0; i < nodes; ++i) y_[i] = std::exp(log_lo_ + i * log_step_);
    y_.front() = y_lo;
    y_.back() = y_hi;
    parallel_for(y_.size(), jobs,
                 [&](std::size_t i) { u_[i] = cp_potential(shell_, model_, y_[i], opt_).U; });
    zero_ = std::all_of(u_.begin(), u_.end(), [](double v) { return v == 0.0; });
    if (zero_) return;
    std::vector<double> logs(nodes);
    for (int i = 0; i < nodes; ++i) {
        if (!(u_[i] < 0.0)) throw NumericError("Casimir-Polder potential not attractive", u_[i]);
        logs[i] = std::log(-u_[i]);
    }
    auto sp = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        logs.begin(), logs.end(), log_lo_, log_step_);
    spline_ = [sp](double x) { return -std::exp((*sp)(x)); };
}

double CPTable::operator()(double y) const {
    if (zero_) return 0.0;
    const double ly = std::log(y);
    const double hi = log_lo_ + log_step_ * (y_.size() - 1);
    if (ly < log_lo_ - 1e-12 || ly > hi + 1e-12) return cp_potential(shell_, model_, y, opt_).U;
    return spline_(std::clamp(ly, log_lo_, hi));
}

}  // namespace cntrap::casimir
