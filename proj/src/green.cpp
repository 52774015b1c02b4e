#include "cntrap/green.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"
#include "cntrap/material.hpp"
#include "cntrap/quadrature.hpp"
#include "cntrap/specfun.hpp"

namespace cntrap::green {

namespace {

using constants::pi;
namespace C = constants;
const cdouble I(0.0, 1.0);

cdouble ipow(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return 1.0;
        case 1: return I;
        case 2: return -1.0;
        default: return -I;
    }
}

// Z_n(eta x) and dZ/d(argument) as mantissas sharing exp(log_scale).
struct Radial {
    cdouble z, dz;
    double log_scale;
};

enum class Kind { regular, outgoing };

// eta is real positive or purely imaginary with positive imaginary part.
Radial radial(Kind kind, int n, cdouble eta, double x) {
    if (eta.imag() == 0.0) {
        const auto s = specfun::bessel_jy_scaled(n, eta.real() * x);
        if (kind == Kind::regular) return {s.j, s.dj, -s.log_scale};
        const double g = std::exp(-2.0 * s.log_scale);
        return {cdouble(s.j * g, s.y), cdouble(s.dj * g, s.dy), s.log_scale};
    }
    const double y = eta.imag() * x;
    const auto s = specfun::modified_i_k_scaled(n, y);
    if (kind == Kind::regular) {
        // J_n(iy) = i^n I_n(y), J_n'(iy) = i^(n-1) I_n'(y)
        return {ipow(n) * s.i, ipow(n - 1) * s.di, y - s.log_scale};
    }
    // H_n(iy) = (2/pi) i^-(n+1) K_n(y), H_n'(iy) = (2/pi) i^-(n+2) K_n'(y)
    return {(2.0 / pi) * ipow(-(n + 1)) * s.k, (2.0 / pi) * ipow(-(n + 2)) * s.dk, s.log_scale - y};
}

using Vec3 = std::array<cdouble, 3>;

struct Wave {
    Vec3 M, N;
};

// M and N at a point for axial wavenumber h and given parity.
Wave wave(int n, Parity par, double h, cdouble eta, cdouble k, const CylPoint& p, const Radial& z) {
    const double c = std::cos(n * p.phi), s = std::sin(n * p.phi);
    const double A = par == Parity::even ? c : s;
    const double Ap = par == Parity::even ? -n * s : n * c;
    const cdouble ph = std::exp(I * (h * p.z));
    Wave w;
    w.M = {z.z * Ap / p.r * ph, -eta * z.dz * A * ph, 0.0};
    w.N = {I * h * eta * z.dz * A / k * ph, I * h / p.r * z.z * Ap / k * ph, eta * eta * z.z * A / k * ph};
    return w;
}

using Flat = std::array<double, 18>;

void accumulate(Flat& out, cdouble pref, const Vec3& a, const Vec3& b) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const cdouble v = pref * a[i] * b[j];
            out[2 * (3 * i + j)] += v.real();
            out[2 * (3 * i + j) + 1] += v.imag();
        }
}

Complex3x3 unflatten(const Flat& f) {
    Complex3x3 t = Complex3x3::zero(Basis::cylindrical);
    for (int i = 0; i < 9; ++i) t.m[i] = cdouble(f[2 * i], f[2 * i + 1]);
    return t;
}

// Sum over parities and over +h, -h of weighted dyads between two points.
void add_pair(Flat& out, cdouble pref, int n, double h, cdouble eta, cdouble k, const CylPoint& a,
              const Radial& ra, const CylPoint& b, const Radial& rb, bool use_m, bool use_n) {
    for (double sgn : {1.0, -1.0}) {
        for (Parity par : {Parity::even, Parity::odd}) {
            if (n == 0 && par == Parity::odd) continue;
            const Wave wa = wave(n, par, sgn * h, eta, k, a, ra);
            const Wave wb = wave(n, par, -sgn * h, eta, k, b, rb);
            if (use_m) accumulate(out, pref, wa.M, wb.M);
            if (use_n) accumulate(out, pref, wa.N, wb.N);
        }
    }
}

// Axial-wavenumber parametrizations. Each maps t to (h, eta, dh/dt).
struct Node {
    double h;
    cdouble eta;
    double jac;
};

struct Segment {
    double t0, t1;
    int kind;  // 0 propagating, 1 evanescent (real omega), 2 imaginary axis
};

Node node_at(const Segment& s, double t, double kr) {
    switch (s.kind) {
        case 0: return {kr * std::sin(t), cdouble(kr * std::cos(t), 0.0), kr * std::cos(t)};
        case 1: {
            const double kap = kr * std::sinh(t);
            return {kr * std::cosh(t), cdouble(0.0, kap), kap};
        }
        default: {
            const double kap = kr * std::cosh(t);
            return {kr * std::sinh(t), cdouble(0.0, kap), kap};
        }
    }
}

// Segments covering h in [0, inf) until exp(-kappa * decay_length) is negligible.
std::vector<Segment> segments(const Frequency& f, double decay_length, bool propagating_only) {
    const double kr = f.value / C::c;
    const double kappa_max = 90.0 / decay_length;
    std::vector<Segment> out;
    if (!f.imaginary) {
        out.push_back({0.0, 0.5 * pi, 0});
        if (!propagating_only && kappa_max > 0.0) out.push_back({0.0, std::asinh(kappa_max / kr), 1});
    } else if (kappa_max > kr) {
        out.push_back({0.0, std::acosh(kappa_max / kr), 2});
    }
    return out;
}

// Integrates one order over all segments with shared absolute floor.
template <class F>
Flat integrate_order(F&& integrand, const std::vector<Segment>& segs, double kr, const Options& opt,
                     double abs_floor, int& evals) {
    Flat total{};
    for (const auto& s : segs) {
        quad::Options q;
        q.rel_tol = opt.rel_tol;
        q.abs_tol = abs_floor;
        q.max_panels = opt.max_panels;
        q.initial_panels = s.kind == 0 ? 2 : 8;
        auto f = [&](double t) {
            const Node nd = node_at(s, t, kr);
            Flat v = integrand(nd);
            for (double& x : v) x *= nd.jac;
            return v;
        };
        auto r = quad::integrate<Flat>(f, s.t0, s.t1, q);
        evals += r.evaluations;
        quad::detail::axpy(total, 1.0, r.value);
    }
    return total;
}

template <class OrderFn>
Complex3x3 sum_orders(OrderFn&& order, const Options& opt, Diagnostics& diag) {
    Flat sum{};
    double prev = 0.0;
    for (int n = 0; n <= opt.n_max; ++n) {
        const double floor = opt.rel_tol * quad::detail::norm_of(sum);
        Flat term = order(n, floor);
        quad::detail::axpy(sum, 1.0, term);
        const double tn = quad::detail::norm_of(term);
        const double total = quad::detail::norm_of(sum);
        diag.orders = n + 1;
        diag.last_order_fraction = total > 0.0 ? tn / total : 0.0;
        if (n >= 2 && tn + prev <= opt.n_tol * total) return unflatten(sum);
        if (n >= 2 && total == 0.0) return unflatten(sum);
        prev = tn;
    }
    std::ostringstream os;
    os << "order sum not converged at n_max=" << opt.n_max << " (last order fraction "
       << diag.last_order_fraction << ")";
    throw NumericError(os.str(), quad::detail::norm_of(sum));
}

void check_outside(const CylPoint& p, double R) {
    if (!(p.r > R)) throw std::domain_error("Green tensor points must lie outside the shell");
}

cdouble wavenumber(const Frequency& f) { return f.omega() / C::c; }

// Cartesian to local cylindrical components.
Complex3x3 to_cylindrical(const Complex3x3& g, double phi, double phip) {
    const double B[3][3] = {{std::cos(phi), std::sin(phi), 0.0}, {-std::sin(phi), std::cos(phi), 0.0},
                            {0.0, 0.0, 1.0}};
    const double Bp[3][3] = {{std::cos(phip), std::sin(phip), 0.0},
                             {-std::sin(phip), std::cos(phip), 0.0},
                             {0.0, 0.0, 1.0}};
    Complex3x3 out = Complex3x3::zero(Basis::cylindrical);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cdouble v = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) v += B[i][a] * g(a, b) * Bp[j][b];
            out(i, j) = v;
        }
    return out;
}

// 4x4 complex solve with row/column equilibration and partial pivoting.
// Returns the 1-norm condition number of the equilibrated matrix.
double solve4(std::array<std::array<cdouble, 4>, 4> A, std::array<cdouble, 4>& b) {
    std::array<double, 4> col{};
    for (int i = 0; i < 4; ++i) {
        double m = 0.0;
        for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(A[i][j]));
        if (m == 0.0) throw NumericError("boundary system has an empty row");
        for (int j = 0; j < 4; ++j) A[i][j] /= m;
        b[i] /= m;
    }
    for (int j = 0; j < 4; ++j) {
        double m = 0.0;
        for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(A[i][j]));
        col[j] = m == 0.0 ? 1.0 : m;
        for (int i = 0; i < 4; ++i) A[i][j] /= col[j];
    }
    auto E = A;
    // inverse by Gauss-Jordan for the condition estimate and the solution
    std::array<std::array<cdouble, 4>, 4> inv{};
    for (int i = 0; i < 4; ++i) inv[i][i] = 1.0;
    for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int i = c + 1; i < 4; ++i)
            if (std::abs(E[i][c]) > std::abs(E[piv][c])) piv = i;
        if (std::abs(E[piv][c]) < 1e-300) {
            throw NumericError("singular boundary system (condition number infinite)");
        }
        std::swap(E[piv], E[c]);
        std::swap(inv[piv], inv[c]);
        const cdouble d = E[c][c];
        for (int j = 0; j < 4; ++j) {
            E[c][j] /= d;
            inv[c][j] /= d;
        }
        for (int i = 0; i < 4; ++i) {
            if (i == c) continue;
            const cdouble f = E[i][c];
            for (int j = 0; j < 4; ++j) {
                E[i][j] -= f * E[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    auto norm1 = [](const std::array<std::array<cdouble, 4>, 4>& M) {
        double m = 0.0;
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int i = 0; i < 4; ++i) s += std::abs(M[i][j]);
            m = std::max(m, s);
        }
        return m;
    };
    const double cond = norm1(A) * norm1(inv);
    std::array<cdouble, 4> x{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) x[i] += inv[i][j] * b[j];
    for (int j = 0; j < 4; ++j) b[j] = x[j] / col[j];
    if (!(cond < 1e14)) {
        std::ostringstream os;
        os << "ill-conditioned boundary system, condition number " << cond;
        throw NumericError(os.str(), cond);
    }
    return cond;
}

cdouble eta_real_axis(double k, double h) {
    const double e2 = k * k - h * h;
    return e2 >= 0.0 ? cdouble(std::sqrt(e2), 0.0) : cdouble(0.0, std::sqrt(-e2));
}

}  // namespace

Shell Shell::from_conductivity(std::shared_ptr<const material::Conductivity> c) {
    Shell s;
    s.radius_m = c->spec().radius_m;
    s.sheet_real = [c](double omega) { return c->sigma_axial(omega).sigma_sheet; };
    s.sheet_imag = [c](double u) { return c->sheet_conductance_imag(u); };
    return s;
}

Shell Shell::constant(double radius_m, cdouble sigma_real, double sigma_imag) {
    Shell s;
    s.radius_m = radius_m;
    s.sheet_real = [sigma_real](double) { return sigma_real; };
    s.sheet_imag = [sigma_imag](double) { return sigma_imag; };
    return s;
}

cdouble Shell::sheet(const Frequency& f) const {
    return f.imaginary ? cdouble(sheet_imag(f.value), 0.0) : sheet_real(f.value);
}

ReflectionCoefficients solve_boundary_system(int n, double h, double omega, double R,
                                             cdouble sigma, Parity parity) {
    if (!(omega > 0.0)) throw std::domain_error("boundary system requires real omega > 0");
    const double k = omega / C::c;
    const cdouble eta = eta_real_axis(k, h);
    if (std::abs(eta) == 0.0) throw NumericError("boundary system singular at eta = 0");
    const Radial J = radial(Kind::regular, n, eta, R);
    const Radial H = radial(Kind::outgoing, n, eta, R);
    // Rows divided by the regular-function scale; unknowns multiplying H come
    // out scaled by exp(-2 sJ).
    const cdouble j = J.z, dj = eta * J.dz, hh = H.z, dh = eta * H.dz;
    const double s = parity == Parity::even ? 1.0 : -1.0;
    const cdouble e2 = eta * eta;
    const cdouble t = I * h * double(n) / R;
    const cdouble jump = I * omega * C::mu0 * sigma * e2 / k * j;

    std::array<std::array<cdouble, 4>, 4> AH{{
        {0.0, -e2 / k * hh, 0.0, e2 / k * j},
        {-dh, s * t / k * hh, dj, -s * t / k * j},
        {-e2 * hh, 0.0, e2 * j, 0.0},
        {-s * t * hh, -k * dh, s * t * j, k * dj - jump},
    }};

    std::array<std::array<cdouble, 4>, 4> AV{{
        {-e2 / k * hh, 0.0, e2 / k * j, 0.0},
        {-s * t / k * hh, -dh, s * t / k * j, dj},
        {0.0, -e2 * hh, 0.0, e2 * j},
        {-k * dh, s * t * hh, k * dj - jump, -s * t * j},
    }};

    // Unknowns are the departure from pure pass-through (third unknown = 1,
    // rest 0). Moving that column over analytically leaves only the conductance
    // jump on the right; forming the difference in floating point would round
    // the jump away for weak or electrically thin shells.
    std::array<cdouble, 4> bH{0.0, 0.0, 0.0, 0.0};
    std::array<cdouble, 4> bV{0.0, 0.0, 0.0, jump};

    ReflectionCoefficients out;
    out.n = n;
    out.h = h;
    out.omega = omega;
    out.condition_H = solve4(AH, bH);
    out.condition_V = solve4(AV, bV);
    bH[2] += 1.0;
    bV[2] += 1.0;
    const double scale = std::exp(2.0 * J.log_scale);
    out.C1H = bH[0] * scale;
    out.C2H = bH[1] * scale;
    out.C3H = bH[2];
    out.C4H = bH[3];
    out.C1V = bV[0] * scale;
    out.C2V = bV[1] * scale;
    out.C3V = bV[2];
    out.C4V = bV[3];
    return out;
}

cdouble c1v_closed_form(int n, double h, const Frequency& f, double R, cdouble sigma) {
    if (sigma == cdouble(0.0)) return 0.0;
    const cdouble omega = f.omega();
    const cdouble k = omega / C::c;
    const cdouble eta =
        f.imaginary ? cdouble(0.0, std::hypot(f.value / C::c, h)) : eta_real_axis(k.real(), h);
    const Radial J = radial(Kind::regular, n, eta, R);
    const Radial H = radial(Kind::outgoing, n, eta, R);
    const cdouble a = C::mu0 * omega * R * sigma;
    const cdouble e2 = eta * eta;
    return -pi * a * e2 * J.z * J.z / (2.0 * k * k + pi * a * e2 * J.z * H.z) *
           std::exp(2.0 * J.log_scale);
}

GreenEval green_scattering(const CylPoint& r, const CylPoint& rp, const Frequency& f,
                           const Shell& shell, Flavor flavor, const Options& opt) {
    const double R = shell.radius_m;
    check_outside(r, R);
    check_outside(rp, R);
    if (!(f.value > 0.0)) throw std::domain_error("frequency must be positive");
    GreenEval out{r, rp, f, Complex3x3::zero(Basis::cylindrical), Part::scattering, flavor, false, {}};
    const cdouble sigma = shell.sheet(f);
    if (sigma == cdouble(0.0)) return out;

    const cdouble omega = f.omega();
    const cdouble k = wavenumber(f);
    const double kr = f.value / C::c;
    const cdouble a = C::mu0 * omega * R * sigma;
    const auto segs = segments(f, (r.r - R) + (rp.r - R), false);
    const bool same_radius = r.r == rp.r;
    double min_ratio = 1.0;

    auto order = [&](int n, double floor) {
        const double deg = n == 0 ? 1.0 : 2.0;
        auto integrand = [&](const Node& nd) {
            Flat v{};
            const Radial J = radial(Kind::regular, n, nd.eta, R);
            const Radial HR = radial(Kind::outgoing, n, nd.eta, R);
            const Radial Hr = radial(Kind::outgoing, n, nd.eta, r.r);
            const Radial Hp = same_radius ? Hr : radial(Kind::outgoing, n, nd.eta, rp.r);
            const cdouble e2 = nd.eta * nd.eta;
            const cdouble bulk = pi * a * e2 * J.z * HR.z;
            const cdouble den = 2.0 * k * k + bulk;
            const double ratio = std::abs(den) / (std::abs(2.0 * k * k) + std::abs(bulk));
            min_ratio = std::min(min_ratio, ratio);
            const double lg = 2.0 * J.log_scale + Hr.log_scale + Hp.log_scale;
            if (lg < -700.0) return v;
            const cdouble c1v = -pi * a * e2 * J.z * J.z / den;
            cdouble pref = I / (8.0 * pi) * deg / e2 * c1v * std::exp(lg);
            if (flavor == Flavor::curlcurl) {
                pref *= k * k;
                add_pair(v, pref, n, nd.h, nd.eta, k, r, Hr, rp, Hp, true, false);
            } else {
                add_pair(v, pref, n, nd.h, nd.eta, k, r, Hr, rp, Hp, false, true);
            }
            return v;
        };
        return integrate_order(integrand, segs, kr, opt, floor, out.diagnostics.evaluations);
    };
    out.tensor = sum_orders(order, opt, out.diagnostics);
    out.diagnostics.min_denominator_ratio = min_ratio;
    out.diagnostics.resonance_flag = min_ratio < 1e-6;
    return out;
}

GreenEval green_vacuum(const CylPoint& r, const CylPoint& rp, const Frequency& f, Flavor flavor,
                       VacuumMode mode, bool imaginary_part_only, const Options& opt) {
    if (!(f.value > 0.0)) throw std::domain_error("frequency must be positive");
    GreenEval out{r, rp, f, Complex3x3::zero(Basis::cylindrical), Part::vacuum, flavor,
                  imaginary_part_only, {}};
    const cdouble k = wavenumber(f);
    const double kr = f.value / C::c;
    const double x1 = r.r * std::cos(r.phi), y1 = r.r * std::sin(r.phi);
    const double x2 = rp.r * std::cos(rp.phi), y2 = rp.r * std::sin(rp.phi);
    const double d = std::sqrt((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2) + (r.z - rp.z) * (r.z - rp.z));
    const bool coincident = d == 0.0;
    if (coincident && !imaginary_part_only)
        throw std::domain_error("vacuum tensor real part diverges at coincident points");
    const cdouble flavor_factor = flavor == Flavor::curlcurl ? k * k : cdouble(1.0);

    if (coincident) {
        // Im G0(r, r) = omega/(6 pi c) on the real axis, zero on the imaginary axis.
        if (!f.imaginary) {
            const double v = kr / (6.0 * pi);
            if (mode == VacuumMode::closed_form) {
                out.tensor = Complex3x3::identity(Basis::cylindrical);
                out.tensor *= I * v * flavor_factor;
                return out;
            }
        } else {
            return out;
        }
        // Expansion path: only propagating waves carry the imaginary part,
        // with regular functions at both points.
        const auto segs = segments(f, 1.0, true);
        auto order = [&](int n, double floor) {
            const double deg = n == 0 ? 1.0 : 2.0;
            auto integrand = [&](const Node& nd) {
                Flat v{};
                const Radial J = radial(Kind::regular, n, nd.eta, r.r);
                const cdouble pref = deg / (8.0 * pi) / (nd.eta * nd.eta) * std::exp(2.0 * J.log_scale);
                add_pair(v, pref, n, nd.h, nd.eta, k, r, J, rp, J, true, true);
                return v;
            };
            return integrate_order(integrand, segs, kr, opt, floor, out.diagnostics.evaluations);
        };
        Complex3x3 re = sum_orders(order, opt, out.diagnostics);
        for (auto& v : re.m) v = I * v.real();
        out.tensor = flavor_factor * re;
        return out;
    }

    if (mode == VacuumMode::closed_form) {
        const double R[3] = {(x1 - x2) / d, (y1 - y2) / d, (r.z - rp.z) / d};
        const cdouble kd = k * d;
        const cdouble g = std::exp(I * kd) / (4.0 * pi * d);
        const cdouble aI = 1.0 + (I * kd - 1.0) / (kd * kd);
        const cdouble aR = (3.0 - 3.0 * I * kd - kd * kd) / (kd * kd);
        Complex3x3 cart = Complex3x3::zero(Basis::cartesian);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cart(i, j) = g * ((i == j ? aI : 0.0) + aR * R[i] * R[j]);
        out.tensor = flavor_factor * to_cylindrical(cart, r.phi, rp.phi);
        return out;
    }

    // Cylindrical expansion: outgoing functions at the larger radius.
    if (r.r == rp.r)
        throw std::domain_error("cylindrical expansion requires distinct radial coordinates");
    const bool field_outer = r.r > rp.r;
    const double r_in = std::min(r.r, rp.r), r_out = std::max(r.r, rp.r);
    const auto segs = segments(f, r_out - r_in, false);
    auto order = [&](int n, double floor) {
        const double deg = n == 0 ? 1.0 : 2.0;
        auto integrand = [&](const Node& nd) {
            Flat v{};
            const Radial Zo = radial(Kind::outgoing, n, nd.eta, r_out);
            const Radial Zi = radial(Kind::regular, n, nd.eta, r_in);
            const double lg = Zo.log_scale + Zi.log_scale;
            if (lg < -700.0) return v;
            const cdouble pref = I / (8.0 * pi) * deg / (nd.eta * nd.eta) * std::exp(lg);
            const Radial& za = field_outer ? Zo : Zi;
            const Radial& zb = field_outer ? Zi : Zo;
            add_pair(v, pref, n, nd.h, nd.eta, k, r, za, rp, zb, true, true);
            return v;
        };
        return integrate_order(integrand, segs, kr, opt, floor, out.diagnostics.evaluations);
    };
    out.tensor = flavor_factor * sum_orders(order, opt, out.diagnostics);
    return out;
}

GreenEval green_total(const CylPoint& r, const CylPoint& rp, const Frequency& f, const Shell& shell,
                      Flavor flavor, const Options& opt) {
    GreenEval s = green_scattering(r, rp, f, shell, flavor, opt);
    const bool coincident = r.r == rp.r && r.phi == rp.phi && r.z == rp.z;
    GreenEval v = green_vacuum(r, rp, f, flavor, VacuumMode::closed_form, coincident, opt);
    s.tensor += v.tensor;
    if (coincident) {
        // Only the imaginary part of the vacuum term is defined here.
        s.imaginary_part_only = true;
        for (auto& x : s.tensor.m) x = cdouble(0.0, x.imag());
    }
    s.part = Part::total;
    return s;
}

}  // namespace cntrap::green
