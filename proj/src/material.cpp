#include "cntrap/material.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"
#include "cntrap/quadrature.hpp"

namespace cntrap::material {

namespace {

using constants::pi;
namespace C = constants;

// Channel dispersion pieces shared by the band energy and the matrix element.
struct ChannelPhase {
    double A, B, dA, dB;  // phases and their p-derivatives
};

ChannelPhase phases(const NanotubeSpec& s, int N, double p) {
    const double k = (s.a + 2.0 * s.b) / (2.0 * s.a);
    return {2.0 * pi * N / s.a - k * p * s.ell_m, 0.5 * p * s.ell_m, -k * s.ell_m, 0.5 * s.ell_m};
}

void check_channel(const NanotubeSpec& s, int N, double p) {
    if (N < 0 || N >= s.a) throw std::domain_error("band index N out of range [0, a)");
    const double pmax = pi / s.ell_m;
    if (!(std::abs(p) <= pmax * (1.0 + 1e-12)))
        throw std::domain_error("wavenumber p outside the first Brillouin zone");
}

double beta(const NanotubeSpec& s) { return 1.0 / (C::kB * s.temperature_K); }

// (f(E+) - f(E-)) / (E+ - E-) with E- = -E+.
double occupation_ratio(const NanotubeSpec& s, double Ep) {
    const double b = beta(s);
    if (Ep * b < 1e-6) {
        return 0.5 * (fermi_derivative(Ep, s) + fermi_derivative(-Ep, s));
    }
    return (fermi(Ep, s) - fermi(-Ep, s)) / (2.0 * Ep);
}

// Panel boundaries for the p-integral of channel N: a uniform base mesh plus
// refinement around points where E_+ meets any of the target energies.
std::vector<double> p_breakpoints(const NanotubeSpec& s, int N, const std::vector<double>& targets,
                                  double width_energy) {
    const double pmax = pi / s.ell_m;
    std::vector<double> pts;
    const int base = 64;
    for (int i = 0; i <= base; ++i) pts.push_back(-pmax + 2.0 * pmax * i / base);
    const int scan = 4096;
    const double dp = 2.0 * pmax / scan;
    const double slope = s.t0_J * s.ell_m;  // energy per unit p near a crossing
    for (double target : targets) {
        auto dist = [&](double p) { return std::abs(band_energy(s, N, p).plus - target); };
        double prev2 = dist(-pmax), prev1 = dist(-pmax + dp);
        for (int i = 2; i <= scan; ++i) {
            const double p = -pmax + i * dp;
            const double cur = dist(p);
            if (prev1 <= prev2 && prev1 <= cur && prev1 < 50.0 * width_energy + 4.0 * slope * dp) {
                // golden-section refinement of the local minimum
                double lo = p - 2.0 * dp, hi = p;
                const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                for (int it = 0; it < 80; ++it) {
                    const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
                    if (dist(m1) < dist(m2)) hi = m2;
                    else lo = m1;
                }
                const double pc = 0.5 * (lo + hi);
                pts.push_back(pc);
                const double w = width_energy / slope;
                for (double f : {0.25, 1.0, 4.0, 16.0, 64.0, 256.0}) {
                    pts.push_back(pc - f * w);
                    pts.push_back(pc + f * w);
                }
            }
            prev2 = prev1;
            prev1 = cur;
        }
    }
    for (auto& p : pts) p = std::clamp(p, -pmax, pmax);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double x, double y) { return std::abs(x - y) < 1e-12 * pmax; }),
              pts.end());
    return pts;
}

template <class V, class F>
V integrate_channel(const std::vector<double>& pts, F&& f, double rel_tol, int N) {
    V total{};
    quad::Options opt;
    opt.rel_tol = rel_tol;
    // Absolute floor relative to a coarse magnitude estimate keeps empty panels cheap.
    V coarse{};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        quad::Options c;
        c.rel_tol = 1e-2;
        c.max_panels = 8;
        try {
            auto r = quad::integrate<V>(f, pts[i], pts[i + 1], c);
            quad::detail::axpy(coarse, 1.0, r.value);
        } catch (const NumericError&) {
        }
    }
    opt.abs_tol = rel_tol * quad::detail::norm_of(coarse) / static_cast<double>(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        try {
            auto r = quad::integrate<V>(f, pts[i], pts[i + 1], opt);
            quad::detail::axpy(total, 1.0, r.value);
        } catch (const NumericError& e) {
            std::ostringstream os;
            os << "band integral failed in channel N=" << N << ": " << e.what();
            throw NumericError(os.str(), e.partial());
        }
    }
    return total;
}

}  // namespace

void NanotubeSpec::validate() const {
    if (a <= 0 || b < 0) throw std::invalid_argument("winding indices must satisfy a > 0, b >= 0");
    if (!(radius_m > 0) || !(ell_m > 0) || !(t0_J > 0) || !(hbar_over_tau_J > 0))
        throw std::invalid_argument("radius, ell, t0 and hbar/tau must be positive");
    if (!(temperature_K > 0)) throw std::invalid_argument("electronic temperature must be positive");
    if (!(sheet_length_m > 0)) throw std::invalid_argument("sheet conversion length must be positive");
    if (mode == ConductivityMode::calibrated &&
        (!(calibration_sigma_S_per_m > 0) || !(calibration_omega_rad_s > 0)))
        throw std::invalid_argument("calibration target must be positive");
}

double NanotubeSpec::tau_s() const { return C::hbar / hbar_over_tau_J; }

bool metallic(int a, int b) { return (2 * a + b) % 3 == 0; }

double carbon_density(const NanotubeSpec& s) {
    return pi * std::sqrt(3.0) / (2.0 * s.radius_m * s.ell_m * s.ell_m);
}

double tubule_density(const NanotubeSpec& s) { return carbon_density(s) / (2.0 * s.a); }

BandPair band_energy(const NanotubeSpec& s, int N, double p) {
    check_channel(s, N, p);
    const ChannelPhase ph = phases(s, N, p);
    const double cb = std::cos(ph.B);
    const double arg = 1.0 + 4.0 * std::cos(ph.A) * cb + 4.0 * cb * cb;
    const double e = s.t0_J * std::sqrt(std::max(arg, 0.0));
    return {e, -e};
}

double fermi(double E, const NanotubeSpec& s) {
    return 1.0 / (std::exp(beta(s) * (E - s.mu_chem_J)) + 1.0);
}

double fermi_derivative(double E, const NanotubeSpec& s) {
    const double b = beta(s);
    const double ch = std::cosh(0.5 * b * (E - s.mu_chem_J));
    return -b / (4.0 * ch * ch);
}

MomentumElement tight_binding_momentum_element(const NanotubeSpec& spec) {
    return [spec](int N, double p) -> cdouble {
        const ChannelPhase ph = phases(spec, N, p);
        const cdouble i(0.0, 1.0);
        const cdouble e1 = std::exp(i * (ph.A + ph.B)), e2 = std::exp(i * (ph.A - ph.B));
        const cdouble g = 1.0 + e1 + e2;
        const cdouble dg = i * (ph.dA + ph.dB) * e1 + i * (ph.dA - ph.dB) * e2;
        const double ag = std::abs(g);
        const cdouble phase = ag > 0.0 ? std::conj(g) / ag : cdouble(1.0);
        const cdouble m = dg * phase * spec.t0_J;  // real part dE+/dp, imaginary part interband
        const double unit = C::m_e * spec.ell_m / (C::hbar * C::hbar);
        return {unit * m.imag(), unit * m.real()};
    };
}

cdouble eps_interband(const NanotubeSpec& s, cdouble omega, const MomentumElement& K0,
                      double rel_tol) {
    s.validate();
    const double pref = std::pow(C::e * C::hbar * C::hbar / C::m_e, 2) * 4.0 * carbon_density(s) /
                        (s.a * s.ell_m) / C::eps0;
    const cdouble hw = C::hbar * omega;
    const cdouble damp = cdouble(0.0, 1.0) * C::hbar * hw / s.tau_s();
    std::vector<double> targets{std::abs(s.mu_chem_J)};
    if (std::abs(omega.imag()) == 0.0) targets.push_back(0.5 * std::abs(hw));
    const double width = std::max(C::kB * s.temperature_K, s.hbar_over_tau_J);
    cdouble sum = 0.0;
    for (int N = 0; N < s.a; ++N) {
        auto pts = p_breakpoints(s, N, targets, width);
        auto f = [&](double p) -> std::array<double, 2> {
            const double Ep = band_energy(s, N, p).plus;
            const double re = K0(N, p).real();
            const double dE = 2.0 * Ep;
            const cdouble v = occupation_ratio(s, Ep) * re * re / (hw * hw + damp - dE * dE);
            return {v.real(), v.imag()};
        };
        auto r = integrate_channel<std::array<double, 2>>(pts, f, rel_tol, N);
        sum += cdouble(r[0], r[1]);
    }
    return 1.0 + pref * sum;
}

double plasma_frequency(const NanotubeSpec& s, const MomentumElement& K0) {
    s.validate();
    if (!metallic(s.a, s.b))
        throw NumericError("plasma frequency requested for a non-metallic tube");
    const double pref =
        std::pow(C::e * C::hbar / C::m_e, 2) * 2.0 * carbon_density(s) / (s.a * s.ell_m) / C::eps0;
    const double width = C::kB * s.temperature_K;
    double sum = 0.0;
    for (int N = 0; N < s.a; ++N) {
        auto pts = p_breakpoints(s, N, {std::abs(s.mu_chem_J)}, width);
        auto f = [&](double p) {
            const double Ep = band_energy(s, N, p).plus;
            const double im = K0(N, p).imag();
            return im * im * (fermi_derivative(Ep, s) + fermi_derivative(-Ep, s));
        };
        sum += integrate_channel<double>(pts, f, 1e-8, N);
    }
    const double w2 = -pref * sum;
    if (!(w2 > 0.0)) throw NumericError("non-positive plasma frequency squared", w2);
    return std::sqrt(w2);
}

cdouble eps_drude(const NanotubeSpec& s, cdouble omega, double omega_pl) {
    const cdouble hw = C::hbar * omega;
    const double hp = C::hbar * omega_pl;
    return -hp * hp / (hw * (hw + cdouble(0.0, s.hbar_over_tau_J)));
}

double calibrated_plasma_frequency(const NanotubeSpec& s) {
    const double tau = s.tau_s();
    const double wt = s.calibration_omega_rad_s * tau;
    return std::sqrt(s.calibration_sigma_S_per_m * (1.0 + wt * wt) / (C::eps0 * tau));
}

Conductivity::Conductivity(NanotubeSpec spec, MomentumElement K0)
    : spec_(spec), k0_(std::move(K0)) {
    spec_.validate();
    if (!k0_) k0_ = tight_binding_momentum_element(spec_);
}

double Conductivity::plasma_frequency() const {
    std::call_once(wpl_once_, [this] {
        wpl_ = spec_.mode == ConductivityMode::calibrated ? calibrated_plasma_frequency(spec_)
                                                          : material::plasma_frequency(spec_, k0_);
    });
    return wpl_;
}

SurfaceConductivity Conductivity::sigma_axial(double omega) const {
    if (!(omega > 0.0)) throw std::domain_error("sigma_axial requires omega > 0");
    SurfaceConductivity out;
    out.omega = omega;
    cdouble eps = eps_drude(spec_, omega, plasma_frequency());
    eps += spec_.mode == ConductivityMode::calibrated ? cdouble(1.0)
                                                      : eps_interband(spec_, omega, k0_);
    out.eps_r = eps;
    out.sigma_bulk_equiv = cdouble(0.0, -1.0) * omega * C::eps0 * (eps - 1.0);
    out.sigma_sheet = spec_.sheet_length_m * out.sigma_bulk_equiv;
    return out;
}

double Conductivity::interband_imag_axis(double u) const {
    if (spec_.mode == ConductivityMode::calibrated) return 0.0;
    static constexpr double lo = 8.0, hi = 20.0;  // log10 range of the table
    static constexpr int n = 193;
    std::call_once(table_once_, [this] {
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i) {
            const double uu = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
            vals[i] = (eps_interband(spec_, cdouble(0.0, uu), k0_) - 1.0).real();
        }
        auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            vals.begin(), vals.end(), lo, (hi - lo) / (n - 1));
        table_front_ = vals.front();
        table_back_ = vals.back();
        table_ = [spline](double x) { return (*spline)(x); };
    });
    const double lu = std::log10(u);
    if (lu <= lo) return table_front_;
    if (lu >= hi) return table_back_ * std::pow(10.0, 2.0 * (hi - lu));
    return table_(lu);
}

double Conductivity::eps_imag_axis(double u) const {
    if (!(u > 0.0)) throw std::domain_error("imaginary-axis permittivity requires u > 0");
    const double wp = plasma_frequency();
    const double tau = spec_.tau_s();
    return 1.0 + wp * wp * tau / (u * (u * tau + 1.0)) + interband_imag_axis(u);
}

double Conductivity::sheet_conductance_imag(double u) const {
    return spec_.sheet_length_m * u * C::eps0 * (eps_imag_axis(u) - 1.0);
}

SurfaceConductivity sigma_axial(const NanotubeSpec& spec, double omega) {
    return Conductivity(spec).sigma_axial(omega);
}

}  // namespace cntrap::material
