#include "cntrap/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cntrap/constants.hpp"
#include "cntrap/errors.hpp"

namespace cntrap::specfun {

namespace {

using constants::pi;
constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double eps = 1e-16;
constexpr double tiny = 1e-300;
constexpr double rescale_above = 1e250;
constexpr double rescale_factor = 1e-250;
const double rescale_log = 250.0 * std::log(10.0);
constexpr int max_iter = 200000;

void require_order(int n) {
    if (n < 0) throw std::domain_error("cylinder function order must be non-negative");
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error(std::string(what) + ": argument must be positive and finite");
}

// Modified Lentz evaluation of 1/(b1 + s/(b2 + s/(b3 + ...))), b_j = 2(n+j)/x.
// s = +1 gives I_{n+1}/I_n, s = -1 gives J_{n+1}/J_n.
double order_ratio(int n, double x, double s) {
    double f = tiny, c = f, d = 0.0;
    for (int j = 1; j < max_iter; ++j) {
        const double b = 2.0 * (n + j) / x;
        const double a = (j == 1) ? 1.0 : s;
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) return f;
    }
    throw NumericError("order-ratio continued fraction did not converge");
}

// --- modified Bessel functions -------------------------------------------

// e^x K_0(x), e^x K_1(x).
void k01_scaled(double x, double& k0, double& k1) {
    if (x <= 2.0) {
        const double t = 0.25 * x * x;
        const double lg = std::log(0.5 * x);
        double term = 1.0, i0 = 1.0, s0 = 0.0, harm = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= t / (double(k) * k);
            harm += 1.0 / k;
            i0 += term;
            s0 += harm * term;
            if (term < eps * i0) break;
        }
        double term1 = 0.5 * x, i1 = term1;
        double psi_a = -euler_gamma, psi_b = 1.0 - euler_gamma;
        double s1 = (psi_a + psi_b) * 1.0;
        double t1 = 1.0;
        for (int k = 1; k < 200; ++k) {
            term1 *= t / (double(k) * (k + 1));
            i1 += term1;
            t1 *= t / (double(k) * (k + 1));
            psi_a += 1.0 / k;
            psi_b += 1.0 / (k + 1);
            s1 += (psi_a + psi_b) * t1;
            if (t1 < eps * std::abs(s1)) break;
        }
        const double K0 = -(lg + euler_gamma) * i0 + s0;
        const double K1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
        const double ex = std::exp(x);
        k0 = K0 * ex;
        k1 = K1 * ex;
        return;
    }
    // Steed's method for the second continued fraction (Temme), order zero.
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < max_iter; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    if (i == max_iter) throw NumericError("K continued fraction did not converge");
    h = a1 * h;
    k0 = std::sqrt(pi / (2.0 * x)) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

// --- Bessel J and Y ------------------------------------------------------

// J_0, J_1, Y_0, Y_1 by power series, x < 2.
void jy01_series(double x, double& j0, double& j1, double& y0, double& y1) {
    const double t = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double term = 1.0, sj0 = 1.0, sy0 = 0.0, harm = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -t / (double(k) * k);
        harm += 1.0 / k;
        sj0 += term;
        sy0 -= harm * term;  // (-1)^{k+1} H_k t^k/(k!)^2
        if (std::abs(term) < eps * 1e-3) break;
    }
    double t1 = 1.0, sj1 = 1.0;
    double psi_a = -euler_gamma, psi_b = 1.0 - euler_gamma;
    double sy1 = psi_a + psi_b;
    for (int k = 1; k < 200; ++k) {
        t1 *= -t / (double(k) * (k + 1));
        psi_a += 1.0 / k;
        psi_b += 1.0 / (k + 1);
        sj1 += t1;
        sy1 += (psi_a + psi_b) * t1;
        if (std::abs(t1) < eps * 1e-3) break;
    }
    j0 = sj0;
    j1 = 0.5 * x * sj1;
    y0 = (2.0 / pi) * ((lg + euler_gamma) * j0 + sy0);
    y1 = -2.0 / (pi * x) + (2.0 / pi) * lg * j1 - (1.0 / pi) * 0.5 * x * sy1;
}

// log of J_n(x) series prefactor and the series value: J_n = exp(lp) * sum.
void jn_series(int n, double x, double& lp, double& sum) {
    const double t = 0.25 * x * x;
    lp = n * std::log(0.5 * x) - std::lgamma(n + 1.0);
    double term = 1.0;
    sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= -t / (double(k) * (n + k));
        sum += term;
        if (std::abs(term) < eps * 1e-3 * std::abs(sum)) break;
    }
}

// (J'+iY')/(J+iY) at order zero for x >= 2 by complex Lentz evaluation of
// -1/(2x) + i + (i/x) a1/(b1 + a2/(b2 + ...)), a_k = (k - 1/2)^2, b_k = 2(x + ik).
std::complex<double> hankel_log_derivative0(double x) {
    using cd = std::complex<double>;
    cd f = tiny, c = f, d = 0.0;
    for (int k = 1; k < max_iter; ++k) {
        const double a = (k - 0.5) * (k - 0.5);
        const cd b(2.0 * x, 2.0 * k);
        d = b + a * d;
        if (std::abs(d) == 0.0) d = tiny;
        c = b + a / c;
        if (std::abs(c) == 0.0) c = tiny;
        d = 1.0 / d;
        const cd delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) {
            return cd(-0.5 / x, 1.0) + cd(0.0, 1.0 / x) * f;
        }
    }
    throw NumericError("Hankel continued fraction did not converge");
}

}  // namespace

ScaledIK modified_i_k_scaled(int n, double x) {
    require_order(n);
    require_positive(x, "modified_i_k");
    double k0, k1;
    k01_scaled(x, k0, k1);
    // Forward recurrence is stable for K; rescale to keep the mantissa bounded.
    double s = 0.0;
    double km = k0, kp = k1;  // K_m, K_{m+1}
    for (int m = 1; m <= n; ++m) {
        const double next = km + (2.0 * m / x) * kp;
        km = kp;
        kp = next;
        if (std::abs(kp) > rescale_above) {
            km *= rescale_factor;
            kp *= rescale_factor;
            s += rescale_log;
        }
    }
    // km = K_n, kp = K_{n+1}, both times exp(x - s).
    const double r = order_ratio(n, x, 1.0);
    ScaledIK out;
    out.log_scale = s;
    out.k = km;
    out.dk = (n / x) * km - kp;
    out.i = 1.0 / (x * (kp + r * km));
    out.di = (r + n / x) * out.i;
    return out;
}

ModifiedSample modified_i_k(int n, double x) {
    const ScaledIK s = modified_i_k_scaled(n, x);
    const double gi = std::exp(x - s.log_scale);
    const double gk = std::exp(s.log_scale - x);
    return {s.i * gi, s.di * gi, s.k * gk, s.dk * gk};
}

double ik_product(int n, double x, double y) {
    const ScaledIK a = modified_i_k_scaled(n, x);
    const ScaledIK b = modified_i_k_scaled(n, y);
    return a.i * b.k * std::exp(x - y - a.log_scale + b.log_scale);
}

ScaledJY bessel_jy_scaled(int n, double x) {
    require_order(n);
    require_positive(x, "bessel_jy");
    double j0, j1, y0, y1;
    double jn = 0.0, jn1 = 0.0, j_log = 0.0;  // J_n = jn*exp(j_log), J_{n+1} = jn1*exp(j_log)
    if (x < 2.0) {
        jy01_series(x, j0, j1, y0, y1);
        double lp, sum, lp1, sum1;
        jn_series(n, x, lp, sum);
        jn_series(n + 1, x, lp1, sum1);
        jn = sum;
        jn1 = sum1 * std::exp(lp1 - lp);
        j_log = lp;
    } else {
        // Downward recurrence from an order where J is positive, then
        // normalization through the Hankel log-derivative (Steed).
        const int start = std::max(n, static_cast<int>(std::ceil(x))) + 20;
        double ratio = order_ratio(start, x, -1.0);
        double jp = ratio, jc = 1.0;  // J_{m+1}, J_m unnormalized
        double rec_log = 0.0;         // scaling applied after J_n was recorded
        bool recorded = false;
        if (start == n) {
            jn = jc;
            jn1 = jp;
            recorded = true;
        }
        for (int m = start; m > 0; --m) {
            const double jm1 = (2.0 * m / x) * jc - jp;
            jp = jc;
            jc = jm1;
            if (m - 1 == n) {
                jn = jc;
                jn1 = jp;
                recorded = true;
            }
            if (std::abs(jc) > rescale_above) {
                jc *= rescale_factor;
                jp *= rescale_factor;
                if (recorded) rec_log += rescale_log;
            }
        }
        // jc = J_0, jp = J_1 (unnormalized, common factor)
        const std::complex<double> pq = hankel_log_derivative0(x);
        const double p = pq.real(), q = pq.imag();
        const double w = 2.0 / (pi * x);
        const double g = p * jc + jp;
        const double norm = std::sqrt(w * q / (q * q * jc * jc + g * g));
        j0 = norm * jc;
        j1 = norm * jp;
        y0 = norm * g / q;
        const double dy0 = p * y0 + q * j0;
        y1 = -dy0;
        jn *= norm;
        jn1 *= norm;
        j_log = -rec_log;
    }
    // Y_n by forward recurrence with rescaling.
    double s = 0.0;
    double ym = y0, yp = y1;
    for (int m = 1; m <= n; ++m) {
        const double next = (2.0 * m / x) * yp - ym;
        ym = yp;
        yp = next;
        if (std::abs(yp) > rescale_above) {
            ym *= rescale_factor;
            yp *= rescale_factor;
            s += rescale_log;
        }
    }
    ScaledJY out;
    out.log_scale = s;
    out.y = ym;
    out.dy = (n / x) * ym - yp;
    const double gj = std::exp(j_log + s);
    out.j = jn * gj;
    out.dj = ((n / x) * jn - jn1) * gj;
    return out;
}

Sample bessel_j(int n, double x) {
    require_order(n);
    if (!std::isfinite(x)) throw std::domain_error("bessel_j: non-finite argument");
    if (x == 0.0) return {n == 0 ? 1.0 : 0.0, n == 1 ? 0.5 : 0.0};
    const double ax = std::abs(x);
    const ScaledJY s = bessel_jy_scaled(n, ax);
    const double g = std::exp(-s.log_scale);
    Sample out{s.j * g, s.dj * g};
    if (x < 0.0) {
        // J_n(-x) = (-1)^n J_n(x)
        if (n % 2 == 1) out.value = -out.value;
        else out.derivative = -out.derivative;
    }
    return out;
}

ComplexSample hankel1(int n, double x) {
    require_order(n);
    require_positive(x, "hankel1");
    const ScaledJY s = bessel_jy_scaled(n, x);
    const double gj = std::exp(-s.log_scale);
    const double gy = std::exp(s.log_scale);
    return {{s.j * gj, s.y * gy}, {s.dj * gj, s.dy * gy}};
}

}  // namespace cntrap::specfun
