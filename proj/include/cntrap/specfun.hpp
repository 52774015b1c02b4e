#pragma once

#include <complex>

// Integer-order cylinder functions for real arguments.
//
// The scaled interfaces keep a shared logarithmic scale s so that products of a
// growing and a decaying solution stay representable:
//   J_n(x) = j * exp(-s),          Y_n(x) = y * exp(s)
//   I_n(x) = i * exp(x - s),       K_n(x) = k * exp(s - x)
namespace cntrap::specfun {

struct Sample {
    double value;
    double derivative;
};

struct ComplexSample {
    std::complex<double> value;
    std::complex<double> derivative;
};

struct ModifiedSample {
    double i, di, k, dk;
};

struct ScaledJY {
    double j, dj, y, dy;
    double log_scale;
};

struct ScaledIK {
    double i, di, k, dk;
    double log_scale;
};

// J_n(x) and J_n'(x) for any finite x.
Sample bessel_j(int n, double x);

// H_n^(1)(x) = J_n + i Y_n and derivative; x > 0.
ComplexSample hankel1(int n, double x);

// I_n, I_n', K_n, K_n' unscaled (may overflow or underflow); x > 0.
ModifiedSample modified_i_k(int n, double x);

ScaledJY bessel_jy_scaled(int n, double x);
ScaledIK modified_i_k_scaled(int n, double x);

// I_n(x) K_n(y) evaluated without forming either factor.
double ik_product(int n, double x, double y);

}  // namespace cntrap::specfun
