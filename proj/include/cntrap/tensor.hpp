#pragma once

#include <array>
#include <complex>

namespace cntrap {

using cdouble = std::complex<double>;

enum class Basis { cylindrical, cartesian };

// 3x3 complex tensor with a basis tag. Cylindrical order is (r, phi, z).
struct Complex3x3 {
    std::array<cdouble, 9> m{};
    Basis basis = Basis::cylindrical;

    cdouble& operator()(int i, int j) { return m[3 * i + j]; }
    const cdouble& operator()(int i, int j) const { return m[3 * i + j]; }

    static Complex3x3 zero(Basis b = Basis::cylindrical);
    static Complex3x3 identity(Basis b = Basis::cylindrical);

    Complex3x3& operator+=(const Complex3x3& o);
    Complex3x3& operator*=(cdouble s);
};

Complex3x3 operator+(Complex3x3 a, const Complex3x3& b);
Complex3x3 operator-(Complex3x3 a, const Complex3x3& b);
Complex3x3 operator*(cdouble s, Complex3x3 a);
Complex3x3 transpose(const Complex3x3& t);

cdouble trace(const Complex3x3& t);
// max |t_ij - t_ji|, transpose defect rather than conjugate.
double hermitian_defect(const Complex3x3& t);
// Largest entry modulus.
double max_norm(const Complex3x3& t);

}  // namespace cntrap
