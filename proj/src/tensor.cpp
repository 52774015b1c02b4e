#include "cntrap/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace cntrap {

namespace {
void check_basis(const Complex3x3& a, const Complex3x3& b) {
    if (a.basis != b.basis) throw std::invalid_argument("tensor basis mismatch");
}
}  // namespace

Complex3x3 Complex3x3::zero(Basis b) {
    Complex3x3 t;
    t.basis = b;
    return t;
}

Complex3x3 Complex3x3::identity(Basis b) {
    Complex3x3 t = zero(b);
    for (int i = 0; i < 3; ++i) t(i, i) = 1.0;
    return t;
}

Complex3x3& Complex3x3::operator+=(const Complex3x3& o) {
    check_basis(*this, o);
    for (int i = 0; i < 9; ++i) m[i] += o.m[i];
    return *this;
}

Complex3x3& Complex3x3::operator*=(cdouble s) {
    for (auto& v : m) v *= s;
    return *this;
}

Complex3x3 operator+(Complex3x3 a, const Complex3x3& b) { return a += b; }

Complex3x3 operator-(Complex3x3 a, const Complex3x3& b) {
    check_basis(a, b);
    for (int i = 0; i < 9; ++i) a.m[i] -= b.m[i];
    return a;
}

Complex3x3 operator*(cdouble s, Complex3x3 a) { return a *= s; }

Complex3x3 transpose(const Complex3x3& t) {
    Complex3x3 r = Complex3x3::zero(t.basis);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = t(j, i);
    return r;
}

cdouble trace(const Complex3x3& t) { return t(0, 0) + t(1, 1) + t(2, 2); }

double hermitian_defect(const Complex3x3& t) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(t(i, j) - t(j, i)));
    return d;
}

double max_norm(const Complex3x3& t) {
    double d = 0.0;
    for (const auto& v : t.m) d = std::max(d, std::abs(v));
    return d;
}

}  // namespace cntrap
