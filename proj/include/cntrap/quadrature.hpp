#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <vector>

#include "cntrap/errors.hpp"

// Globally adaptive Gauss-Kronrod (7/15) quadrature over finite intervals.
// Integrands may return a double or a std::array<double, N>; vector-valued
// integrands share one call per node, which matters when every node costs a
// batch of Bessel evaluations.
namespace cntrap::quad {

struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_panels = 2000;
    int initial_panels = 1;
};

template <class V>
struct Result {
    V value{};
    double error = 0.0;
    int evaluations = 0;
    int panels = 0;
};

namespace detail {

extern const std::array<double, 8> kronrod_nodes;
extern const std::array<double, 8> kronrod_weights;
extern const std::array<double, 4> gauss_weights;

inline double norm_of(double v) { return std::abs(v); }

template <std::size_t N>
double norm_of(const std::array<double, N>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline void axpy(double& y, double w, double x) { y += w * x; }

template <std::size_t N>
void axpy(std::array<double, N>& y, double w, const std::array<double, N>& x) {
    for (std::size_t i = 0; i < N; ++i) y[i] += w * x[i];
}

inline double diff_norm(double a, double b) { return std::abs(a - b); }

template <std::size_t N>
double diff_norm(const std::array<double, N>& a, const std::array<double, N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <class V>
struct Panel {
    double a, b;
    V value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class V, class F>
Panel<V> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    V k{}, g{};
    V fc = f(c);
    axpy(k, kronrod_weights[7], fc);
    axpy(g, gauss_weights[3], fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kronrod_nodes[j];
        V f1 = f(c - dx);
        V f2 = f(c + dx);
        axpy(k, kronrod_weights[j], f1);
        axpy(k, kronrod_weights[j], f2);
        if (j % 2 == 1) {
            axpy(g, gauss_weights[j / 2], f1);
            axpy(g, gauss_weights[j / 2], f2);
        }
    }
    V kv{}, gv{};
    axpy(kv, h, k);
    axpy(gv, h, g);
    return {a, b, kv, diff_norm(kv, gv)};
}

}  // namespace detail

template <class V, class F>
Result<V> integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result<V> res;
    if (a == b) return res;
    int calls = 0;
    auto counted = [&](double x) {
        ++calls;
        return f(x);
    };
    std::priority_queue<detail::Panel<V>> heap;
    V total{};
    double err = 0.0;
    const int start = std::max(1, opt.initial_panels);
    for (int i = 0; i < start; ++i) {
        const double lo = a + (b - a) * i / start;
        const double hi = (i + 1 == start) ? b : a + (b - a) * (i + 1) / start;
        auto p = detail::gk15<V>(counted, lo, hi);
        detail::axpy(total, 1.0, p.value);
        err += p.error;
        heap.push(p);
    }
    while (true) {
        const double target = std::max(opt.rel_tol * detail::norm_of(total), opt.abs_tol);
        if (!(err == err)) throw NumericError("quadrature produced a non-finite value");
        if (err <= target) {
            // Re-sum to shed the drift of the running totals.
            V sum{};
            double e = 0.0;
            while (!heap.empty()) {
                detail::axpy(sum, 1.0, heap.top().value);
                e += heap.top().error;
                heap.pop();
            }
            res.value = sum;
            res.error = e;
            res.evaluations = calls;
            return res;
        }
        if (static_cast<int>(heap.size()) >= opt.max_panels) {
            std::ostringstream os;
            os << "quadrature panel budget exhausted on [" << a << ", " << b << "]: estimate "
               << detail::norm_of(total) << " with error " << err;
            throw NumericError(os.str(), detail::norm_of(total));
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15<V>(counted, worst.a, mid);
        auto right = detail::gk15<V>(counted, mid, worst.b);
        detail::axpy(total, -1.0, worst.value);
        detail::axpy(total, 1.0, left.value);
        detail::axpy(total, 1.0, right.value);
        err += left.error + right.error - worst.error;
        res.panels = static_cast<int>(heap.size()) + 2;
        heap.push(left);
        heap.push(right);
    }
}

// Scalar convenience wrapper.
Result<double> integrate_scalar(const std::function<double(double)>& f, double a, double b,
                                const Options& opt = {});

}  // namespace cntrap::quad
