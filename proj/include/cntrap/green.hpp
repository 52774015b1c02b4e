#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "cntrap/tensor.hpp"

namespace cntrap::material {
class Conductivity;
}

// Dyadic Green tensor of a zero-thickness shell with axial sheet conductance,
// by scattering superposition over cylindrical vector wave functions.
//
// Time convention exp(-i omega t). Tensors are returned in the local
// cylindrical bases (r, phi, z): row index at the field point, column index at
// the source point.
namespace cntrap::green {

struct CylPoint {
    double r = 0.0;
    double phi = 0.0;
    double z = 0.0;
};

// Real angular frequency omega, or a point omega = i u on the imaginary axis.
struct Frequency {
    double value = 0.0;
    bool imaginary = false;

    static Frequency real(double omega) { return {omega, false}; }
    static Frequency imag(double u) { return {u, true}; }
    cdouble omega() const { return imaginary ? cdouble(0.0, value) : cdouble(value, 0.0); }
};

enum class Part { vacuum, scattering, total };
enum class Flavor { electric, curlcurl };
enum class Parity { even, odd };

// Shell radius plus sheet conductance along the real and imaginary axes.
struct Shell {
    double radius_m = 0.0;
    std::function<cdouble(double omega)> sheet_real;
    std::function<double(double u)> sheet_imag;

    static Shell from_conductivity(std::shared_ptr<const material::Conductivity> c);
    // Frequency-independent conductance, mostly for tests.
    static Shell constant(double radius_m, cdouble sigma_real, double sigma_imag);
    cdouble sheet(const Frequency& f) const;
};

struct Options {
    double rel_tol = 1e-7;  // h-quadrature
    double n_tol = 1e-8;    // order truncation
    int n_max = 200;
    int max_panels = 4000;
};

struct Diagnostics {
    int orders = 0;
    int evaluations = 0;
    bool resonance_flag = false;
    double min_denominator_ratio = 1.0;
    double last_order_fraction = 0.0;
};

struct GreenEval {
    CylPoint r;
    CylPoint r_prime;
    Frequency frequency;
    Complex3x3 tensor;
    Part part = Part::scattering;
    Flavor flavor = Flavor::electric;
    bool imaginary_part_only = false;
    Diagnostics diagnostics;
};

struct ReflectionCoefficients {
    int n = 0;
    double h = 0.0;
    double omega = 0.0;
    cdouble C1H, C2H, C3H, C4H;
    cdouble C1V, C2V, C3V, C4V;
    double condition_H = 0.0;
    double condition_V = 0.0;
};

// Numerical solution of both four-equation boundary systems at the shell.
// Real omega > 0 and eta^2 = k^2 - h^2 != 0.
ReflectionCoefficients solve_boundary_system(int n, double h, double omega, double radius_m,
                                             cdouble sigma_sheet, Parity parity = Parity::even);

// C1V = -pi a eta^2 J_n^2 / (2 k^2 + pi a eta^2 J_n H_n), a = mu0 omega R sigma,
// Bessel functions at eta R. Valid for complex omega on the real or imaginary axis.
cdouble c1v_closed_form(int n, double h, const Frequency& f, double radius_m, cdouble sigma_sheet);

GreenEval green_scattering(const CylPoint& r, const CylPoint& r_prime, const Frequency& f,
                           const Shell& shell, Flavor flavor, const Options& opt = {});

enum class VacuumMode { closed_form, cylindrical_expansion };

// Free-space tensor. At r = r' only the imaginary part exists (delta term and
// divergent real part excluded) and imaginary_part_only must be set.
GreenEval green_vacuum(const CylPoint& r, const CylPoint& r_prime, const Frequency& f,
                       Flavor flavor, VacuumMode mode = VacuumMode::closed_form,
                       bool imaginary_part_only = false, const Options& opt = {});

GreenEval green_total(const CylPoint& r, const CylPoint& r_prime, const Frequency& f,
                      const Shell& shell, Flavor flavor, const Options& opt = {});

}  // namespace cntrap::green
