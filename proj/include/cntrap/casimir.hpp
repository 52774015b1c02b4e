#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "cntrap/green.hpp"
#include "cntrap/trap.hpp"

// Ground-state Casimir-Polder potential,
//   U = (hbar mu0 / 2 pi) int_0^inf du u^2 alpha(iu) Tr G^S(r, r, iu).
namespace cntrap::casimir {

struct PolarizabilityModel {
    double omega_D2 = 0.0;   // rad/s
    double dipole_Cm = 0.0;  // C m
    // Additional (omega, dipole) lines, empty by default.
    std::vector<std::pair<double, double>> extra_lines;

    static PolarizabilityModel from_atom(const trap::AtomSpec& atom);
    double static_value() const;
};

// alpha(iu) = sum over lines of (2/(3 hbar)) omega d^2 / (omega^2 + u^2), SI.
double polarizability(const PolarizabilityModel& m, double u);

struct Options {
    double rel_tol = 1e-6;
    green::Options green{1e-8, 1e-9, 200, 4000};
};

struct CPResult {
    double y_surface_m = 0.0;
    double U = 0.0;
    int nodes = 0;
    double tail_estimate = 0.0;     // contribution above 40 c / y
    double low_u_fraction = 0.0;    // share of U from u < 10 c / y
    double min_integrand = 0.0;     // min over nodes of u^2 alpha (-Tr G^S); >= 0 expected
};

CPResult cp_potential(const green::Shell& shell, const PolarizabilityModel& model,
                      double y_surface_m, const Options& opt = {});

// CP potential tabulated on a log grid of surface distances and interpolated
// with a cubic spline in (log y, log(-U)). Points outside the table are
// evaluated directly.
class CPTable {
public:
    CPTable(const green::Shell& shell, PolarizabilityModel model, double y_lo_m, double y_hi_m,
            int nodes = 64, int jobs = 1, Options opt = {});

    double operator()(double y_surface_m) const;
    const std::vector<double>& nodes_m() const { return y_; }
    const std::vector<double>& values_J() const { return u_; }

private:
    green::Shell shell_;
    PolarizabilityModel model_;
    Options opt_;
    std::vector<double> y_, u_;
    double log_lo_ = 0.0, log_step_ = 0.0;
    bool zero_ = false;
    std::function<double(double)> spline_;
};

}  // namespace cntrap::casimir
