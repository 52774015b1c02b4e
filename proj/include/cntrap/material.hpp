#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

// Axial electronic response of an (a,b) single-wall carbon nanotube.
namespace cntrap::material {

using cdouble = std::complex<double>;

enum class ConductivityMode {
    tight_binding,  // band integrals with an injectable momentum matrix element
    calibrated      // Drude term only, plasma frequency fitted to a target conductivity
};

struct NanotubeSpec {
    int a = 9;
    int b = 0;
    double radius_m = 3.52e-10;
    double ell_m = 2.13e-10;  // 3/2 of the carbon-carbon distance
    double t0_J = 4.32e-19;
    double hbar_over_tau_J = 4.8e-21;
    double temperature_K = 380.0;
    double mu_chem_J = 0.0;
    // Length multiplying the bulk-equivalent conductivity to give the sheet
    // conductance of the zero-thickness shell. 1 m inserts the bulk value unchanged.
    double sheet_length_m = 1.0;
    ConductivityMode mode = ConductivityMode::calibrated;
    // Calibration target: Re sigma_bulk at the calibration frequency.
    double calibration_sigma_S_per_m = 1.19e9;
    double calibration_omega_rad_s = 2.0 * 3.141592653589793 * 70e3;

    void validate() const;  // throws std::invalid_argument
    double tau_s() const;
};

bool metallic(int a, int b);

// Carbon atoms per unit volume, pi sqrt(3) / (2 R ell^2).
double carbon_density(const NanotubeSpec& spec);
// Tubule density rho_T = rho_C / (2a).
double tubule_density(const NanotubeSpec& spec);

struct BandPair {
    double plus;
    double minus;
};

// E_+(N,p) = -E_-(N,p); 0 <= N < a, |p| <= pi/ell.
BandPair band_energy(const NanotubeSpec& spec, int N, double p);
double fermi(double E, const NanotubeSpec& spec);
double fermi_derivative(double E, const NanotubeSpec& spec);

// Dimensionless momentum matrix element: Re part interband, Im part intraband.
using MomentumElement = std::function<cdouble(int N, double p)>;

// Nearest-neighbour tight-binding element. With H = t0 [[0, g], [g*, 0]],
// g = 1 + exp(i(A+B)) + exp(i(A-B)), A = 2 pi N/a - (a+2b) p ell/(2a), B = p ell/2:
//   Im K0 = (m ell / hbar^2) dE_+/dp,   Re K0 = (m ell / hbar^2) t0 Im(g' e^{-i arg g}).
// The p-momentum unit hbar/ell makes K0 dimensionless.
MomentumElement tight_binding_momentum_element(const NanotubeSpec& spec);

// Interband permittivity at complex frequency (real omega or omega = i u).
cdouble eps_interband(const NanotubeSpec& spec, cdouble omega, const MomentumElement& K0,
                      double rel_tol = 1e-6);
double plasma_frequency(const NanotubeSpec& spec, const MomentumElement& K0);
// Drude term at complex frequency.
cdouble eps_drude(const NanotubeSpec& spec, cdouble omega, double omega_pl);
// Plasma frequency reproducing the calibration target with the Drude term alone.
double calibrated_plasma_frequency(const NanotubeSpec& spec);

struct SurfaceConductivity {
    double omega = 0.0;
    cdouble sigma_sheet;       // S
    cdouble sigma_bulk_equiv;  // S/m
    cdouble eps_r;
};

// Response of one tube. Thread-safe; the plasma frequency and the
// imaginary-axis interband table are computed once on first use.
class Conductivity {
public:
    explicit Conductivity(NanotubeSpec spec, MomentumElement K0 = {});

    const NanotubeSpec& spec() const { return spec_; }
    double plasma_frequency() const;
    SurfaceConductivity sigma_axial(double omega) const;
    // Relative permittivity at omega = i u (real).
    double eps_imag_axis(double u) const;
    // Sheet conductance at omega = i u, real and non-negative.
    double sheet_conductance_imag(double u) const;

private:
    double interband_imag_axis(double u) const;

    NanotubeSpec spec_;
    MomentumElement k0_;
    mutable std::once_flag wpl_once_;
    mutable double wpl_ = 0.0;
    mutable std::once_flag table_once_;
    mutable std::function<double(double)> table_;
    mutable double table_front_ = 0.0;
    mutable double table_back_ = 0.0;
};

SurfaceConductivity sigma_axial(const NanotubeSpec& spec, double omega);

}  // namespace cntrap::material
