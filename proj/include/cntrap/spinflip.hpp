#pragma once

#include <string>
#include <vector>

#include "cntrap/green.hpp"
#include "cntrap/trap.hpp"

// Thermally assisted spin-flip rate at the trap centre from the magnetic
// (curl-curl) Green tensor.
namespace cntrap::spinflip {

// Which local axes play the role of the transverse spin axes (x, y).
// The quantization axis is the offset field along the wire, so the default
// pairs x with e_phi and y with e_r.
enum class SpinFrame { phi_r, r_z, phi_z };

struct Options {
    SpinFrame frame = SpinFrame::phi_r;
    green::Options green{};
};

struct SpinFlipResult {
    double y0_m = 0.0;  // surface distance
    double gamma0 = 0.0;
    double n_th = 0.0;
    double gamma_tot = 0.0;
    double tau_sf = 0.0;
    double vacuum_contribution = 0.0;
    bool ok = true;
    std::string error;
};

// Mean thermal photon number at angular frequency omega.
double thermal_occupation(double omega, double temperature_K);

SpinFlipResult spin_flip_rate(const green::Shell& shell, const trap::TrapConfig& cfg,
                              const trap::AtomSpec& atom, double y0_surface_m,
                              double temperature_K, const Options& opt = {});

// Evaluates every point, capturing per-point failures; jobs > 1 runs points
// concurrently with results kept in input order.
std::vector<SpinFlipResult> lifetime_sweep(const green::Shell& shell, const trap::TrapConfig& cfg,
                                           const trap::AtomSpec& atom,
                                           const std::vector<double>& y0_surface_m,
                                           double temperature_K, int jobs = 1,
                                           const Options& opt = {});

}  // namespace cntrap::spinflip
