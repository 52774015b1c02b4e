#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cntrap/casimir.hpp"
#include "cntrap/trap.hpp"

// Total potential along the radial line through the trap, barrier search and
// WKB escape through the barrier toward the surface. All distances here are
// surface distances; the trap module is fed axis distances internally.
namespace cntrap::tunneling {

using SurfacePotential = std::function<double(double y_surface_m)>;

enum class ProfileStatus { barrier, no_barrier, trap_destroyed };
const char* to_string(ProfileStatus s);

struct ProfileOptions {
    int points = 600;
    double lo_floor_m = 1e-9;
    double lo_fraction = 0.02;
    double hi_fraction = 3.0;
    double curvature_step = 1e-3;  // stencil step as a fraction of y_min
};

struct PotentialProfile {
    double y0_m = 0.0;
    double radius_m = 0.0;
    std::vector<double> y, v_mag, u_cp, v_tot;

    ProfileStatus status = ProfileStatus::trap_destroyed;
    double y_min = 0.0, v_min = 0.0;
    double y_max = 0.0, v_max = 0.0;  // barrier top, valid when status == barrier
    double y1 = 0.0, y2 = 0.0;        // V_tot = V_min on the surface side, and y_min
    double height = 0.0;
    double width = 0.0;
    double omega_r = 0.0;           // curvature of V_tot at the minimum
    double omega_r_magnetic = 0.0;  // closed-form magnetic estimate

    SurfacePotential v_mag_fn, u_cp_fn;
    double total(double y) const { return v_mag_fn(y) + u_cp_fn(y); }
};

PotentialProfile build_profile(const trap::TrapConfig& cfg, const trap::AtomSpec& atom,
                               double radius_m, SurfacePotential cp, double y0_surface_m,
                               const ProfileOptions& opt = {});

struct TunnelResult {
    double y0_m = 0.0;
    ProfileStatus status = ProfileStatus::trap_destroyed;
    double transmission = 0.0;
    double ln_T = 0.0;          // at E = V_min + hbar omega_r / 2
    double ln_T_vmin = 0.0;     // at E = V_min (sensitivity diagnostic)
    double omega_r = 0.0;
    double omega_r_magnetic = 0.0;
    double energy = 0.0;
    double tau_cp = 0.0;
    double height = 0.0;
    double width = 0.0;
    bool ok = true;
    std::string error;
};

// T = exp(-(2/hbar) int sqrt(2M(V - E)) dy) between the turning points.
// Without a barrier T = 1. A destroyed trap gives tau_cp = 0.
TunnelResult wkb_lifetime(const PotentialProfile& p, const trap::AtomSpec& atom);

// Holds current and offset fixed and re-places the field zero at each y0.
std::vector<TunnelResult> tunneling_sweep(const green::Shell& shell, double current_A,
                                          double offset_T, const trap::AtomSpec& atom,
                                          const std::vector<double>& y0_surface_m, int jobs = 1,
                                          const ProfileOptions& popt = {},
                                          const casimir::Options& copt = {});

// CP table spanning every profile grid needed for the listed y0 values.
casimir::CPTable cp_table_for(const green::Shell& shell, const trap::AtomSpec& atom,
                              const std::vector<double>& y0_surface_m, int jobs,
                              const ProfileOptions& popt = {}, const casimir::Options& copt = {});

}  // namespace cntrap::tunneling
