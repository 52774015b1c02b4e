#include "cntrap/spinflip.hpp"

#include <cmath>
#include <stdexcept>

#include "cntrap/constants.hpp"
#include "cntrap/parallel.hpp"

namespace cntrap::spinflip {

namespace C = constants;

namespace {

// Local tensor indices used for the spin axes x and y.
std::pair<int, int> frame_axes(SpinFrame f) {
    switch (f) {
        case SpinFrame::phi_r: return {1, 0};
        case SpinFrame::r_z: return {0, 2};
        default: return {1, 2};
    }
}

double spin_sum(const Complex3x3& t, const trap::AtomSpec& atom, SpinFrame frame) {
    const auto [ix, iy] = frame_axes(frame);
    const int idx[2] = {ix, iy};
    const double s[2] = {atom.spin_x, atom.spin_y};
    double sum = 0.0;
    for (int q = 0; q < 2; ++q)
        for (int k = 0; k < 2; ++k) sum += s[q] * s[k] * t(idx[q], idx[k]).imag();
    return sum;
}

}  // namespace

double thermal_occupation(double omega, double T) {
    if (!(T > 0)) throw std::domain_error("temperature must be positive");
    return 1.0 / std::expm1(C::hbar * omega / (C::kB * T));
}

SpinFlipResult spin_flip_rate(const green::Shell& shell, const trap::TrapConfig& cfg,
                              const trap::AtomSpec& atom, double y0, double T, const Options& opt) {
    if (!(y0 > 0)) throw std::domain_error("trap distance must be positive");
    const double f0 = trap::spin_flip_frequency_Hz(cfg, atom);
    if (!(f0 > 0)) throw std::domain_error("spin-flip frequency must be positive");
    const double omega = 2.0 * C::pi * f0;
    const green::CylPoint p{shell.radius_m + y0, 0.0, 0.0};
    const auto freq = green::Frequency::real(omega);

    const auto gs = green::green_scattering(p, p, freq, shell, green::Flavor::curlcurl, opt.green);
    const auto gv = green::green_vacuum(p, p, freq, green::Flavor::curlcurl,
                                        green::VacuumMode::closed_form, true);
    const double mu = C::muB * atom.g_S;
    const double pref = 2.0 * C::mu0 * mu * mu / C::hbar;

    SpinFlipResult r;
    r.y0_m = y0;
    r.vacuum_contribution = pref * spin_sum(gv.tensor, atom, opt.frame);
    r.gamma0 = r.vacuum_contribution + pref * spin_sum(gs.tensor, atom, opt.frame);
    r.n_th = thermal_occupation(omega, T);
    r.gamma_tot = r.gamma0 * (r.n_th + 1.0);
    r.tau_sf = 1.0 / r.gamma_tot;
    return r;
}

std::vector<SpinFlipResult> lifetime_sweep(const green::Shell& shell, const trap::TrapConfig& cfg,
                                           const trap::AtomSpec& atom,
                                           const std::vector<double>& y0s, double T, int jobs,
                                           const Options& opt) {
    std::vector<SpinFlipResult> out(y0s.size());
    parallel_for(y0s.size(), jobs, [&](std::size_t i) {
        try {
            out[i] = spin_flip_rate(shell, cfg, atom, y0s[i], T, opt);
        } catch (const std::exception& e) {
            out[i].y0_m = y0s[i];
            out[i].ok = false;
            out[i].error = e.what();
        }
    });
    return out;
}

}  // namespace cntrap::spinflip
