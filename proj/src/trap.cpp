#include "cntrap/trap.hpp"

#include <cmath>
#include <stdexcept>

#include "cntrap/constants.hpp"

namespace cntrap::trap {

namespace C = constants;

TrapConfig TrapConfig::from_axis_distance(double current_A, double y0_axis_m, double offset_T) {
    if (!(y0_axis_m > 0)) throw std::invalid_argument("trap distance must be positive");
    TrapConfig t;
    t.current_A = current_A;
    t.bias_T = C::mu0 * current_A / (2.0 * C::pi * y0_axis_m);
    t.offset_T = offset_T;
    t.validate();
    return t;
}

void TrapConfig::validate() const {
    if (!(current_A > 0)) throw std::invalid_argument("wire current must be positive");
    if (!(bias_T > 0)) throw std::invalid_argument("bias field must be positive");
    if (!(offset_T > 0)) throw std::invalid_argument("offset field must be positive");
}

double TrapConfig::y0_m() const { return C::mu0 * current_A / (2.0 * C::pi * bias_T); }

double TrapConfig::gradient_T_per_m() const {
    return -2.0 * C::pi * bias_T * bias_T / (C::mu0 * current_A);
}

AtomSpec AtomSpec::rb87() {
    AtomSpec a;
    a.mass_kg = 86.909180527 * C::amu;
    a.g_F = 0.5;
    a.m_F = 2;
    a.g_S = 2.0;
    a.d2_wavelength_m = 780e-9;
    a.d2_dipole_Cm = 4.227 * C::e * C::a0;
    return a;
}

void AtomSpec::validate() const {
    if (!(mass_kg > 0)) throw std::invalid_argument("atomic mass must be positive");
    if (!(g_F * m_F > 0)) throw std::invalid_argument("state is not low-field seeking (g_F m_F <= 0)");
    if (!(d2_wavelength_m > 0) || !(d2_dipole_Cm > 0))
        throw std::invalid_argument("D2 line data must be positive");
}

double spin_flip_frequency_Hz(const TrapConfig& cfg, const AtomSpec& atom) {
    return atom.g_F * C::muB * cfg.offset_T / C::h_planck;
}

double offset_for_frequency(double f0_Hz, const AtomSpec& atom) {
    return f0_Hz * C::h_planck / (atom.g_F * C::muB);
}

double field_magnitude(const TrapConfig& cfg, double y) {
    if (!(y > 0)) throw std::domain_error("field_magnitude requires y > 0");
    const double bw = C::mu0 * cfg.current_A / (2.0 * C::pi * y) - cfg.bias_T;
    return std::hypot(cfg.offset_T, bw);
}

double zeeman_potential(const TrapConfig& cfg, const AtomSpec& atom, double y) {
    if (!(atom.g_F * atom.m_F > 0)) throw std::invalid_argument("state is not low-field seeking");
    return atom.g_F * atom.m_F * C::muB * field_magnitude(cfg, y);
}

double harmonic_potential(const TrapConfig& cfg, const AtomSpec& atom, double y) {
    const double gm = atom.g_F * atom.m_F * C::muB;
    const double b = cfg.gradient_T_per_m();
    const double dy = y - cfg.y0_m();
    return gm * (cfg.offset_T + 0.5 * b * b * dy * dy / cfg.offset_T);
}

double trap_frequency_closed_form(const TrapConfig& cfg, const AtomSpec& atom) {
    const double y0 = cfg.y0_m();
    return std::sqrt(atom.g_F * atom.m_F * C::muB / (atom.mass_kg * cfg.offset_T)) * C::mu0 *
           cfg.current_A / (2.0 * C::pi * y0 * y0);
}

}  // namespace cntrap::trap
