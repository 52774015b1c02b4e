#pragma once

// Side-guide trap: straight wire along z, bias field across it, offset field
// along it. Distances here are measured from the wire axis.
namespace cntrap::trap {

struct TrapConfig {
    double current_A = 20e-6;
    double bias_T = 0.0;
    double offset_T = 1e-5;

    // Bias chosen so that the field zero of wire plus bias sits at y0_axis.
    static TrapConfig from_axis_distance(double current_A, double y0_axis_m, double offset_T);

    void validate() const;  // throws std::invalid_argument
    double y0_m() const;                // mu0 I / (2 pi B_b)
    double gradient_T_per_m() const;    // b' = -2 pi B_b^2 / (mu0 I)
};

struct AtomSpec {
    double mass_kg = 0.0;
    double g_F = 0.0;
    int m_F = 0;
    double g_S = 2.0;
    double d2_wavelength_m = 0.0;
    double d2_dipole_Cm = 0.0;
    double spin_x = 0.25;  // |<f|S_x|i>|
    double spin_y = 0.25;  // |<f|S_y|i>|

    static AtomSpec rb87();  // |F=2, m_F=2>
    void validate() const;
};

// g_F mu_B B_o / h, the splitting of neighbouring Zeeman sublevels at the trap centre.
double spin_flip_frequency_Hz(const TrapConfig& cfg, const AtomSpec& atom);
// Offset field giving a requested splitting.
double offset_for_frequency(double f0_Hz, const AtomSpec& atom);

// |B|(y) = sqrt(B_o^2 + (mu0 I/(2 pi y) - B_b)^2), y > 0.
double field_magnitude(const TrapConfig& cfg, double y_axis_m);
// g_F m_F mu_B |B|(y); requires a low-field seeker.
double zeeman_potential(const TrapConfig& cfg, const AtomSpec& atom, double y_axis_m);
// Quadratic expansion of the Zeeman potential about y0 (diagnostic only).
double harmonic_potential(const TrapConfig& cfg, const AtomSpec& atom, double y_axis_m);
// omega_r = sqrt(g_F m_F mu_B / (M B_o)) mu0 I / (2 pi y0^2), rad/s.
double trap_frequency_closed_form(const TrapConfig& cfg, const AtomSpec& atom);

}  // namespace cntrap::trap
