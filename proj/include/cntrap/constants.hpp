#pragma once

// CODATA 2018 values, SI units.
namespace cntrap::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double h_planck = 6.62607015e-34;     // J s
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double mu0 = 1.25663706212e-6;        // H/m
inline constexpr double kB = 1.380649e-23;             // J/K
inline constexpr double muB = 9.2740100783e-24;        // J/T
inline constexpr double e = 1.602176634e-19;           // C
inline constexpr double a0 = 5.29177210903e-11;        // m
inline constexpr double m_e = 9.1093837015e-31;        // kg
inline constexpr double amu = 1.66053906660e-27;       // kg

struct PhysicalConstants {
    double hbar = constants::hbar;
    double c = constants::c;
    double eps0 = constants::eps0;
    double mu0 = constants::mu0;
    double kB = constants::kB;
    double muB = constants::muB;
    double e = constants::e;
    double a0 = constants::a0;
    double m_e = constants::m_e;
};

// Frozen table shared by every module.
const PhysicalConstants& table();

}  // namespace cntrap::constants
