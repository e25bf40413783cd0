#pragma once

// Internal unit system: micrometre, microsecond, unified atomic mass unit,
// elementary charge. Angular frequencies are rad/us; 1 MHz ordinary frequency
// is 2*pi rad/us.

namespace mmgate::units {

// CODATA 2018 SI values.
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kAtomicMass = 1.66053906660e-27;       // kg
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kHbarSI = 1.054571817e-34;             // J s
inline constexpr double kBoltzmannSI = 1.380649e-23;           // J/K

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// e^2/(4 pi eps0) in u um^3 / us^2.
double coulomb_constant();

// Energy of one elementary charge across one volt, in u um^2 / us^2.
double volt_energy();

// Reduced Planck constant in u um^2 / us.
double hbar();

// k_B T / hbar in rad/us for a temperature in kelvin.
double thermal_rate_from_kelvin(double kelvin);

// Ordinary frequency in MHz to angular frequency in rad/us, and back.
constexpr double angular_from_mhz(double mhz) { return kTwoPi * mhz; }
constexpr double mhz_from_angular(double omega) { return omega / kTwoPi; }

}  // namespace mmgate::units
