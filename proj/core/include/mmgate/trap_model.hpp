#pragma once

#include <string>

namespace mmgate {

// Planar rf quadrupole trap. Voltages in volts, lengths in um, angular
// frequencies in rad/us, mass in u, charge in units of e.
struct TrapConfig {
  double dc_voltage = 0.0;        // U0
  double rf_voltage = 0.0;        // V0 (amplitude)
  double rf_angular_freq = 0.0;   // Omega_T
  double electrode_size = 0.0;    // d0
  double anisotropy = 0.0;        // gamma
  double ion_mass = 0.0;
  double ion_charge = 1.0;
  int ion_count = 1;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct MathieuParams {
  double a_x = 0, a_y = 0, a_z = 0;
  double q_x = 0, q_y = 0, q_z = 0;
  double beta_x = 0, beta_y = 0, beta_z = 0;
  double omega_x = 0, omega_y = 0, omega_z = 0;
};

enum class Planarity { Ok, Warning };

struct SecularFrequencies {
  double omega_x = 0, omega_y = 0, omega_z = 0;
  Planarity planarity = Planarity::Ok;
};

inline constexpr double kPlanarityRatio = 10.0;

// Fills the a and q fields only.
MathieuParams mathieu_parameters(const TrapConfig& cfg);

// Stable characteristic exponent beta in [0, 1) of y'' + (a - 2q cos 2x) y = 0,
// from the Hill determinant; truncation starts at harmonics -order..order
// and is doubled until converged.
// Throws UnstableRegion outside the first stability region.
double characteristic_exponent(double a, double q, int order = 20);

// sin^2(pi beta / 2) from the same determinant, without the stability check.
// Values in [0, 1] are stable; the monodromy trace is 2 - 4 * value.
double hill_discriminant(double a, double q, int order = 20);

// Computes beta and omega for all three axes and the planarity status.
// Throws UnstableRegion if any axis is unstable.
SecularFrequencies secular_frequencies(MathieuParams& params, const TrapConfig& cfg);

// Convenience: mathieu_parameters followed by secular_frequencies.
MathieuParams full_mathieu_parameters(const TrapConfig& cfg, Planarity* planarity = nullptr);

// Coefficient of x^2/2 in the DC potential energy along x and y (u/us^2).
double dc_curvature_x(const TrapConfig& cfg);
double dc_curvature_y(const TrapConfig& cfg);

// Coulomb constant scaled by the squared ion charge.
double pair_coupling(const TrapConfig& cfg);

}  // namespace mmgate
