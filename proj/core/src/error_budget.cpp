#include <cmath>

#include "mmgate/errors.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/units.hpp"

namespace mmgate {

ErrorBudget error_budget(double distance, double waist, double delta_r, double eta_z,
                         double nbar_z, double q) {
  if (!(waist > 0)) throw ConfigError("error_budget: waist must be positive");
  ErrorBudget b;
  b.distance = distance;
  b.delta_r = delta_r;
  b.eta_z = eta_z;
  b.nbar_z = nbar_z;
  const double pi2 = units::kPi * units::kPi;
  b.crosstalk = std::exp(-2.0 * (distance / waist) * (distance / waist));
  b.thermal_spread = pi2 / 4.0 * std::pow(delta_r / waist, 4);
  b.lamb_dicke = pi2 * std::pow(eta_z, 4) * (nbar_z * nbar_z + nbar_z + 0.125);
  b.micromotion_residual = std::pow(std::abs(q), 3);
  return b;
}

ErrorBudget error_budget(const GateConfig& g, const Positions& crystal,
                         const TransverseModeSet& modes, double delta_r, double nbar_z,
                         double mass, double q) {
  const auto [i, j] = g.pair;
  if (i < 0 || j < 0 || i >= crystal.rows() || j >= crystal.rows())
    throw ConfigError("error_budget: pair index out of range");
  const double d = (crystal.row(i) - crystal.row(j)).norm();
  const double wz = modes.frequencies.maxCoeff();
  return error_budget(d, g.waist, delta_r, lamb_dicke_parameter(g.delta_k, mass, wz), nbar_z, q);
}

double thermal_width(double thermal_rate, double mass, double omega_x, double omega_y) {
  const double kt = units::hbar() * thermal_rate;
  return std::sqrt(kt / (mass * omega_x * omega_x) + kt / (mass * omega_y * omega_y));
}

}  // namespace mmgate
