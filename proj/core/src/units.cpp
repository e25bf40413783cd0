#include "mmgate/units.hpp"

namespace mmgate::units {

namespace {
// SI -> internal conversions: 1 m = 1e6 um, 1 s = 1e6 us.
constexpr double kEnergyToInternal = 1.0 / kAtomicMass;  // J -> u m^2/s^2 = u um^2/us^2
}  // namespace

double coulomb_constant() {
  const double si = kElementaryCharge * kElementaryCharge / (4.0 * kPi * kVacuumPermittivity);
  // J m -> u um^2/us^2 * um
  return si * kEnergyToInternal * 1e6;
}

double volt_energy() { return kElementaryCharge * kEnergyToInternal; }

double hbar() {
  // J s -> u um^2/us^2 * us
  return kHbarSI * kEnergyToInternal * 1e6;
}

double thermal_rate_from_kelvin(double kelvin) { return kBoltzmannSI * kelvin / kHbarSI * 1e-6; }

}  // namespace mmgate::units
