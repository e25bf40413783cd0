#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mmgate/coulomb.hpp"
#include "mmgate/trap_model.hpp"
#include "mmgate/units.hpp"

namespace mmgate::oracles {

struct FloquetResult {
  double beta = 0.0;   // valid when stable
  double trace = 0.0;  // monodromy trace
  double determinant = 0.0;
  bool stable = false;
};

// Monodromy of y'' + (a - 2q cos 2x) y = 0 over x in [0, pi] with fixed-step RK4.
FloquetResult floquet_exponent(double a, double q, int steps = 2048);

struct EomOptions {
  // Damping rate gamma (1/us). The force is -m gamma (r(t) - r(t - T)) / T,
  // a period-averaged velocity that vanishes on any T-periodic orbit.
  double damping_rate = 0.0;
  int steps_per_period = 2048;
  // um, max per-ion change between periods, held for half a secular period
  double settle_tolerance = 1e-7;
  long max_periods = 20000;
  int record_samples_per_period = 64;
  double runaway_radius = 1e3;  // um
  // Checked once per period; returning true aborts with NoSettle.
  std::function<bool()> cancel;
};

struct TrajectoryRecord {
  std::vector<double> times;         // us, last two periods, uniform
  std::vector<Positions> positions;  // per sample
  bool settled = false;
  long periods = 0;
  double periodicity_residual = 0.0;  // um
  // Secular energy at the end of each period: kinetic energy of the
  // period-averaged motion, pseudopotential energy of the period-averaged
  // positions and the Coulomb energy averaged over the period. It tracks the
  // true averaged dynamics only to O(q^2).
  std::vector<double> secular_energy;
};

// Integrates the unexpanded time-dependent equations of motion (Mathieu trap
// forces plus exact Coulomb repulsion) until the orbit repeats.
// Throws Runaway, NoSettle; N is limited to 19.
TrajectoryRecord integrate_full_eom(const TrapConfig& trap, const Positions& seed,
                                    const EomOptions& opts);

// Cosine harmonics (2N x (H+1)) of the last recorded period.
Eigen::MatrixXd trajectory_harmonics(const TrajectoryRecord& rec, int harmonics);

// Thermal gate fidelity by direct evaluation of tr(rho O^dag O) on a
// truncated Fock space, with O = <Phi0| U_ref^dag U |Phi0> built from
// matrix-exponential displacements. alpha is 2 x K.
double fock_fidelity(const Eigen::MatrixXcd& alpha, double phi12, const Eigen::VectorXd& nbar,
                     int truncation = 40, double target = units::kPi / 4.0);

}  // namespace mmgate::oracles
