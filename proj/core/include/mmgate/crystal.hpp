#pragma once

#include <utility>
#include <vector>

#include "mmgate/coulomb.hpp"

namespace mmgate {

struct DistanceStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::vector<double> distances;
};

struct CrystalState {
  Positions positions;
  double gradient_norm = 0.0;  // max per-ion residual force, u um/us^2
  double force_tolerance = 0.0;
  bool converged = false;
  long steps = 0;
  DistanceStats nn_stats;
  // Total pseudopotential energy sampled every RelaxOptions::energy_stride steps.
  std::vector<double> energy_trace;
};

struct RelaxOptions {
  double step_factor = 0.02;       // dt = step_factor / max(omega_x, omega_y)
  double damping_factor = 0.5;     // eta = damping_factor * m * max(omega_x, omega_y)
  double tolerance_factor = 1e-8;  // force tol = factor * m * omega_x^2 * 1 um
  long max_steps = 1000000;
  double collision_distance = 0.1;  // um
  int energy_stride = 100;
};

// Centred hexagonal lattice; the outermost shell is filled by polar angle when
// N is not a centred hexagonal number. Centroid is moved to the origin.
Positions seed_hexagonal(int n, double spacing);

// Damped relaxation in the static pseudopotential
//   V = sum_i m/2 (wx^2 x_i^2 + wy^2 y_i^2) + sum_{i<j} k Z^2 / r_ij.
// Returns converged=false (best-so-far positions) if the step cap is reached.
// Throws CollisionDetected when two ions come closer than the guard distance.
CrystalState relax(const Positions& seed, double omega_x, double omega_y, double mass,
                   double charge, const RelaxOptions& opts = {});

double pseudopotential_energy(const Positions& r, double omega_x, double omega_y, double mass,
                              double charge);

// Per-ion nearest-neighbour distances and their aggregate.
DistanceStats nn_statistics(const Positions& r);

// Index of each ion's nearest neighbour.
std::vector<int> nearest_neighbours(const Positions& r);

// Lattice bonds: pairs (i, j) with no third ion inside the circle whose
// diameter is the segment i-j (Gabriel graph), and their length statistics.
struct BondGraph {
  std::vector<std::pair<int, int>> bonds;
  DistanceStats stats;
};
BondGraph bond_statistics(const Positions& r);

}  // namespace mmgate
