#pragma once

#include <cstdint>

#include "mmgate/micromotion.hpp"
#include "mmgate/oracles.hpp"
#include "mmgate/trap_model.hpp"

namespace mmgate::verify {

// Hill-determinant exponent vs monodromy over a deterministic grid of stable
// (a, q) points with |q| <= q_max.
struct TrapReport {
  int points = 0;
  double max_deviation = 0.0;
  double worst_a = 0.0, worst_q = 0.0;
};
TrapReport trap_grid(int points = 100, double q_max = 0.3, int monodromy_steps = 2048);

// Full-EOM steady orbit vs series reconstruction for the trap with
// `ion_count` ions seeded on a hexagonal lattice.
struct MicromotionReport {
  int ions = 0;
  long periods = 0;
  double rms_deviation = 0.0;  // um, over ions and samples of the last period
  double max_deviation = 0.0;  // um
  double periodicity_residual = 0.0;
  int series_iterations = 0;
};
MicromotionReport micromotion_orbit(const TrapConfig& trap, double seed_spacing,
                                    const MicromotionOptions& mm = {},
                                    oracles::EomOptions eom = {});

// Closed-form vs truncated-Fock fidelity on a seeded grid of random cases:
// |alpha| <= alpha_max, nbar <= nbar_max, 1..3 modes, phi12 in {0, pi/8, pi/4}.
struct FidelityReport {
  int cases = 0;
  double max_deviation = 0.0;
  double min_fidelity = 1.0, max_fidelity = 0.0;
};
FidelityReport fidelity_grid(int cases = 200, std::uint64_t seed = 20240611, double alpha_max = 0.3,
                             double nbar_max = 2.0, int truncation = 60);

}  // namespace mmgate::verify
