#include "mmgate/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "mmgate/crystal.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/gate.hpp"

namespace mmgate::verify {

TrapReport trap_grid(int points, double q_max, int monodromy_steps) {
  TrapReport r;
  // Walk a (q, a) lattice and keep stable points until `points` are collected.
  const int side = static_cast<int>(std::ceil(std::sqrt(points * 2.0)));
  for (int i = 0; i < side && r.points < points; ++i) {
    const double q = -q_max + 2.0 * q_max * (i + 0.5) / side;
    for (int j = 0; j < side && r.points < points; ++j) {
      const double a = -0.04 + 0.84 * (j + 0.5) / side;
      const auto f = oracles::floquet_exponent(a, q, monodromy_steps);
      if (!f.stable || std::abs(f.trace) > 2.0 - 1e-6) continue;
      double beta;
      try {
        beta = characteristic_exponent(a, q);
      } catch (const UnstableRegion&) {
        continue;
      }
      const double d = std::abs(beta - f.beta);
      if (d > r.max_deviation || r.points == 0) {
        r.max_deviation = std::max(r.max_deviation, d);
        r.worst_a = a;
        r.worst_q = q;
      }
      ++r.points;
    }
  }
  return r;
}

MicromotionReport micromotion_orbit(const TrapConfig& trap, double seed_spacing,
                                    const MicromotionOptions& mm, oracles::EomOptions eom) {
  MathieuParams p = mathieu_parameters(trap);
  secular_frequencies(p, trap);
  const CrystalState st = relax(seed_hexagonal(trap.ion_count, seed_spacing), p.omega_x,
                                p.omega_y, trap.ion_mass, trap.ion_charge);
  const MicromotionExpansion e = self_consistent_positions(st.positions, trap, mm);
  if (eom.damping_rate <= 0.0) eom.damping_rate = std::min(p.omega_x, p.omega_y);
  const oracles::TrajectoryRecord rec = oracles::integrate_full_eom(trap, st.positions, eom);
  MicromotionReport r;
  r.ions = trap.ion_count;
  r.periods = rec.periods;
  r.periodicity_residual = rec.periodicity_residual;
  r.series_iterations = e.iterations;
  const std::size_t per = rec.positions.size() / 2;
  double sum = 0.0;
  long count = 0;
  for (std::size_t s = rec.positions.size() - per; s < rec.positions.size(); ++s) {
    const Positions series = e.at_phase(trap.rf_angular_freq * rec.times[s]);
    const Eigen::VectorXd d = (rec.positions[s] - series).rowwise().norm();
    sum += d.squaredNorm();
    count += d.size();
    r.max_deviation = std::max(r.max_deviation, d.maxCoeff());
  }
  r.rms_deviation = std::sqrt(sum / static_cast<double>(std::max(1L, count)));
  return r;
}

FidelityReport fidelity_grid(int cases, std::uint64_t seed, double alpha_max, double nbar_max,
                             int truncation) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double phis[3] = {0.0, units::kPi / 8.0, units::kPi / 4.0};
  FidelityReport r;
  for (int c = 0; c < cases; ++c) {
    const int modes = 1 + c % 3;
    Eigen::MatrixXcd alpha(2, modes);
    Eigen::VectorXd nbar(modes);
    for (int k = 0; k < modes; ++k) {
      for (int j = 0; j < 2; ++j)
        alpha(j, k) = std::polar(alpha_max * unit(rng), units::kTwoPi * unit(rng));
      nbar[k] = nbar_max * unit(rng);
    }
    const double phi = phis[(c / 3) % 3];
    const double closed = fidelity(alpha, phi, nbar);
    const double fock = oracles::fock_fidelity(alpha, phi, nbar, truncation);
    r.max_deviation = std::max(r.max_deviation, std::abs(closed - fock));
    r.min_fidelity = std::min(r.min_fidelity, closed);
    r.max_fidelity = std::max(r.max_fidelity, closed);
    ++r.cases;
  }
  return r;
}

}  // namespace mmgate::verify
