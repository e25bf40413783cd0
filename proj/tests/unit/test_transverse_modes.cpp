#include <cmath>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/transverse_modes.hpp"
#include "mmgate/units.hpp"

namespace mmgate {
namespace {

constexpr double kOmegaZ = 13.9;

MicromotionExpansion breathing_pair(double d, double q, double rf) {
  MicromotionExpansion e;
  e.r0.resize(2, 2);
  e.r0 << -d / 2, 0.0, d / 2, 0.0;
  e.r1 = -(q / 2) * e.r0;
  e.r2 = Positions::Zero(2, 2);
  e.harmonics = Eigen::MatrixXd::Zero(4, 3);
  e.harmonics.col(0) = flatten(e.r0);
  e.harmonics.col(1) = flatten(e.r1);
  e.q = q;
  e.rf_angular_freq = rf;
  e.amplitude = {std::abs(q / 2) * d / 2, std::abs(q / 2) * d / 2};
  e.converged = true;
  return e;
}

TEST(Coupling, NoMicromotionGivesStaticAverage) {
  const double d = 8.0;
  auto e = breathing_pair(d, 0.0, 314.0);
  const auto c = time_averaged_coupling(e);
  EXPECT_LT((c.avg_inv_r3 - c.static_inv_r3).norm(), 1e-15 * c.static_inv_r3.norm());
  EXPECT_NEAR(c.static_inv_r3(0, 1), 1.0 / (d * d * d), 1e-15);
  EXPECT_LT(c.first_harmonic.norm(), 1e-15);
}

TEST(Coupling, BreathingPairMatchesQuadrature) {
  const double d = 8.0, q = -0.051;
  const auto c = time_averaged_coupling(breathing_pair(d, q, 314.0), 512);
  double avg = 0.0, h1 = 0.0;
  const int n = 100000;
  for (int s = 0; s < n; ++s) {
    const double th = units::kTwoPi * (s + 0.5) / n;
    const double v = std::pow(1.0 - (q / 2) * std::cos(th), -3.0);
    avg += v / n;
    h1 += 2.0 * std::cos(th) * v / n;
  }
  const double st = c.static_inv_r3(0, 1);
  EXPECT_NEAR(c.avg_inv_r3(0, 1) / st, avg, 1e-10);
  EXPECT_NEAR(avg, 1 + 3 * q * q / 4, 1e-5);
  EXPECT_NEAR(c.first_harmonic(0, 1) / st, h1, 1e-10);
  EXPECT_NEAR(h1, 1.5 * q, std::pow(std::abs(q), 3));
}

TEST(Modes, SingleIonAtOmegaZ) {
  const TrapConfig t = testing::planar_trap(1);
  const auto set = transverse_mode_set(Eigen::MatrixXd::Zero(1, 1), kOmegaZ, t, false);
  ASSERT_EQ(set.frequencies.size(), 1);
  EXPECT_DOUBLE_EQ(set.frequencies[0], kOmegaZ);
  EXPECT_DOUBLE_EQ(std::abs(set.modes(0, 0)), 1.0);
}

TEST(Modes, IdenticalSetsHaveZeroShift) {
  const auto s = testing::small_crystal(7);
  const auto c = static_coupling(s.mm.r0);
  const auto set = transverse_mode_set(c.static_inv_r3, s.mp.omega_z, s.trap, false);
  const auto rep = mode_shift_report(set, set);
  EXPECT_EQ(rep.mean_abs_shift, 0.0);
  for (std::size_t k = 0; k < rep.shift.size(); ++k) {
    EXPECT_EQ(rep.shift[k], 0.0);
    EXPECT_EQ(rep.match[k], static_cast<int>(k));
    EXPECT_NEAR(rep.overlap[k], 1.0, 1e-12);
  }
}

TEST(Modes, MicromotionLowersModesSlightly) {
  const auto s = testing::small_crystal(7);
  const auto cs = static_coupling(s.mm.r0);
  const auto ca = time_averaged_coupling(s.mm);
  const auto st = transverse_mode_set(cs.static_inv_r3, s.mp.omega_z, s.trap, false);
  const auto av = transverse_mode_set(ca.avg_inv_r3, s.mp.omega_z, s.trap, true);
  const auto rep = mode_shift_report(av, st);
  EXPECT_GT(rep.mean_abs_shift, 0.0);
  EXPECT_LT(rep.max_overlap_deficit, 1e-3);
  for (double sh : rep.shift) EXPECT_LE(sh, 1e-12);
  EXPECT_NEAR(av.frequencies.maxCoeff(), s.mp.omega_z, 1e-9 * s.mp.omega_z);
}

TEST(Modes, CouplingFormsDifferByFactorTwo) {
  const auto s = testing::small_crystal(7);
  const auto c = static_coupling(s.mm.r0);
  const auto lit = transverse_mode_set(c.static_inv_r3, s.mp.omega_z, s.trap, false,
                                       TransverseCoupling::Literal);
  const auto pair = transverse_mode_set(c.static_inv_r3, s.mp.omega_z, s.trap, false,
                                        TransverseCoupling::PairExpansion);
  const double w2 = s.mp.omega_z * s.mp.omega_z;
  for (Eigen::Index k = 0; k < lit.frequencies.size(); ++k) {
    const double dl = w2 - lit.frequencies[k] * lit.frequencies[k];
    const double dp = w2 - pair.frequencies[k] * pair.frequencies[k];
    EXPECT_NEAR(dl, 2 * dp, 1e-8 * w2);
  }
}

TEST(Modes, TooWeakConfinementIsImaginary) {
  const auto s = testing::small_crystal(7);
  const auto c = static_coupling(s.mm.r0);
  EXPECT_THROW(transverse_mode_set(c.static_inv_r3, 0.05, s.trap, false), ImaginaryFrequency);
}

TEST(Rwa, ScalingLaws) {
  const auto s = testing::small_crystal(7);
  const auto c = time_averaged_coupling(s.mm);
  const auto set = transverse_mode_set(c.avg_inv_r3, s.mp.omega_z, s.trap, true);
  const double rf = s.trap.rf_angular_freq;
  const auto b1 = rwa_perturbation_bound(c, set, rf, s.mp.q_x, s.trap);
  const auto b2 = rwa_perturbation_bound(c, set, 2 * rf, s.mp.q_x, s.trap);
  const auto b0 = rwa_perturbation_bound(c, set, rf, 0.0, s.trap);
  EXPECT_NEAR(b2.frequency_bound, b1.frequency_bound / 4, 1e-15);
  EXPECT_NEAR(b2.norm_bound, b1.norm_bound / 4, 1e-15);
  EXPECT_EQ(b0.frequency_bound, 0.0);
  const double r = s.mp.omega_z / rf;
  EXPECT_NEAR(b1.frequency_bound, std::abs(s.mp.q_x) * r * r, 1e-12);
  EXPECT_LT(b1.frequency_bound, 1e-3);
}

}  // namespace
}  // namespace mmgate
