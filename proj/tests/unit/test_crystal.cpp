#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "mmgate/coulomb.hpp"
#include "mmgate/crystal.hpp"
#include "mmgate/errors.hpp"

namespace mmgate {
namespace {

constexpr double kMass = 171.0;

TEST(SeedHexagonal, SingleIonAtOrigin) {
  const Positions r = seed_hexagonal(1, 7.0);
  ASSERT_EQ(r.rows(), 1);
  EXPECT_EQ(r.norm(), 0.0);
}

TEST(SeedHexagonal, FirstShellHexagon) {
  const Positions r = seed_hexagonal(7, 7.0);
  ASSERT_EQ(r.rows(), 7);
  int centre = 0;
  for (Eigen::Index i = 0; i < 7; ++i) {
    const double d = r.row(i).norm();
    if (d < 1e-12)
      ++centre;
    else
      EXPECT_NEAR(d, 7.0, 1e-12);
  }
  EXPECT_EQ(centre, 1);
  EXPECT_NEAR(nn_statistics(r).max, 7.0, 1e-12);
}

TEST(SeedHexagonal, SixShellsReachFortyTwoMicrons) {
  const Positions r = seed_hexagonal(127, 7.0);
  ASSERT_EQ(r.rows(), 127);
  EXPECT_NEAR(r.rowwise().norm().maxCoeff(), 42.0, 1e-9);
  EXPECT_LT(r.colwise().sum().norm(), 1e-9);
  EXPECT_NEAR(nn_statistics(r).min, 7.0, 1e-9);
}

TEST(SeedHexagonal, PartialShellCentred) {
  const Positions r = seed_hexagonal(10, 7.0);
  ASSERT_EQ(r.rows(), 10);
  EXPECT_LT(r.colwise().sum().norm(), 1e-9);
  EXPECT_GT(min_pair_distance(r), 6.0);
  EXPECT_THROW(seed_hexagonal(0, 7.0), ConfigError);
}

TEST(NnStatistics, TwoAndThreeIons) {
  Positions two(2, 2);
  two << 0, 0, 3, 4;
  const auto s2 = nn_statistics(two);
  EXPECT_DOUBLE_EQ(s2.min, 5.0);
  EXPECT_DOUBLE_EQ(s2.max, 5.0);
  EXPECT_DOUBLE_EQ(s2.mean, 5.0);
  Positions tri(3, 2);
  tri << 0, 0, 2, 0, 1, std::sqrt(3.0);
  const auto s3 = nn_statistics(tri);
  EXPECT_NEAR(s3.min, 2.0, 1e-12);
  EXPECT_NEAR(s3.max, 2.0, 1e-12);
  EXPECT_EQ(s3.distances.size(), 3u);
}

TEST(Coulomb, DerivativesMatchFiniteDifferences) {
  Positions r(4, 2);
  r << 0.3, -0.2, 7.1, 0.4, -3.0, 6.2, 2.5, -5.9;
  const double k = 138935.4576923951;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  coulomb_derivatives(r, k, g, h);
  EXPECT_LT((g - coulomb_gradient(r, k)).norm(), 1e-12 * g.norm());
  const Eigen::VectorXd x = flatten(r);
  const double step = 1e-4;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    const double fd = (coulomb_energy(unflatten(xp), k) - coulomb_energy(unflatten(xm), k)) / (2 * step);
    EXPECT_NEAR(fd, g[i], 1e-6 * g.cwiseAbs().maxCoeff());
    const Eigen::VectorXd hfd = (coulomb_gradient(unflatten(xp), k) - coulomb_gradient(unflatten(xm), k)) / (2 * step);
    EXPECT_LT((hfd - h.col(i)).norm(), 1e-6 * h.cwiseAbs().maxCoeff());
  }
  EXPECT_LT((h - h.transpose()).norm(), 1e-12 * h.norm());
}

TEST(Coulomb, CoincidentIonsRejected) {
  Positions r(2, 2);
  r << 1, 1, 1, 1;
  EXPECT_THROW(coulomb_gradient(r, 1.0), CoincidentIons);
}

TEST(Relax, SingleIonAtOrigin) {
  const auto st = relax(seed_hexagonal(1, 7.0), 1.0, 1.2, kMass, 1.0);
  EXPECT_TRUE(st.converged);
  EXPECT_EQ(st.positions.norm(), 0.0);
  EXPECT_EQ(st.gradient_norm, 0.0);
}

TEST(Relax, TwoIonsOnSoftAxis) {
  const double wx = 1.0, wy = 1.3;
  Positions seed(2, 2);
  seed << -4.0, 0.3, 4.0, -0.3;
  const auto st = relax(seed, wx, wy, kMass, 1.0);
  ASSERT_TRUE(st.converged);
  const double d = std::cbrt(2.0 * 138935.4576923951 / (kMass * wx * wx));
  EXPECT_NEAR((st.positions.row(0) - st.positions.row(1)).norm(), d, 1e-6);
  EXPECT_NEAR(std::abs(st.positions(0, 1)), 0.0, 1e-6);
}

TEST(Relax, EnergyNonIncreasingAndForceBalanced) {
  const TrapConfig t = testing::planar_trap(19);
  const auto p = full_mathieu_parameters(t);
  const auto st = relax(seed_hexagonal(19, 7.0), p.omega_x, p.omega_y, kMass, 1.0);
  ASSERT_TRUE(st.converged);
  EXPECT_LE(st.gradient_norm, st.force_tolerance);
  ASSERT_GT(st.energy_trace.size(), 2u);
  for (std::size_t i = 1; i < st.energy_trace.size(); ++i)
    EXPECT_LE(st.energy_trace[i], st.energy_trace[i - 1] * (1 + 1e-14));
  EXPECT_NEAR(st.energy_trace.back(), pseudopotential_energy(st.positions, p.omega_x, p.omega_y, kMass, 1.0),
              1e-6 * std::abs(st.energy_trace.back()));
}

TEST(Relax, InversionSymmetryPreserved) {
  const TrapConfig t = testing::planar_trap(19);
  const auto p = full_mathieu_parameters(t);
  const auto st = relax(seed_hexagonal(19, 7.0), p.omega_x, p.omega_y, kMass, 1.0);
  for (Eigen::Index i = 0; i < st.positions.rows(); ++i) {
    double best = 1e9;
    for (Eigen::Index j = 0; j < st.positions.rows(); ++j)
      best = std::min(best, (st.positions.row(i) + st.positions.row(j)).norm());
    EXPECT_LT(best, 1e-3);
  }
}

TEST(Relax, ScaleCovariance) {
  const double wx = 1.1, wy = 1.4, s = 1.5;
  const auto a = relax(seed_hexagonal(7, 7.0), wx, wy, kMass, 1.0);
  const auto b = relax(seed_hexagonal(7, 7.0), s * wx, s * wy, kMass, 1.0);
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_NEAR(b.nn_stats.mean / a.nn_stats.mean, std::pow(s, -2.0 / 3.0), 0.01 * std::pow(s, -2.0 / 3.0));
  EXPECT_NEAR(b.positions.norm() / a.positions.norm(), std::pow(s, -2.0 / 3.0), 1e-4);
}

TEST(Relax, StepCapReturnsUnconverged) {
  RelaxOptions o;
  o.max_steps = 10;
  const auto st = relax(seed_hexagonal(7, 7.0), 1.0, 1.2, kMass, 1.0, o);
  EXPECT_FALSE(st.converged);
  EXPECT_EQ(st.steps, 10);
}

TEST(Relax, CollisionGuard) {
  Positions seed(2, 2);
  seed << 0.0, 0.0, 0.05, 0.0;
  EXPECT_THROW(relax(seed, 1.0, 1.2, kMass, 1.0), CollisionDetected);
}

TEST(BondStatistics, HexagonBonds) {
  const auto g = bond_statistics(seed_hexagonal(7, 7.0));
  EXPECT_EQ(g.bonds.size(), 12u);
  EXPECT_NEAR(g.stats.min, 7.0, 1e-12);
  EXPECT_NEAR(g.stats.max, 7.0, 1e-12);
}

}  // namespace
}  // namespace mmgate
