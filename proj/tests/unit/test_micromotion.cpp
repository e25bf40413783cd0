#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "mmgate/crystal.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/trap_model.hpp"

namespace mmgate {
namespace {

TEST(DrivenMathieu, NoDriveModulation) {
  const auto s = solve_driven_mathieu(0.02, 0.0);
  ASSERT_FALSE(s.coefficients.empty());
  EXPECT_NEAR(s.coefficients[0], 1.0 / 0.02, 1e-12);
  for (std::size_t n = 1; n < s.coefficients.size(); ++n) EXPECT_EQ(s.coefficients[n], 0.0);
}

TEST(DrivenMathieu, FirstHarmonicRatio) {
  const double a = 1e-3, q = -0.05;
  const auto s = solve_driven_mathieu(a, q);
  const auto& c = s.coefficients;
  ASSERT_GE(c.size(), 3u);
  const double r1 = c[1] / c[0];
  EXPECT_NEAR(r1, 2 * q / (a - 4), 1e-3 * std::abs(q / 2));
  EXPECT_NEAR(r1, -q / 2, 0.01 * std::abs(q / 2));
  EXPECT_NEAR(c[2] / c[0], q * q / 32, 0.02 * q * q / 32);
}

TEST(DrivenMathieu, RecurrenceSatisfied) {
  const double a = 7.8e-3, q = 0.1029;
  const auto s = solve_driven_mathieu(a, q);
  const std::vector<double> f{1.0};
  EXPECT_LT(driven_mathieu_residual(a, q, s.coefficients, f), 1e-10);
  const std::vector<double> g{0.3, -0.2, 0.05};
  const auto t = solve_driven_mathieu(a, q, g);
  EXPECT_LT(driven_mathieu_residual(a, q, t.coefficients, g), 1e-10);
}

TEST(DrivenMathieu, ResonantDriveRejected) {
  EXPECT_THROW(solve_driven_mathieu(0.0, 0.0), ResonantDrive);
  EXPECT_THROW(solve_driven_mathieu(4.0, 0.0, std::vector<double>{0.0, 1.0}), ResonantDrive);
}

TEST(QuadraticExpansion, SingleIonHasNoCoulombTerms) {
  const TrapConfig t = testing::planar_trap(1);
  Positions r = Positions::Zero(1, 2);
  const auto e = quadratic_expansion(r, t);
  EXPECT_EQ(e.hessian.norm(), 0.0);
  EXPECT_EQ(e.gradient.norm(), 0.0);
  const auto nc = normal_coordinates(e, t);
  EXPECT_NEAR(std::abs(nc.q.determinant()), 1.0, 1e-12);
  const Eigen::VectorXd sorted = [&] {
    Eigen::VectorXd d = e.dc_diagonal;
    std::sort(d.data(), d.data() + d.size());
    return d;
  }();
  EXPECT_LT((nc.lambda - sorted).norm(), 1e-12 * sorted.norm());
}

TEST(QuadraticExpansion, CoulombGradientNonzeroAtEquilibrium) {
  const auto s = testing::small_crystal(7);
  const auto e = quadratic_expansion(s.crystal.positions, s.trap);
  EXPECT_GT(e.gradient.norm(), 1.0);
  const auto nc = normal_coordinates(e, s.trap);
  const Eigen::MatrixXd m = Eigen::MatrixXd(e.dc_diagonal.asDiagonal()) + e.hessian;
  const Eigen::MatrixXd d = nc.q * m * nc.q.transpose();
  EXPECT_LT((d - Eigen::MatrixXd(nc.lambda.asDiagonal())).cwiseAbs().maxCoeff(),
            1e-10 * nc.lambda.cwiseAbs().maxCoeff());
}

TEST(SelfConsistent, SingleIonStaysAtNull) {
  const TrapConfig t = testing::planar_trap(1);
  const auto e = self_consistent_positions(Positions::Zero(1, 2), t);
  EXPECT_TRUE(e.converged);
  EXPECT_LT(e.r0.norm(), 1e-12);
  EXPECT_LT(e.r1.norm(), 1e-12);
  EXPECT_LT(e.r2.norm(), 1e-12);
  EXPECT_LT(micromotion_amplitudes(e)[0], 1e-12);
}

TEST(SelfConsistent, BreathingRatioAndFixedPoint) {
  const auto s = testing::small_crystal(7);
  ASSERT_TRUE(s.mm.converged);
  const double q = s.mp.q_x;
  for (int i = 0; i < 7; ++i) {
    const double r0 = s.mm.r0.row(i).norm();
    if (r0 < 1.0) {
      EXPECT_LT(s.mm.amplitude[i], 0.05);
      continue;
    }
    const double ratio = s.mm.r1.row(i).dot(s.mm.r0.row(i)) / (r0 * r0);
    EXPECT_NEAR(ratio, -q / 2, 0.05 * std::abs(q / 2));
    EXPECT_NEAR(s.mm.amplitude[i] / r0, std::abs(q / 2), 0.1 * std::abs(q / 2));
  }
  const auto again = self_consistent_positions(s.mm, s.trap);
  EXPECT_LT(mean_displacement(again.r0, s.mm.r0), 1e-4);
  EXPECT_LT(mean_displacement(s.mm.r0, s.crystal.positions), 0.5);
}

TEST(SelfConsistent, StaticExpansionAlsoConverges) {
  const auto s = testing::small_crystal(7);
  MicromotionOptions o;
  o.expansion = ExpansionKind::Static;
  const auto e = self_consistent_positions(s.crystal.positions, s.trap, o);
  EXPECT_TRUE(e.converged);
  EXPECT_EQ(e.expansion, ExpansionKind::Static);
  EXPECT_LT(mean_displacement(e.r0, s.mm.r0), 0.05);
}

TEST(SelfConsistent, AtPhaseMatchesHarmonics) {
  const auto s = testing::small_crystal(7);
  const Positions p0 = s.mm.at_phase(0.0);
  Eigen::VectorXd sum = s.mm.harmonics.rowwise().sum();
  EXPECT_LT((flatten(p0) - sum).norm(), 1e-9);
  const Positions pp = s.mm.at_phase(units::kPi);
  EXPECT_LT((flatten(pp) - flatten(s.mm.r0) + flatten(s.mm.r1) - flatten(s.mm.r2)).norm(), 0.01);
}

TEST(SelfConsistent, RejectsTooFewHarmonics) {
  MicromotionOptions o;
  o.harmonics = 1;
  EXPECT_THROW(self_consistent_positions(Positions::Zero(1, 2), testing::planar_trap(1), o),
               ConfigError);
}

TEST(MeanDisplacement, Basic) {
  Positions a(2, 2), b(2, 2);
  a << 0, 0, 1, 1;
  b << 3, 4, 1, 1;
  EXPECT_DOUBLE_EQ(mean_displacement(a, b), 2.5);
}

}  // namespace
}  // namespace mmgate
