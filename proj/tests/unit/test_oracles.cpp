#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/oracles.hpp"
#include "mmgate/trap_model.hpp"

namespace mmgate {
namespace {

using cplx = std::complex<double>;

TEST(Floquet, HarmonicLimit) {
  const auto f = oracles::floquet_exponent(0.25, 0.0);
  EXPECT_TRUE(f.stable);
  EXPECT_NEAR(f.beta, 0.5, 1e-10);
  EXPECT_NEAR(f.determinant, 1.0, 1e-9);
}

TEST(Floquet, MatchesHillDeterminant) {
  const auto f = oracles::floquet_exponent(7.81e-3, 0.1029);
  EXPECT_TRUE(f.stable);
  EXPECT_NEAR(f.beta, characteristic_exponent(7.81e-3, 0.1029), 1e-9);
  const auto p = full_mathieu_parameters(testing::planar_trap(1));
  const auto z = oracles::floquet_exponent(p.a_z, p.q_z);
  EXPECT_NEAR(z.beta, 0.0886, 1e-4);
  EXPECT_NEAR(z.beta, p.beta_z, 1e-9);
  EXPECT_NEAR(f.trace, 2.0 - 4.0 * hill_discriminant(7.81e-3, 0.1029), 1e-10);
}

TEST(Floquet, StabilityBoundaryNearPoint908) {
  EXPECT_TRUE(oracles::floquet_exponent(0.0, 0.9).stable);
  EXPECT_FALSE(oracles::floquet_exponent(0.0, 1.0).stable);
  double lo = 0.9, hi = 1.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracles::floquet_exponent(0.0, mid).stable ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 0.908, 1e-3);
}

TEST(FullEom, SingleIonSettlesAtNull) {
  const TrapConfig t = testing::planar_trap(1);
  const auto p = full_mathieu_parameters(t);
  Positions seed(1, 2);
  seed << 2.0, -1.0;
  oracles::EomOptions o;
  o.damping_rate = std::min(p.omega_x, p.omega_y);
  o.settle_tolerance = 1e-8;
  const auto rec = oracles::integrate_full_eom(t, seed, o);
  EXPECT_TRUE(rec.settled);
  double worst = 0.0;
  for (const auto& r : rec.positions) worst = std::max(worst, r.norm());
  EXPECT_LT(worst, 1e-6);
}

TEST(FullEom, TwoIonBreathingRatio) {
  const TrapConfig t = testing::planar_trap(2);
  const auto p = full_mathieu_parameters(t);
  const auto st = relax(seed_hexagonal(2, 7.0), p.omega_x, p.omega_y, t.ion_mass, t.ion_charge);
  oracles::EomOptions o;
  o.damping_rate = std::min(p.omega_x, p.omega_y);
  const auto rec = oracles::integrate_full_eom(t, st.positions, o);
  ASSERT_TRUE(rec.settled);
  const auto h = oracles::trajectory_harmonics(rec, 3);
  for (int c = 0; c < 4; ++c) {
    if (std::abs(h(c, 0)) < 1.0) continue;
    EXPECT_NEAR(h(c, 1) / h(c, 0), -p.q_x / 2, 0.05 * std::abs(p.q_x / 2));
  }
  // The secular energy is a pseudopotential quantity, exact only to O(q^2);
  // rises are bounded by that fraction of the energy dissipated.
  const auto& e = rec.secular_energy;
  const double drop = e.front() - e.back();
  ASSERT_GT(drop, 0.0);
  double rise = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) rise += std::max(0.0, e[i] - e[i - 1]);
  EXPECT_LT(rise, p.q_x * p.q_x * drop);
}

TEST(FullEom, RunawayDetected) {
  const TrapConfig t = testing::planar_trap(1);
  Positions seed(1, 2);
  seed << 5.0, 5.0;
  oracles::EomOptions o;
  o.runaway_radius = 1.0;
  EXPECT_THROW(oracles::integrate_full_eom(t, seed, o), Runaway);
}

TEST(FockFidelity, ZeroDisplacement) {
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 1);
  const Eigen::VectorXd n = Eigen::VectorXd::Constant(1, 0.5);
  EXPECT_NEAR(oracles::fock_fidelity(zero, units::kPi / 4, n), 1.0, 1e-10);
  EXPECT_NEAR(oracles::fock_fidelity(zero, 0.0, n), 0.5, 1e-10);
}

TEST(FockFidelity, MatchesClosedForm) {
  Eigen::MatrixXcd a(2, 1);
  a << cplx(0.1, 0.0), cplx(0.0, 0.0);
  const Eigen::VectorXd n0 = Eigen::VectorXd::Zero(1);
  EXPECT_NEAR(oracles::fock_fidelity(a, units::kPi / 4, n0, 30), fidelity(a, units::kPi / 4, n0), 1e-6);
  a << cplx(0.2, 0.0), cplx(0.0, 0.1);
  const Eigen::VectorXd n1 = Eigen::VectorXd::Ones(1);
  EXPECT_NEAR(oracles::fock_fidelity(a, units::kPi / 4, n1), fidelity(a, units::kPi / 4, n1), 1e-6);
  Eigen::MatrixXcd b(2, 2);
  b << cplx(0.05, 0.02), cplx(-0.03, 0.0), cplx(0.0, 0.04), cplx(0.01, -0.01);
  const Eigen::Vector2d nb(0.3, 0.8);
  EXPECT_NEAR(oracles::fock_fidelity(b, 0.7, nb), fidelity(b, 0.7, nb), 1e-6);
}

TEST(FockFidelity, GlobalPhaseInvariance) {
  Eigen::MatrixXcd a(2, 1);
  a << cplx(0.1, 0.05), cplx(-0.02, 0.07);
  const Eigen::VectorXd n = Eigen::VectorXd::Constant(1, 0.4);
  const cplx rot = std::polar(1.0, 0.9);
  EXPECT_NEAR(oracles::fock_fidelity(a * rot, 0.6, n), oracles::fock_fidelity(a, 0.6, n), 1e-9);
}

TEST(FockFidelity, TruncationGuard) {
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 1);
  EXPECT_THROW(oracles::fock_fidelity(zero, 0.0, Eigen::VectorXd::Constant(1, 5.0), 20),
               TruncationTooSmall);
}

}  // namespace
}  // namespace mmgate
