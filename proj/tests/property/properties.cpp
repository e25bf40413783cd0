// Invariant checks that hold for any valid input; no reference values.
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/trap_model.hpp"

namespace mmgate {
namespace {

using testing::random_vector;
using testing::synthetic_modes;

TEST(RecurrenceResidual, DrivenMathieuSeriesSatisfiesEquation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-0.05, 0.6), uq(-0.3, 0.3), uf(-1.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const double a = ua(rng), q = uq(rng);
    try {
      characteristic_exponent(a, q);
    } catch (const UnstableRegion&) {
      continue;
    }
    if (std::abs(a) < 1e-3) continue;
    std::vector<double> drive(4);
    for (double& f : drive) f = uf(rng);
    const auto sol = solve_driven_mathieu(a, q, drive);
    double scale = 0.0;
    for (double f : drive) scale = std::max(scale, std::abs(f));
    scale *= std::max(1.0, std::abs(sol.coefficients[0]));
    EXPECT_LT(driven_mathieu_residual(a, q, sol.coefficients, drive), 1e-10 * scale)
        << "a=" << a << " q=" << q;
    ++checked;
  }
}

TEST(RecurrenceResidual, UnitDriveAgainstRecurrenceRows) {
  for (double a : {0.01, 0.2, -0.02}) {
    for (double q : {0.05, -0.1, 0.25}) {
      const auto c = solve_driven_mathieu(a, q).coefficients;
      ASSERT_GE(c.size(), 3u);
      EXPECT_NEAR(a * c[0] - q * c[1], 1.0, 1e-12);
      EXPECT_NEAR((a - 4.0) * c[1] - q * (2.0 * c[0] + c[2]), 0.0, 1e-12 * std::abs(c[0]));
      for (std::size_t n = 2; n + 1 < c.size(); ++n)
        EXPECT_NEAR((a - 4.0 * n * n) * c[n] - q * (c[n - 1] + c[n + 1]), 0.0,
                    1e-12 * std::abs(c[0]));
    }
  }
}

TEST(NormalCoordinates, OrthogonalAndDiagonalising) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  for (int trial = 0; trial < 5; ++trial) {
    TrapConfig trap = testing::planar_trap(6 + trial);
    trap.dc_voltage = -0.5 - 0.2 * trial;
    Positions r(trap.ion_count, 2);
    for (Eigen::Index i = 0; i < r.rows(); ++i) r.row(i) << pos(rng), pos(rng);
    const auto e = quadratic_expansion(r, trap);
    const auto nc = normal_coordinates(e, trap);
    const Eigen::Index n = nc.q.rows();
    EXPECT_LT((nc.q * nc.q.transpose() - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    Eigen::MatrixXd total = e.hessian;
    total.diagonal() += e.dc_diagonal;
    Eigen::MatrixXd d = nc.q * total * nc.q.transpose();
    const double scale = total.norm();
    d.diagonal() -= nc.lambda;
    EXPECT_LT(d.norm(), 1e-10 * scale);
  }
}

TEST(GateMaps, AlphaLinearPhaseQuadratic) {
  const auto modes = synthetic_modes(9, 1.9, 2.3, 3);
  GateConfig g;
  g.pair = {2, 5};
  g.segments = 7;
  g.gate_time = 20.0;
  g.detuning = 2.05;
  const PairModulation flat{unit_modulation(), unit_modulation()};
  const double mass = 171.0;
  const AlphaTensor a = alpha_map(modes, g, flat, mass);
  const Eigen::MatrixXd w = phase_map(modes, g, flat, mass);
  EXPECT_LT((w - w.transpose()).norm(), 1e-14 * w.norm());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uc(-3.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd x = random_vector(g.segments, rng);
    const double c = uc(rng);
    const Eigen::MatrixXcd ax = apply_alpha(a, x), acx = apply_alpha(a, c * x);
    EXPECT_LT((acx - c * ax).norm(), 1e-12 * std::max(1e-300, (c * ax).norm()));
    const double phi = x.dot(w * x), phic = (c * x).dot(w * (c * x));
    EXPECT_NEAR(phic, c * c * phi, 1e-12 * std::abs(c * c * phi) + 1e-300);
    const Eigen::VectorXd y = random_vector(g.segments, rng);
    EXPECT_LT((apply_alpha(a, x + y) - ax - apply_alpha(a, y)).norm(), 1e-12 * (ax.norm() + 1));
  }
}

TEST(Fidelity, BoundedForRandomDraws) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> mag(0.0, 1.5), ph(0.0, units::kTwoPi), nb(0.0, 20.0);
  for (int t = 0; t < 10000; ++t) {
    const int k = 1 + t % 4;
    Eigen::MatrixXcd alpha(2, k);
    Eigen::VectorXd nbar(k);
    for (int j = 0; j < k; ++j) {
      alpha(0, j) = std::polar(mag(rng), ph(rng));
      alpha(1, j) = std::polar(mag(rng), ph(rng));
      nbar[j] = nb(rng);
    }
    const double f = fidelity(alpha, ph(rng), nbar);
    ASSERT_GE(f, -1e-12);
    ASSERT_LE(f, 1.0 + 1e-12);
  }
}

TEST(Fidelity, UnityOnlyAtTargetWithoutDisplacement) {
  const Eigen::VectorXd nbar = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
  EXPECT_NEAR(fidelity(zero, units::kPi / 4, nbar), 1.0, 1e-14);
  EXPECT_LT(fidelity(zero, units::kPi / 4 + 1e-3, nbar), 1.0);
  Eigen::MatrixXcd small = zero;
  small(0, 1) = 1e-3;
  EXPECT_LT(fidelity(small, units::kPi / 4, nbar), 1.0);
}

TEST(Fidelity, NonIncreasingInTemperature) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mag(0.0, 0.5), ph(0.0, units::kTwoPi);
  const auto modes = synthetic_modes(3, 1.8, 2.3, 21);
  for (int t = 0; t < 200; ++t) {
    Eigen::MatrixXcd alpha(2, 3);
    for (int j = 0; j < 3; ++j) {
      alpha(0, j) = std::polar(mag(rng), ph(rng));
      alpha(1, j) = std::polar(mag(rng), ph(rng));
    }
    const double phi = units::kPi / 4 + 0.2 * (ph(rng) / units::kTwoPi - 0.5);
    double prev = 2.0;
    for (double rate = 0.1; rate < 400.0; rate *= 1.7) {
      const double f = fidelity(alpha, phi, thermal_occupations(modes.frequencies, rate));
      EXPECT_LE(f, prev + 1e-13);
      prev = f;
    }
  }
}

TEST(ThermalOccupations, NonNegativeAndDecreasingInFrequency) {
  Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(50, 0.1, 20.0);
  const Eigen::VectorXd n = thermal_occupations(w, 30.0);
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    EXPECT_GE(n[i], 0.0);
    if (i) EXPECT_LT(n[i], n[i - 1]);
  }
}

TEST(QuadraticProxy, PositiveSemidefinite) {
  const auto modes = synthetic_modes(6, 1.9, 2.3, 8);
  GateConfig g;
  g.pair = {0, 3};
  g.segments = 9;
  g.gate_time = 15.0;
  g.detuning = 2.4;
  const PairModulation flat{unit_modulation(), unit_modulation()};
  const AlphaTensor a = alpha_map(modes, g, flat, 171.0);
  const Eigen::MatrixXd m = infidelity_quadratic_proxy(a, thermal_occupations(modes.frequencies, 50.0));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd x = random_vector(g.segments, rng);
    EXPECT_GE(x.dot(m * x), -1e-14 * m.norm() * x.squaredNorm());
  }
}

TEST(TrapModel, LaplaceSumRuleAndSymmetry) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-5.0, 5.0), v(10.0, 300.0), g(-0.3, 0.3);
  for (int t = 0; t < 100; ++t) {
    TrapConfig c = testing::planar_trap(1);
    c.dc_voltage = u(rng);
    c.rf_voltage = v(rng);
    c.anisotropy = g(rng);
    const auto p = mathieu_parameters(c);
    EXPECT_NEAR(p.a_x + p.a_y + p.a_z, 0.0, 1e-15 * (std::abs(p.a_x) + std::abs(p.a_y) + 1e-300));
    EXPECT_NEAR(p.q_x + p.q_y + p.q_z, 0.0, 1e-15 * std::abs(p.q_z));
  }
  std::uniform_real_distribution<double> ua(-0.05, 0.8), uq(0.0, 0.5);
  for (int checked = 0; checked < 100;) {
    const double a = ua(rng), q = uq(rng);
    double beta;
    try {
      beta = characteristic_exponent(a, q);
    } catch (const UnstableRegion&) {
      EXPECT_THROW(characteristic_exponent(a, -q), UnstableRegion);
      continue;
    }
    EXPECT_NEAR(beta, characteristic_exponent(a, -q), 1e-14) << a << " " << q;
    ++checked;
  }
}

TEST(TransverseModes, OrthonormalWithUniformTopMode) {
  const auto s = testing::small_crystal(7);
  for (bool averaged : {false, true}) {
    const Eigen::MatrixXd c = averaged ? time_averaged_coupling(s.mm).avg_inv_r3
                                       : static_coupling(s.mm.r0).static_inv_r3;
    const auto set = transverse_mode_set(c, s.mp.omega_z, s.trap, averaged);
    const Eigen::Index n = set.modes.rows();
    EXPECT_LT((set.modes.transpose() * set.modes - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    EXPECT_LT((set.modes * set.modes.transpose() - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    EXPECT_NEAR(set.frequencies[n - 1], s.mp.omega_z, 1e-12 * s.mp.omega_z);
    const Eigen::VectorXd top = set.modes.col(n - 1).cwiseAbs();
    EXPECT_LT((top.array() - 1.0 / std::sqrt(double(n))).abs().maxCoeff(), 1e-10);
    const double sum_rule = set.frequencies.squaredNorm() - set.stiffness.trace() / s.trap.ion_mass;
    EXPECT_LT(std::abs(sum_rule), 1e-10 * set.frequencies.squaredNorm());
  }
}

}  // namespace
}  // namespace mmgate
