#include "mmgate/transverse_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "mmgate/errors.hpp"
#include "mmgate/units.hpp"

namespace mmgate {

namespace {

void accumulate_inv_r3(const Positions& r, double weight_avg, double weight_h1,
                       Eigen::MatrixXd& avg, Eigen::MatrixXd& h1) {
  const Eigen::Index n = r.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (r.row(i) - r.row(j)).norm();
      if (d < 1e-9) {
        std::ostringstream os;
        os << "ions " << i << " and " << j << " coincide during the rf period";
        throw CoincidentIons(os.str());
      }
      const double v = 1.0 / (d * d * d);
      avg(i, j) += weight_avg * v;
      avg(j, i) = avg(i, j);
      h1(i, j) += weight_h1 * v;
      h1(j, i) = h1(i, j);
    }
  }
}

double pair_factor(TransverseCoupling form) {
  return form == TransverseCoupling::Literal ? 2.0 : 1.0;
}

Eigen::MatrixXd stiffness_from(const Eigen::MatrixXd& c, double diag, double k) {
  Eigen::MatrixXd s = k * c;
  s.diagonal().setConstant(diag);
  s.diagonal() -= k * c.rowwise().sum();
  return s;
}

}  // namespace

CouplingMatrices time_averaged_coupling(const MicromotionExpansion& e, int samples) {
  const Eigen::Index n = e.ion_count();
  CouplingMatrices c;
  c.avg_inv_r3.setZero(n, n);
  c.first_harmonic.setZero(n, n);
  c.static_inv_r3.setZero(n, n);
  Eigen::MatrixXd unused = Eigen::MatrixXd::Zero(n, n);
  accumulate_inv_r3(e.r0, 1.0, 0.0, c.static_inv_r3, unused);
  for (int s = 0; s < samples; ++s) {
    const double theta = units::kTwoPi * s / samples;
    accumulate_inv_r3(e.at_phase(theta), 1.0 / samples, 2.0 * std::cos(theta) / samples,
                      c.avg_inv_r3, c.first_harmonic);
  }
  return c;
}

CouplingMatrices static_coupling(const Positions& r) {
  const Eigen::Index n = r.rows();
  CouplingMatrices c;
  c.static_inv_r3.setZero(n, n);
  c.first_harmonic.setZero(n, n);
  accumulate_inv_r3(r, 1.0, 0.0, c.static_inv_r3, c.first_harmonic);
  c.avg_inv_r3 = c.static_inv_r3;
  return c;
}

TransverseModeSet transverse_mode_set(const Eigen::MatrixXd& inv_r3, double omega_z,
                                      const TrapConfig& trap, bool includes_micromotion,
                                      TransverseCoupling form) {
  const double m = trap.ion_mass;
  TransverseModeSet set;
  set.includes_micromotion = includes_micromotion;
  set.stiffness = stiffness_from(inv_r3, m * omega_z * omega_z, pair_factor(form) * pair_coupling(trap));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(set.stiffness);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  if (lam.size() > 0 && lam[0] < 0) {
    std::ostringstream os;
    os << "transverse stiffness has negative eigenvalue " << lam[0] << " (non-planar configuration)";
    throw ImaginaryFrequency(os.str());
  }
  set.frequencies = (lam / m).cwiseSqrt();
  set.modes = eig.eigenvectors();
  // Deterministic sign: largest-magnitude component of each mode positive.
  for (Eigen::Index k = 0; k < set.modes.cols(); ++k) {
    Eigen::Index idx;
    set.modes.col(k).cwiseAbs().maxCoeff(&idx);
    if (set.modes(idx, k) < 0) set.modes.col(k) *= -1.0;
  }
  return set;
}

ModeShiftReport mode_shift_report(const TransverseModeSet& with, const TransverseModeSet& without) {
  const Eigen::Index n = with.frequencies.size();
  if (without.frequencies.size() != n) throw Error("mode_shift_report: mode sets differ in size");
  const Eigen::MatrixXd ov = (with.modes.transpose() * without.modes).cwiseAbs();
  std::vector<std::tuple<double, double, int, int>> cand;
  cand.reserve(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      cand.emplace_back(-ov(k, l), std::abs(with.frequencies[k] - without.frequencies[l]), k, l);
  std::sort(cand.begin(), cand.end());
  ModeShiftReport rep;
  rep.match.assign(static_cast<std::size_t>(n), -1);
  rep.overlap.assign(static_cast<std::size_t>(n), 0.0);
  rep.shift.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  Eigen::Index assigned = 0;
  for (const auto& [neg, df, k, l] : cand) {
    if (assigned == n) break;
    if (rep.match[k] >= 0 || used[l]) continue;
    rep.match[k] = l;
    used[l] = true;
    rep.overlap[k] = -neg;
    rep.shift[k] = with.frequencies[k] - without.frequencies[l];
    ++assigned;
  }
  double sum = 0.0, worst = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    sum += std::abs(rep.shift[k]);
    worst = std::min(worst, rep.overlap[k]);
  }
  rep.mean_abs_shift = n > 0 ? sum / static_cast<double>(n) : 0.0;
  rep.max_overlap_deficit = n > 0 ? 1.0 - worst : 0.0;
  if (n > 0 && worst < 0.9) {
    std::ostringstream os;
    os << "mode matching ambiguous: smallest overlap " << worst;
    throw AmbiguousMatching(os.str());
  }
  return rep;
}

RwaBound rwa_perturbation_bound(const CouplingMatrices& c, const TransverseModeSet& modes,
                                double rf_angular_freq, double q, const TrapConfig& trap,
                                TransverseCoupling form) {
  RwaBound b;
  if (modes.frequencies.size() == 0) return b;
  const double ratio = modes.frequencies.maxCoeff() / rf_angular_freq;
  b.frequency_bound = std::abs(q) * ratio * ratio;
  const Eigen::MatrixXd k1 =
      stiffness_from(c.first_harmonic, 0.0, pair_factor(form) * pair_coupling(trap));
  const double kn = modes.stiffness.norm();
  b.norm_bound = kn > 0 ? k1.norm() / kn * ratio * ratio : 0.0;
  return b;
}

}  // namespace mmgate
