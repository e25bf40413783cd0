#include "mmgate/micromotion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mmgate/errors.hpp"
#include "mmgate/units.hpp"

namespace mmgate {

Positions MicromotionExpansion::at_phase(double theta) const {
  Eigen::VectorXd r = harmonics.col(0);
  for (Eigen::Index n = 1; n < harmonics.cols(); ++n)
    r += harmonics.col(n) * std::cos(static_cast<double>(n) * theta);
  return unflatten(r);
}

namespace {

Eigen::VectorXd dc_diagonal(int n, const TrapConfig& trap) {
  Eigen::VectorXd d(2 * n);
  const double kx = dc_curvature_x(trap), ky = dc_curvature_y(trap);
  for (int i = 0; i < n; ++i) {
    d[2 * i] = kx;
    d[2 * i + 1] = ky;
  }
  return d;
}

}  // namespace

QuadraticExpansion quadratic_expansion(const Positions& r0, const TrapConfig& trap) {
  QuadraticExpansion e;
  coulomb_derivatives(r0, pair_coupling(trap), e.gradient, e.hessian);
  e.linear = e.gradient - e.hessian * flatten(r0);
  e.dc_diagonal = dc_diagonal(static_cast<int>(r0.rows()), trap);
  e.drive = e.linear;
  return e;
}

QuadraticExpansion averaged_expansion(const Eigen::MatrixXd& harmonics, const TrapConfig& trap,
                                      int samples) {
  const Eigen::Index dim = harmonics.rows();
  const Eigen::Index nh = harmonics.cols();
  const double k = pair_coupling(trap);
  Eigen::MatrixXd rs(dim, samples), gs(dim, samples);
  QuadraticExpansion e;
  e.hessian.setZero(dim, dim);
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  for (int s = 0; s < samples; ++s) {
    const double theta = units::kTwoPi * s / samples;
    Eigen::VectorXd r = harmonics.col(0);
    for (Eigen::Index n = 1; n < nh; ++n) r += harmonics.col(n) * std::cos(n * theta);
    coulomb_derivatives(unflatten(r), k, g, h);
    rs.col(s) = r;
    gs.col(s) = g;
    e.hessian += h;
  }
  e.hessian /= samples;
  e.gradient = gs.rowwise().mean();
  e.drive.setZero(dim, nh);
  for (int s = 0; s < samples; ++s) {
    const double theta = units::kTwoPi * s / samples;
    const Eigen::VectorXd d = gs.col(s) - e.hessian * rs.col(s);
    e.drive.col(0) += d / samples;
    for (Eigen::Index n = 1; n < nh; ++n) e.drive.col(n) += d * (2.0 * std::cos(n * theta) / samples);
  }
  e.linear = e.drive.col(0);
  e.dc_diagonal = dc_diagonal(static_cast<int>(dim / 2), trap);
  return e;
}

NormalCoordinateSystem normal_coordinates(const QuadraticExpansion& e, const TrapConfig& trap) {
  Eigen::MatrixXd total = e.hessian;
  total.diagonal() += e.dc_diagonal;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(total);
  NormalCoordinateSystem nc;
  nc.q = eig.eigenvectors().transpose();
  nc.lambda = eig.eigenvalues();
  const double scale = 4.0 / (trap.ion_mass * trap.rf_angular_freq * trap.rf_angular_freq);
  nc.a = scale * nc.lambda;
  nc.f = -scale * (nc.q * e.drive);
  return nc;
}

namespace {

constexpr double kResonanceGap = 1e-6;
constexpr double kTruncation = 1e-12;

// Backward elimination from the highest harmonic, where the recurrence is
// diagonally dominant, down to the constant term.
std::vector<double> solve_truncated(double a, double q, std::span<const double> f, int nmax) {
  const int size = nmax + 1;
  auto rhs = [&](int n) { return n < static_cast<int>(f.size()) ? f[n] : 0.0; };
  auto lower = [&](int n) { return n == 1 ? -2.0 * q : -q; };
  auto diag = [&](int n) { return a - 4.0 * n * n; };
  const double upper = -q;
  std::vector<double> x(size + 1, 0.0), y(size + 1, 0.0), c(size, 0.0);
  for (int n = nmax; n >= 1; --n) {
    const double piv = diag(n) + (n < nmax ? upper * y[n + 1] : 0.0);
    const double num = rhs(n) - (n < nmax ? upper * x[n + 1] : 0.0);
    x[n] = num / piv;
    y[n] = -lower(n) / piv;
  }
  const double piv0 = diag(0) + (nmax >= 1 ? upper * y[1] : 0.0);
  if (std::abs(piv0) < 1e-300) throw ResonantDrive("driven Mathieu system is singular");
  c[0] = (rhs(0) - (nmax >= 1 ? upper * x[1] : 0.0)) / piv0;
  for (int n = 1; n <= nmax; ++n) c[n] = x[n] + y[n] * c[n - 1];
  return c;
}

}  // namespace

DrivenMathieuSolution solve_driven_mathieu(double a, double q, std::span<const double> drive) {
  for (int n = 1; n <= kMaxSeriesOrder; ++n) {
    if (std::abs(a - 4.0 * n * n) < kResonanceGap) {
      std::ostringstream os;
      os << "drive harmonic " << n << " resonant with a=" << a;
      throw ResonantDrive(os.str());
    }
  }
  if (std::abs(a) < kResonanceGap && std::abs(q) < kResonanceGap)
    throw ResonantDrive("static drive with vanishing restoring force");
  const int start = std::max<int>(2, static_cast<int>(drive.size()) - 1);
  DrivenMathieuSolution sol;
  for (int nmax = std::min(start, kMaxSeriesOrder); nmax <= kMaxSeriesOrder; ++nmax) {
    sol.coefficients = solve_truncated(a, q, drive, nmax);
    double biggest = 0.0;
    for (double c : sol.coefficients) biggest = std::max(biggest, std::abs(c));
    if (std::abs(sol.coefficients.back()) <= kTruncation * biggest) break;
  }
  return sol;
}

DrivenMathieuSolution solve_driven_mathieu(double a, double q) {
  const double unit[1] = {1.0};
  return solve_driven_mathieu(a, q, std::span<const double>(unit, 1));
}

double driven_mathieu_residual(double a, double q, std::span<const double> series,
                               std::span<const double> drive, int samples) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = units::kPi * s / samples;
    double val = 0.0, acc = 0.0, f = 0.0;
    for (std::size_t n = 0; n < series.size(); ++n) {
      const double c = std::cos(2.0 * n * x);
      val += series[n] * c;
      acc -= 4.0 * n * n * series[n] * c;
    }
    for (std::size_t n = 0; n < drive.size(); ++n) f += drive[n] * std::cos(2.0 * n * x);
    worst = std::max(worst, std::abs(acc + (a - 2.0 * q * std::cos(2.0 * x)) * val - f));
  }
  return worst;
}

namespace {

struct MapResult {
  Eigen::MatrixXd harmonics;
  NormalCoordinateSystem normal;
  Eigen::MatrixXd series;
};

MapResult fixed_point_map(const Eigen::MatrixXd& x, const TrapConfig& trap, double q,
                          const MicromotionOptions& o) {
  const QuadraticExpansion e = o.expansion == ExpansionKind::Static
                                   ? quadratic_expansion(unflatten(x.col(0)), trap)
                                   : averaged_expansion(x, trap, o.samples);
  MapResult out;
  out.normal = normal_coordinates(e, trap);
  const Eigen::Index dim = x.rows();
  out.series.setZero(dim, kMaxSeriesOrder + 1);
  std::vector<double> drive(static_cast<std::size_t>(out.normal.f.cols()));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = out.normal.a[i];
    const double disc = hill_discriminant(a, q);
    if (disc > 1.0 || -4.0 * disc > o.marginal_trace_excess) throw UnstableRegion(a, q);
    for (Eigen::Index n = 0; n < out.normal.f.cols(); ++n) drive[n] = out.normal.f(i, n);
    const auto sol = solve_driven_mathieu(a, q, drive);
    for (std::size_t n = 0; n < sol.coefficients.size(); ++n)
      out.series(i, static_cast<Eigen::Index>(n)) = sol.coefficients[n];
  }
  out.harmonics = out.normal.q.transpose() * out.series.leftCols(x.cols());
  return out;
}

// Anderson acceleration of the fixed-point iteration x -> G(x).
class AndersonMixer {
 public:
  AndersonMixer(int depth, double beta) : depth_(depth), beta_(beta) {}

  Eigen::VectorXd next(const Eigen::VectorXd& x, const Eigen::VectorXd& gx) {
    const Eigen::VectorXd f = gx - x;
    const double fn = f.norm();
    if (have_prev_) {
      if (fn > 10.0 * best_) {
        dx_.clear();
        df_.clear();
      } else {
        dx_.push_back(x - prev_x_);
        df_.push_back(f - prev_f_);
        if (static_cast<int>(dx_.size()) > depth_) {
          dx_.pop_front();
          df_.pop_front();
        }
      }
    }
    best_ = have_prev_ ? std::min(best_, fn) : fn;
    prev_x_ = x;
    prev_f_ = f;
    have_prev_ = true;
    Eigen::VectorXd out = x + beta_ * f;
    if (!dx_.empty()) {
      const Eigen::Index m = static_cast<Eigen::Index>(dx_.size());
      Eigen::MatrixXd X(x.size(), m), F(x.size(), m);
      for (Eigen::Index j = 0; j < m; ++j) {
        X.col(j) = dx_[j];
        F.col(j) = df_[j];
      }
      const Eigen::VectorXd gamma = F.completeOrthogonalDecomposition().solve(f);
      out -= (X + beta_ * F) * gamma;
    }
    return out;
  }

 private:
  int depth_;
  double beta_;
  bool have_prev_ = false;
  double best_ = 0.0;
  Eigen::VectorXd prev_x_, prev_f_;
  std::deque<Eigen::VectorXd> dx_, df_;
};

double max_ion_shift(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i + 1 < a.size(); i += 2)
    worst = std::max(worst, std::hypot(a[i] - b[i], a[i + 1] - b[i + 1]));
  return worst;
}

MicromotionExpansion run(Eigen::MatrixXd x, const TrapConfig& trap, const MicromotionOptions& o) {
  const MathieuParams mp = mathieu_parameters(trap);
  const double q = mp.q_x;
  const Eigen::Index dim = x.rows(), cols = x.cols();
  AndersonMixer mixer(o.anderson_depth, o.mixing);
  MicromotionExpansion out;
  out.expansion = o.expansion;
  out.q = q;
  out.rf_angular_freq = trap.rf_angular_freq;
  MapResult last;
  for (int it = 1; it <= o.max_iterations; ++it) {
    last = fixed_point_map(x, trap, q, o);
    out.iterations = it;
    out.last_change = max_ion_shift(last.harmonics.col(0), x.col(0));
    if (out.last_change < o.tolerance) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    const Eigen::VectorXd gv =
        Eigen::Map<const Eigen::VectorXd>(last.harmonics.data(), last.harmonics.size());
    const Eigen::VectorXd nv = mixer.next(xv, gv);
    x = Eigen::Map<const Eigen::MatrixXd>(nv.data(), dim, cols);
  }
  if (!out.converged) {
    std::ostringstream os;
    os << "self-consistent positions did not converge in " << o.max_iterations
       << " iterations (last change " << out.last_change << " um)";
    throw NonConvergence(os.str());
  }
  out.harmonics = last.harmonics;
  out.normal = std::move(last.normal);
  out.coordinate_series = std::move(last.series);
  out.r0 = unflatten(out.harmonics.col(0));
  out.r1 = cols > 1 ? unflatten(out.harmonics.col(1)) : Positions::Zero(out.r0.rows(), 2);
  out.r2 = cols > 2 ? unflatten(out.harmonics.col(2)) : Positions::Zero(out.r0.rows(), 2);
  out.unit_series.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i)
    if (hill_discriminant(out.normal.a[i], q) < 0.0) ++out.marginal_coordinates;
  for (Eigen::Index i = 0; i < dim; ++i)
    out.unit_series.push_back(solve_driven_mathieu(out.normal.a[i], q));
  const int n = out.ion_count();
  out.amplitude.assign(static_cast<std::size_t>(n), 0.0);
  constexpr int kPhases = 512;
  for (int s = 0; s < kPhases; ++s) {
    const Positions r = out.at_phase(units::kTwoPi * s / kPhases);
    for (int i = 0; i < n; ++i)
      out.amplitude[i] = std::max(out.amplitude[i], (r.row(i) - out.r0.row(i)).norm());
  }
  return out;
}

}  // namespace

MicromotionExpansion self_consistent_positions(const Positions& crystal, const TrapConfig& trap,
                                               const MicromotionOptions& opts) {
  if (opts.harmonics < 2) throw ConfigError("micromotion: at least two rf harmonics required");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(crystal.size(), opts.harmonics + 1);
  x.col(0) = flatten(crystal);
  return run(std::move(x), trap, opts);
}

MicromotionExpansion self_consistent_positions(const MicromotionExpansion& start,
                                               const TrapConfig& trap,
                                               const MicromotionOptions& opts) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(start.harmonics.rows(), opts.harmonics + 1);
  const Eigen::Index c = std::min(x.cols(), start.harmonics.cols());
  x.leftCols(c) = start.harmonics.leftCols(c);
  return run(std::move(x), trap, opts);
}

std::vector<double> micromotion_amplitudes(const MicromotionExpansion& e) {
  std::vector<double> a = e.amplitude;
  std::sort(a.begin(), a.end());
  return a;
}

double mean_displacement(const Positions& a, const Positions& b) {
  if (a.rows() == 0) return 0.0;
  return (a - b).rowwise().norm().mean();
}

}  // namespace mmgate
