#include "mmgate/gate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "mmgate/crystal.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/oscillatory.hpp"

namespace mmgate {

using cplx = std::complex<double>;

void GateConfig::validate() const {
  if (!(gate_time > 0)) throw ConfigError("gate time must be positive");
  if (segments < 1) throw ConfigError("segment count must be at least 1");
  if (!(waist > 0)) throw ConfigError("beam waist must be positive");
  if (!(delta_k > 0)) throw ConfigError("wave-vector difference must be positive");
  if (!(thermal_rate >= 0)) throw ConfigError("temperature must be non-negative");
  if (pair.first == pair.second) throw ConfigError("gate pair must name two different ions");
}

std::pair<int, int> select_pair(const Positions& r, PairSelector which) {
  const int n = static_cast<int>(r.rows());
  if (n < 2) throw ConfigError("pair selection needs at least two ions");
  if (which == PairSelector::Center) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return r.row(a).norm() < r.row(b).norm(); });
    return {std::min(idx[0], idx[1]), std::max(idx[0], idx[1])};
  }
  const auto nn = nearest_neighbours(r);
  std::pair<int, int> best{-1, -1};
  double best_radius = -1.0;
  for (int i = 0; i < n; ++i) {
    const int j = nn[i];
    const double rad = (0.5 * (r.row(i) + r.row(j))).norm();
    if (rad > best_radius + 1e-12) {
      best_radius = rad;
      best = {std::min(i, j), std::max(i, j)};
    }
  }
  return best;
}

double BeamModulation::evaluate(double theta) const {
  double v = 0.0;
  for (std::size_t n = 0; n < cosine.size(); ++n) v += cosine[n] * std::cos(n * theta);
  return v;
}

double beam_envelope(const MicromotionExpansion& e, int ion, double waist, double theta) {
  double dx = 0.0, dy = 0.0;
  for (Eigen::Index n = 1; n < e.harmonics.cols(); ++n) {
    const double c = std::cos(n * theta);
    dx += e.harmonics(2 * ion, n) * c;
    dy += e.harmonics(2 * ion + 1, n) * c;
  }
  return std::exp(-(dx * dx + dy * dy) / (waist * waist));
}

BeamModulation beam_modulation(const MicromotionExpansion& e, int ion, double waist,
                               int harmonics, int samples) {
  if (ion < 0 || ion >= e.ion_count()) throw ConfigError("beam_modulation: ion index out of range");
  if (!(waist > 0)) throw ConfigError("beam_modulation: waist must be positive");
  BeamModulation m;
  m.rf_angular_freq = e.rf_angular_freq;
  m.cosine.assign(static_cast<std::size_t>(harmonics) + 1, 0.0);
  std::vector<double> vals(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double theta = units::kTwoPi * s / samples;
    vals[s] = beam_envelope(e, ion, waist, theta);
    for (int n = 0; n <= harmonics; ++n)
      m.cosine[n] += vals[s] * std::cos(n * theta) * (n == 0 ? 1.0 : 2.0) / samples;
  }
  for (int s = 0; s < samples; ++s)
    m.reconstruction_error =
        std::max(m.reconstruction_error, std::abs(m.evaluate(units::kTwoPi * s / samples) - vals[s]));
  Eigen::MatrixXd h = e.harmonics.middleRows(2 * ion, 2);
  m.exact = [h, waist](double theta) {
    double dx = 0.0, dy = 0.0;
    for (Eigen::Index n = 1; n < h.cols(); ++n) {
      const double c = std::cos(n * theta);
      dx += h(0, n) * c;
      dy += h(1, n) * c;
    }
    return std::exp(-(dx * dx + dy * dy) / (waist * waist));
  };
  return m;
}

BeamModulation unit_modulation() { return BeamModulation{}; }

double lamb_dicke_parameter(double delta_k, double mass, double omega) {
  return delta_k * std::sqrt(units::hbar() / (2.0 * mass * omega));
}

Eigen::VectorXd thermal_occupations(const Eigen::VectorXd& frequencies, double thermal_rate) {
  Eigen::VectorXd n(frequencies.size());
  for (Eigen::Index k = 0; k < n.size(); ++k)
    n[k] = thermal_rate > 0 ? 1.0 / std::expm1(frequencies[k] / thermal_rate) : 0.0;
  return n;
}

namespace {

// v(t) = envelope(t) sin(mu t + phase) = sum_p c_p exp(i lambda_p t).
struct Term {
  cplx c;
  double lambda;
};

std::vector<Term> drive_terms(const BeamModulation& m, double mu, double phase) {
  std::vector<Term> out;
  const double w = m.rf_angular_freq;
  auto push = [&](double g, double nu) {
    for (int sigma : {1, -1}) {
      const cplx c = g * static_cast<double>(sigma) * std::polar(1.0, sigma * phase) / cplx(0.0, 2.0);
      out.push_back({c, nu + sigma * mu});
    }
  };
  for (std::size_t n = 0; n < m.cosine.size(); ++n) {
    const double g = m.cosine[n];
    if (n == 0) {
      push(g, 0.0);
    } else if (g != 0.0) {
      push(0.5 * g, static_cast<double>(n) * w);
      push(0.5 * g, -static_cast<double>(n) * w);
    }
  }
  return out;
}

struct Coupling {
  Eigen::VectorXd eta;       // per mode
  Eigen::MatrixXd g;         // 2 x K
};

Coupling couplings(const TransverseModeSet& modes, const GateConfig& gc, double mass) {
  const Eigen::Index k = modes.frequencies.size();
  const int n = static_cast<int>(modes.modes.rows());
  if (gc.pair.first < 0 || gc.pair.first >= n || gc.pair.second < 0 || gc.pair.second >= n)
    throw ConfigError("gate pair index out of range");
  Coupling c;
  c.eta.resize(k);
  c.g.resize(2, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    c.eta[i] = lamb_dicke_parameter(gc.delta_k, mass, modes.frequencies[i]);
    c.g(0, i) = c.eta[i] * modes.modes(gc.pair.first, i);
    c.g(1, i) = c.eta[i] * modes.modes(gc.pair.second, i);
  }
  return c;
}

// Segment integrals P[j](k, i) = int_seg_i v_j(t) e^{i w_k t} dt and the
// intra-segment ordered double integrals D[j][n](k, i) (j later, n earlier).
struct SegmentIntegrals {
  std::array<Eigen::MatrixXcd, 2> p;
  std::array<std::array<Eigen::MatrixXd, 2>, 2> d;
};

SegmentIntegrals analytic_integrals(const Eigen::VectorXd& omega, const GateConfig& gc,
                                    const PairModulation& mod, bool with_nested) {
  const int m = gc.segments;
  const double len = gc.gate_time / m;
  const Eigen::Index kk = omega.size();
  std::array<std::vector<Term>, 2> terms;
  for (int j = 0; j < 2; ++j) terms[j] = drive_terms(mod[j], gc.detuning, gc.phase_offset[j]);
  SegmentIntegrals out;
  for (int j = 0; j < 2; ++j) {
    out.p[j].setZero(kk, m);
    for (Eigen::Index k = 0; k < kk; ++k) {
      for (const Term& t : terms[j]) {
        const double w = omega[k] + t.lambda;
        const cplx base = len * osc::phi1(w * len) * t.c;
        for (int i = 0; i < m; ++i) out.p[j](k, i) += std::polar(1.0, w * len * i) * base;
      }
    }
  }
  if (!with_nested) return out;

  // sum_{p,r} c_p conj(c_r) e^{i (l_p - l_r) a} L^2 psi(X_p L, Y_r L), with
  // X_p = w + l_p, Y_r = -(w + l_r) and psi(x, y) = (phi1(x + y) - phi1(x)) / (i y).
  // x + y does not depend on the mode, so sum_p c_p e^{i l_p a} phi1(x + y) is
  // tabulated once per segment.
  for (int j = 0; j < 2; ++j) {
    for (int n = 0; n < 2; ++n) {
      const auto& tj = terms[j];
      const auto& tn = terms[n];
      const std::size_t np = tj.size(), nr = tn.size();
      Eigen::MatrixXcd s(m, static_cast<Eigen::Index>(nr));
      for (int i = 0; i < m; ++i) {
        const double a = len * i;
        for (std::size_t r = 0; r < nr; ++r) {
          cplx acc = 0.0;
          for (std::size_t p = 0; p < np; ++p)
            acc += tj[p].c * std::polar(1.0, tj[p].lambda * a) *
                   osc::phi1((tj[p].lambda - tn[r].lambda) * len);
          s(i, static_cast<Eigen::Index>(r)) = acc;
        }
      }
      auto& d = out.d[j][n];
      d.setZero(kk, m);
      std::vector<cplx> phx(np);
      for (Eigen::Index k = 0; k < kk; ++k) {
        for (std::size_t p = 0; p < np; ++p) phx[p] = osc::phi1((omega[k] + tj[p].lambda) * len);
        for (int i = 0; i < m; ++i) {
          const double a = len * i;
          cplx t = 0.0;
          for (std::size_t p = 0; p < np; ++p) t += tj[p].c * std::polar(1.0, tj[p].lambda * a) * phx[p];
          cplx sum = 0.0;
          for (std::size_t r = 0; r < nr; ++r) {
            const double y = -(omega[k] + tn[r].lambda) * len;
            const cplx pref = std::conj(tn[r].c) * std::polar(1.0, -tn[r].lambda * a);
            cplx inner;
            if (std::abs(y) > 1e-3) {
              inner = (s(i, static_cast<Eigen::Index>(r)) - t) / cplx(0.0, y);
            } else {
              inner = 0.0;
              for (std::size_t p = 0; p < np; ++p)
                inner += tj[p].c * std::polar(1.0, tj[p].lambda * a) *
                         osc::nested((omega[k] + tj[p].lambda) * len, y);
            }
            sum += pref * inner;
          }
          d(k, i) = std::imag(len * len * sum);
        }
      }
    }
  }
  return out;
}

// Trapezoid rule at `per_period` samples per rf period (at least 64 per
// segment), refined once by Richardson extrapolation of the h/2 result.
SegmentIntegrals quadrature_integrals(const Eigen::VectorXd& omega, const GateConfig& gc,
                                      const PairModulation& mod, bool with_nested) {
  const int m = gc.segments;
  const double len = gc.gate_time / m;
  const Eigen::Index kk = omega.size();
  const double rf = mod[0].rf_angular_freq > 0 ? mod[0].rf_angular_freq : mod[1].rf_angular_freq;
  constexpr int kPerPeriod = 64;
  // Sample spacing from the fastest relevant scale (rf period or detuning).
  double hmax = len / 64.0;
  if (rf > 0) hmax = std::min(hmax, units::kTwoPi / rf / kPerPeriod);
  if (gc.detuning > 0) hmax = std::min(hmax, units::kTwoPi / gc.detuning / kPerPeriod);
  const int coarse = static_cast<int>(std::ceil(len / hmax));

  SegmentIntegrals out;
  for (int j = 0; j < 2; ++j) out.p[j].setZero(kk, m);
  for (int j = 0; j < 2; ++j)
    for (int n = 0; n < 2; ++n) out.d[j][n].setZero(kk, m);

  for (int i = 0; i < m; ++i) {
    const double a = len * i;
    std::array<std::array<Eigen::MatrixXcd, 2>, 2> pl;               // [level][ion]: K x 1
    std::array<std::array<std::array<Eigen::VectorXd, 2>, 2>, 2> dl;  // [level][j][n]
    for (int level = 0; level < 2; ++level) {
      const int nint = coarse << level;
      const double h = len / nint;
      std::array<std::vector<double>, 2> v;
      for (int j = 0; j < 2; ++j) {
        v[j].resize(static_cast<std::size_t>(nint) + 1);
        for (int s = 0; s <= nint; ++s) {
          const double t = a + h * s;
          const double env = rf > 0 ? mod[j].evaluate_exact(rf * t) : mod[j].evaluate(0.0);
          v[j][s] = env * std::sin(gc.detuning * t + gc.phase_offset[j]);
        }
      }
      for (int j = 0; j < 2; ++j) {
        pl[level][j].setZero(kk, 1);
        for (int n = 0; n < 2; ++n) dl[level][j][n].setZero(kk);
      }
      for (Eigen::Index k = 0; k < kk; ++k) {
        const cplx step = std::polar(1.0, omega[k] * h);
        std::array<cplx, 2> acc{0.0, 0.0}, cum{0.0, 0.0}, prev_f{0.0, 0.0}, prev_g{0.0, 0.0};
        std::array<std::array<cplx, 2>, 2> nest{};
        std::array<std::array<cplx, 2>, 2> prev_prod{};
        cplx e = std::polar(1.0, omega[k] * a);
        for (int s = 0; s <= nint; ++s) {
          std::array<cplx, 2> f, g;
          for (int j = 0; j < 2; ++j) {
            f[j] = v[j][s] * e;             // v_j e^{i w t}
            g[j] = v[j][s] * std::conj(e);  // v_j e^{-i w t}
          }
          const double wgt = (s == 0 || s == nint) ? 0.5 : 1.0;
          for (int j = 0; j < 2; ++j) acc[j] += wgt * h * f[j];
          // Cumulative inner integral up to t_s, then trapezoid of f_j * inner_n.
          if (s > 0)
            for (int n = 0; n < 2; ++n) cum[n] += 0.5 * h * (prev_g[n] + g[n]);
          for (int j = 0; j < 2; ++j)
            for (int n = 0; n < 2; ++n) {
              const cplx prod = f[j] * cum[n];
              if (s > 0) nest[j][n] += 0.5 * h * (prev_prod[j][n] + prod);
              prev_prod[j][n] = prod;
            }
          prev_f = f;
          prev_g = g;
          e *= step;
          if ((s & 255) == 255) e = std::polar(1.0, omega[k] * (a + h * (s + 1)));
        }
        for (int j = 0; j < 2; ++j) {
          pl[level][j](k, 0) = acc[j];
          for (int n = 0; n < 2; ++n) dl[level][j][n][k] = std::imag(nest[j][n]);
        }
      }
    }
    for (int j = 0; j < 2; ++j) {
      out.p[j].col(i) = (4.0 * pl[1][j] - pl[0][j]) / 3.0;
      if (with_nested)
        for (int n = 0; n < 2; ++n) out.d[j][n].col(i) = (4.0 * dl[1][j][n] - dl[0][j][n]) / 3.0;
    }
  }
  return out;
}

SegmentIntegrals integrals(const TransverseModeSet& modes, const GateConfig& gc,
                           const PairModulation& mod, IntegrationRoute route, bool nested) {
  gc.validate();
  return route == IntegrationRoute::Analytic
             ? analytic_integrals(modes.frequencies, gc, mod, nested)
             : quadrature_integrals(modes.frequencies, gc, mod, nested);
}

AlphaTensor alpha_from(const SegmentIntegrals& s, const Coupling& c) {
  AlphaTensor a;
  for (int j = 0; j < 2; ++j)
    a[j] = (cplx(0.0, 1.0) * c.g.row(j).transpose()).asDiagonal() * s.p[j];
  return a;
}

Eigen::MatrixXd phase_from(const SegmentIntegrals& s, const Coupling& c, int m) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  const Eigen::Index kk = c.g.cols();
  for (Eigen::Index k = 0; k < kk; ++k) {
    const double weight = c.g(0, k) * c.g(1, k);
    if (weight == 0.0) continue;
    for (int i = 0; i < m; ++i) {
      // Later segment i, earlier segment l < i; both orderings of the ions.
      for (int l = 0; l < i; ++l) {
        const double j12 = std::imag(s.p[0](k, i) * std::conj(s.p[1](k, l)));
        const double j21 = std::imag(s.p[1](k, i) * std::conj(s.p[0](k, l)));
        w(i, l) += weight * (j12 + j21);
      }
      w(i, i) += weight * (s.d[0][1](k, i) + s.d[1][0](k, i));
    }
  }
  return 0.5 * (w + w.transpose());
}

}  // namespace

AlphaTensor alpha_map(const TransverseModeSet& modes, const GateConfig& g,
                      const PairModulation& mod, double mass, IntegrationRoute route) {
  return alpha_from(integrals(modes, g, mod, route, false), couplings(modes, g, mass));
}

Eigen::MatrixXd phase_map(const TransverseModeSet& modes, const GateConfig& g,
                          const PairModulation& mod, double mass, IntegrationRoute route) {
  return phase_from(integrals(modes, g, mod, route, true), couplings(modes, g, mass), g.segments);
}

Eigen::MatrixXcd apply_alpha(const AlphaTensor& a, const Eigen::VectorXd& x) {
  Eigen::MatrixXcd out(2, a[0].rows());
  for (int j = 0; j < 2; ++j) out.row(j) = (a[j] * x.cast<cplx>()).transpose();
  return out;
}

double fidelity(const Eigen::MatrixXcd& alpha, double phi12, const Eigen::VectorXd& nbar,
                double target) {
  const Eigen::Index kk = alpha.cols();
  if (nbar.size() != kk) throw Error("fidelity: occupation count does not match mode count");
  const double delta = phi12 - target;
  std::array<std::array<int, 2>, 4> sgn{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  std::array<Eigen::VectorXcd, 4> beta;
  for (int s = 0; s < 4; ++s)
    beta[s] = (sgn[s][0] * alpha.row(0) + sgn[s][1] * alpha.row(1)).transpose();
  cplx total = 0.0;
  for (int s = 0; s < 4; ++s) {
    for (int t = 0; t < 4; ++t) {
      cplx expo(0.0, delta * (sgn[t][0] * sgn[t][1] - sgn[s][0] * sgn[s][1]));
      for (Eigen::Index k = 0; k < kk; ++k) {
        const cplx bs = beta[s][k], bt = beta[t][k];
        expo += cplx(-std::norm(bt - bs) * (nbar[k] + 0.5), std::imag(std::conj(bs) * bt));
      }
      total += std::exp(expo);
    }
  }
  return std::clamp(std::real(total) / 16.0, 0.0, 1.0);
}

Eigen::MatrixXd infidelity_quadratic_proxy(const AlphaTensor& a, const Eigen::VectorXd& nbar) {
  const Eigen::Index m = a[0].cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  const Eigen::VectorXd w = (2.0 * nbar.array() + 1.0).matrix();
  for (int j = 0; j < 2; ++j)
    out += (a[j].adjoint() * w.cast<cplx>().asDiagonal() * a[j]).real();
  return 0.5 * (out + out.transpose());
}

namespace {

struct Problem {
  AlphaTensor a;
  Eigen::MatrixXd w;
  Eigen::VectorXd nbar;
};

Problem build_problem(const TransverseModeSet& modes, const GateConfig& g,
                      const PairModulation& mod, double mass, IntegrationRoute route) {
  const SegmentIntegrals s = integrals(modes, g, mod, route, true);
  const Coupling c = couplings(modes, g, mass);
  return {alpha_from(s, c), phase_from(s, c, g.segments),
          thermal_occupations(modes.frequencies, g.thermal_rate)};
}

PulseSolution finish(const Problem& pb, const Eigen::VectorXd& x, double target,
                     const Eigen::MatrixXd* proxy) {
  PulseSolution sol;
  sol.amplitudes = x;
  sol.alpha = apply_alpha(pb.a, x);
  sol.phi12 = x.dot(pb.w * x);
  sol.target_phase = target;
  sol.fidelity = fidelity(sol.alpha, sol.phi12, pb.nbar, target);
  sol.infidelity = 1.0 - sol.fidelity;
  sol.max_rabi = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  if (proxy) sol.proxy_infidelity = x.dot(*proxy * x);
  return sol;
}

// Nelder-Mead maximisation of the exact fidelity, deterministic start simplex.
Eigen::VectorXd refine(const Problem& pb, const Eigen::VectorXd& x0, double target, int iters) {
  const Eigen::Index n = x0.size();
  auto cost = [&](const Eigen::VectorXd& x) {
    return -fidelity(apply_alpha(pb.a, x), x.dot(pb.w * x), pb.nbar, target);
  };
  const double scale = x0.cwiseAbs().maxCoeff();
  if (!(scale > 0) || iters <= 0) return x0;
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, x0);
  std::vector<double> val(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1][i] += 0.01 * scale;
  for (std::size_t i = 0; i < pts.size(); ++i) val[i] = cost(pts[i]);
  std::vector<std::size_t> order(pts.size());
  for (int it = 0; it < iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = cost(xr);
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = cost(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = cost(xc);
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          val[i] = cost(pts[i]);
        }
      }
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  return pts[static_cast<std::size_t>(it - val.begin())];
}

PulseSolution optimize_problem(const Problem& pb, const GateConfig& g, const OptimizeOptions& o) {
  const int m = g.segments;
  if (m < 2) throw ConfigError("optimize_pulse: at least two segments required");
  if (!(pb.w.norm() > 0)) throw InfeasiblePhase("phase map vanishes identically");
  Eigen::MatrixXd mm = infidelity_quadratic_proxy(pb.a, pb.nbar);
  bool regularized = false;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(mm, Eigen::EigenvaluesOnly);
    const double top = check.eigenvalues().cwiseAbs().maxCoeff();
    if (!(check.eigenvalues().minCoeff() > 1e-14 * top)) {
      mm.diagonal().array() += 1e-12 * mm.trace() / m;
      regularized = true;
    }
  }
  ges.compute(pb.w, mm);
  if (ges.info() != Eigen::Success) throw InfeasiblePhase("generalized eigenproblem failed");
  const Eigen::VectorXd& lam = ges.eigenvalues();  // ascending
  int sign;
  switch (g.target) {
    case TargetSign::Positive:
      sign = 1;
      break;
    case TargetSign::Negative:
      sign = -1;
      break;
    default:
      sign = std::abs(lam[m - 1]) >= std::abs(lam[0]) ? 1 : -1;
  }
  const Eigen::Index pick = sign > 0 ? m - 1 : 0;
  if (!(sign * lam[pick] > 0)) {
    std::ostringstream os;
    os << "no amplitude vector reaches phase " << (sign > 0 ? "+" : "-") << "pi/4";
    throw InfeasiblePhase(os.str());
  }
  const double target = sign * units::kPi / 4.0;
  Eigen::VectorXd x = ges.eigenvectors().col(pick) * std::sqrt(units::kPi / 4.0 / std::abs(lam[pick]));
  if (x.sum() < 0) x = -x;
  const Eigen::MatrixXd proxy = infidelity_quadratic_proxy(pb.a, pb.nbar);
  PulseSolution seed = finish(pb, x, target, &proxy);
  const Eigen::VectorXd xr = refine(pb, x, target, o.refine_iterations);
  PulseSolution polished = finish(pb, xr, target, &proxy);
  PulseSolution& out = polished.fidelity > seed.fidelity ? polished : seed;
  out.proxy_regularized = regularized;
  return out;
}

}  // namespace

PulseSolution optimize_pulse(const TransverseModeSet& modes, const GateConfig& g,
                             const PairModulation& mod, double mass, const OptimizeOptions& opts) {
  return optimize_problem(build_problem(modes, g, mod, mass, opts.route), g, opts);
}

PulseSolution evaluate_pulse(const Eigen::VectorXd& amplitudes, double target_phase,
                             const TransverseModeSet& modes, const GateConfig& g,
                             const PairModulation& mod, double mass) {
  GateConfig gc = g;
  gc.segments = static_cast<int>(amplitudes.size());
  const Problem pb = build_problem(modes, gc, mod, mass, IntegrationRoute::Analytic);
  const Eigen::MatrixXd proxy = infidelity_quadratic_proxy(pb.a, pb.nbar);
  return finish(pb, amplitudes, target_phase, &proxy);
}

StaticCrosscheck static_pulse_crosscheck(const TransverseModeSet& modes_static,
                                         const TransverseModeSet& modes_micromotion,
                                         const GateConfig& g, const PairModulation& mod_micromotion,
                                         double mass, const OptimizeOptions& opts) {
  const PairModulation flat{unit_modulation(), unit_modulation()};
  StaticCrosscheck out;
  out.pulse = optimize_pulse(modes_static, g, flat, mass, opts);
  out.static_on_static = out.pulse.fidelity;
  out.static_on_micromotion = evaluate_pulse(out.pulse.amplitudes, out.pulse.target_phase,
                                             modes_micromotion, g, mod_micromotion, mass)
                                  .fidelity;
  return out;
}

ScanResult scan_detuning(const TransverseModeSet& modes, const GateConfig& g,
                         const PairModulation& mod, double mass, double mu_lo, double mu_hi,
                         int steps, int jobs, StaticBaseline baseline, const OptimizeOptions& opts) {
  if (steps < 1) throw ConfigError("scan_detuning: steps must be at least 1");
  const double wz = modes.frequencies.size() ? modes.frequencies.maxCoeff() : 0.0;
  if (!(mu_lo > 0) || mu_hi > 1.2 * wz * (1 + 1e-12) || mu_hi < mu_lo)
    throw ConfigError("scan_detuning: range must lie within (0, 1.2 omega_z]");
  ScanResult res;
  res.rows.resize(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    res.rows[i].detuning = mu_lo + (mu_hi - mu_lo) * i / steps;
    res.rows[i].detuning_over_omega_z = res.rows[i].detuning / wz;
  }
  const PairModulation flat{unit_modulation(), unit_modulation()};
  auto work = [&](int i) {
    ScanRow& row = res.rows[i];
    GateConfig gc = g;
    gc.detuning = row.detuning;
    try {
      row.solution = optimize_pulse(modes, gc, mod, mass, opts);
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (baseline.modes) {
      try {
        const PulseSolution st = optimize_pulse(*baseline.modes, gc, flat, mass, opts);
        row.baseline_fidelity =
            evaluate_pulse(st.amplitudes, st.target_phase, modes, gc, mod, mass).fidelity;
      } catch (const Error& e) {
        if (row.error.empty()) row.error = std::string("baseline: ") + e.what();
      }
    }
  };
  jobs = std::max(1, std::min(jobs, steps));
  if (jobs == 1) {
    for (int i = 0; i < steps; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < steps; i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const auto& s = res.rows[i].solution;
    if (s && s->infidelity < best) {
      best = s->infidelity;
      res.best = i;
    }
  }
  return res;
}

}  // namespace mmgate
