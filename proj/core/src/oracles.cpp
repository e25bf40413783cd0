#include "mmgate/oracles.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "mmgate/errors.hpp"

namespace mmgate::oracles {

FloquetResult floquet_exponent(double a, double q, int steps) {
  const double h = units::kPi / steps;
  auto rhs = [&](double x, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(y[1], -(a - 2.0 * q * std::cos(2.0 * x)) * y[0]);
  };
  Eigen::Matrix2d mono;
  for (int col = 0; col < 2; ++col) {
    Eigen::Vector2d y = Eigen::Vector2d::Unit(col);
    for (int s = 0; s < steps; ++s) {
      const double x = s * h;
      const Eigen::Vector2d k1 = rhs(x, y);
      const Eigen::Vector2d k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1);
      const Eigen::Vector2d k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2);
      const Eigen::Vector2d k4 = rhs(x + h, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    mono.col(col) = y;
  }
  FloquetResult r;
  r.trace = mono.trace();
  r.determinant = mono.determinant();
  r.stable = std::abs(r.trace) <= 2.0;
  if (r.stable) r.beta = std::acos(0.5 * r.trace) / units::kPi;
  return r;
}

namespace {

struct EomForces {
  Eigen::VectorXd kdc;  // per coordinate, m Omega^2 a / 4
  Eigen::VectorXd krf;  // per coordinate, m Omega^2 (-2q) / 4
  double k;
  double omega;

  void accel(const Eigen::VectorXd& x, double t, double mass, Eigen::VectorXd& out) const {
    const double c = std::cos(omega * t);
    out = -(kdc.array() + krf.array() * c).matrix().cwiseProduct(x);
    const Eigen::Index n = x.size() / 2;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = x[2 * i], yi = x[2 * i + 1];
      double fx = 0.0, fy = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double dx = xi - x[2 * j], dy = yi - x[2 * j + 1];
        const double d2 = dx * dx + dy * dy;
        const double f = k / (d2 * std::sqrt(d2));
        fx += f * dx;
        fy += f * dy;
        out[2 * j] -= f * dx;
        out[2 * j + 1] -= f * dy;
      }
      out[2 * i] += fx;
      out[2 * i + 1] += fy;
    }
    out /= mass;
    // Coulomb terms were accumulated as forces; trap terms as forces too.
  }
};

}  // namespace

TrajectoryRecord integrate_full_eom(const TrapConfig& trap, const Positions& seed,
                                    const EomOptions& o) {
  if (seed.rows() > 19) throw ConfigError("integrate_full_eom: limited to N <= 19");
  MathieuParams mp = mathieu_parameters(trap);
  secular_frequencies(mp, trap);
  const double m = trap.ion_mass, w = trap.rf_angular_freq;
  const double period = units::kTwoPi / w;
  const int spp = o.steps_per_period;
  const double h = period / spp;
  const Eigen::Index dim = seed.size();
  const Eigen::Index n = seed.rows();

  EomForces F;
  F.kdc.resize(dim);
  F.krf.resize(dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    F.kdc[2 * i] = m * w * w / 4.0 * mp.a_x;
    F.kdc[2 * i + 1] = m * w * w / 4.0 * mp.a_y;
    F.krf[2 * i] = m * w * w / 4.0 * (-2.0 * mp.q_x);
    F.krf[2 * i + 1] = m * w * w / 4.0 * (-2.0 * mp.q_y);
  }
  F.k = pair_coupling(trap);
  F.omega = w;
  const double fric = o.damping_rate / period;  // acceleration per um of delay difference

  // Stage positions of the previous period, [step][stage].
  std::vector<std::array<Eigen::VectorXd, 4>> hist(static_cast<std::size_t>(spp));
  bool have_hist = false;
  Eigen::VectorXd x = flatten(seed), v = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd acc(dim);
  Eigen::VectorXd start = x;
  Eigen::VectorXd avg_prev, avg_prev2;

  auto secular_energy = [&](const Eigen::VectorXd& xa, const Eigen::VectorXd& va, double coulomb) {
    double e = 0.5 * m * va.squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i)
      e += 0.5 * m *
           (mp.omega_x * mp.omega_x * xa[2 * i] * xa[2 * i] +
            mp.omega_y * mp.omega_y * xa[2 * i + 1] * xa[2 * i + 1]);
    return e + coulomb;
  };

  const long quiet_needed =
      std::max(1L, static_cast<long>(std::ceil(units::kPi / (std::min(mp.omega_x, mp.omega_y) * period))));
  long quiet = 0;
  TrajectoryRecord rec;
  const int stride = std::max(1, spp / std::max(1, o.record_samples_per_period));
  double t = 0.0;
  for (long p = 0; p < o.max_periods; ++p) {
    if (o.cancel && o.cancel()) throw NoSettle("full-EOM integration cancelled");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    double coulomb_sum = 0.0;
    std::vector<double> times;
    std::vector<Positions> pos;
    for (int s = 0; s < spp; ++s) {
      auto& slot = hist[static_cast<std::size_t>(s)];
      auto stage = [&](int idx, const Eigen::VectorXd& xs, const Eigen::VectorXd& vs, double ts,
                       Eigen::VectorXd& dx, Eigen::VectorXd& dv) {
        F.accel(xs, ts, m, dv);
        if (have_hist) dv -= fric * (xs - slot[idx]);
        dx = vs;
        slot[idx] = xs;
      };
      if ((s % stride) == 0) {
        times.push_back(t);
        pos.push_back(unflatten(x));
      }
      sum += x;
      coulomb_sum += coulomb_energy(unflatten(x), F.k);
      Eigen::VectorXd k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
      stage(0, x, v, t, k1x, k1v);
      const Eigen::VectorXd x2 = x + 0.5 * h * k1x, v2 = v + 0.5 * h * k1v;
      stage(1, x2, v2, t + 0.5 * h, k2x, k2v);
      const Eigen::VectorXd x3 = x + 0.5 * h * k2x, v3 = v + 0.5 * h * k2v;
      stage(2, x3, v3, t + 0.5 * h, k3x, k3v);
      const Eigen::VectorXd x4 = x + h * k3x, v4 = v + h * k3v;
      stage(3, x4, v4, t + h, k4x, k4v);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      t = (static_cast<double>(p) * spp + s + 1) * h;
    }
    have_hist = true;
    if (x.cwiseAbs().maxCoeff() > o.runaway_radius) {
      std::ostringstream os;
      os << "ion left the " << o.runaway_radius << " um region after " << p + 1 << " periods";
      throw Runaway(os.str());
    }
    const Eigen::VectorXd avg = sum / spp;
    if (avg_prev.size())
      rec.secular_energy.push_back(secular_energy(avg, (avg - avg_prev) / period, coulomb_sum / spp));
    avg_prev = avg;
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      change = std::max(change, std::hypot(x[2 * i] - start[2 * i], x[2 * i + 1] - start[2 * i + 1]));
    start = x;
    rec.periods = p + 1;
    rec.periodicity_residual = change;
    // Keep the last two periods.
    if (rec.times.size() > times.size()) {
      rec.times.erase(rec.times.begin(), rec.times.begin() + static_cast<long>(rec.times.size() - times.size()));
      rec.positions.erase(rec.positions.begin(),
                          rec.positions.begin() + static_cast<long>(rec.positions.size() - pos.size()));
    }
    rec.times.insert(rec.times.end(), times.begin(), times.end());
    rec.positions.insert(rec.positions.end(), pos.begin(), pos.end());
    // A secular turning point also gives a small change, so the criterion
    // must hold for half a period of the slowest secular motion.
    quiet = (p > 0 && change < o.settle_tolerance) ? quiet + 1 : 0;
    if (quiet >= quiet_needed) {
      rec.settled = true;
      return rec;
    }
  }
  std::ostringstream os;
  os << "orbit did not settle within " << o.max_periods << " periods (last change "
     << rec.periodicity_residual << " um)";
  throw NoSettle(os.str());
}

Eigen::MatrixXd trajectory_harmonics(const TrajectoryRecord& rec, int harmonics) {
  const std::size_t total = rec.positions.size();
  const std::size_t per = total / 2;
  if (per == 0) throw Error("trajectory_harmonics: empty record");
  const double period = (rec.times[per] - rec.times[0]);
  const Eigen::Index dim = rec.positions[0].size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, harmonics + 1);
  for (std::size_t s = per; s < total; ++s) {
    const double theta = units::kTwoPi * (rec.times[s] - rec.times[per]) / period;
    const Eigen::VectorXd r = flatten(rec.positions[s]);
    for (int k = 0; k <= harmonics; ++k)
      out.col(k) += r * std::cos(k * theta) * (k == 0 ? 1.0 : 2.0) / static_cast<double>(per);
  }
  return out;
}

double fock_fidelity(const Eigen::MatrixXcd& alpha, double phi12, const Eigen::VectorXd& nbar,
                     int truncation, double target) {
  using cplx = std::complex<double>;
  const Eigen::Index kk = alpha.cols();
  if (nbar.size() != kk) throw Error("fock_fidelity: occupation count does not match mode count");
  const std::array<std::array<int, 2>, 4> sgn{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  const int pad = 40;
  const int dim = truncation + pad;

  // Ladder operator on the padded space.
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 1; j < dim; ++j) lower(j - 1, j) = std::sqrt(static_cast<double>(j));

  // Per-mode factor G_k(s, t) = tr(rho_k P D(beta_s)^dag P D(beta_t) P).
  std::vector<Eigen::Matrix4cd> factors;
  for (Eigen::Index k = 0; k < kk; ++k) {
    const double nb = nbar[k];
    const double ratio = nb / (nb + 1.0);
    const double tail = nb > 0 ? std::pow(ratio, truncation) : 0.0;
    double bmax = 0.0;
    std::array<cplx, 4> beta;
    for (int s = 0; s < 4; ++s) {
      beta[s] = static_cast<double>(sgn[s][0]) * alpha(0, k) + static_cast<double>(sgn[s][1]) * alpha(1, k);
      bmax = std::max(bmax, std::abs(beta[s]));
    }
    if (tail > 1e-8 || truncation < 10.0 * (nb + bmax * bmax + 1.0)) {
      std::ostringstream os;
      os << "Fock truncation " << truncation << " too small for nbar=" << nb
         << " (tail mass " << tail << ")";
      throw TruncationTooSmall(os.str());
    }
    std::array<Eigen::MatrixXcd, 4> disp;
    for (int s = 0; s < 4; ++s) {
      const Eigen::MatrixXcd gen = beta[s] * lower.adjoint() - std::conj(beta[s]) * lower;
      disp[s] = gen.exp().topLeftCorner(truncation, truncation);
    }
    Eigen::VectorXd p(truncation);
    for (int j = 0; j < truncation; ++j) p[j] = std::pow(ratio, j) / (nb + 1.0);
    Eigen::Matrix4cd g;
    for (int s = 0; s < 4; ++s)
      for (int t = 0; t < 4; ++t)
        g(s, t) = ((disp[s].adjoint() * disp[t]).diagonal().array() * p.cast<cplx>().array()).sum();
    factors.push_back(g);
  }
  const double delta = phi12 - target;
  cplx total = 0.0;
  for (int s = 0; s < 4; ++s) {
    for (int t = 0; t < 4; ++t) {
      cplx v = std::conj(std::polar(1.0, delta * sgn[s][0] * sgn[s][1])) *
               std::polar(1.0, delta * sgn[t][0] * sgn[t][1]);
      for (const auto& g : factors) v *= g(s, t);
      total += v;
    }
  }
  return std::real(total) / 16.0;
}

}  // namespace mmgate::oracles
