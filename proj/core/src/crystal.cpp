#include "mmgate/crystal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "mmgate/errors.hpp"
#include "mmgate/units.hpp"

namespace mmgate {

Positions seed_hexagonal(int n, double spacing) {
  if (n < 1) throw ConfigError("seed_hexagonal: ion count must be at least 1");
  std::vector<std::array<double, 2>> pts{{0.0, 0.0}};
  for (int k = 1; static_cast<int>(pts.size()) < n; ++k) {
    std::vector<std::array<double, 3>> shell;  // x, y, angle
    for (int c = 0; c < 6; ++c) {
      const double t0 = units::kPi / 3.0 * c, t1 = units::kPi / 3.0 * (c + 1);
      const double ax = k * spacing * std::cos(t0), ay = k * spacing * std::sin(t0);
      const double bx = k * spacing * std::cos(t1), by = k * spacing * std::sin(t1);
      for (int t = 0; t < k; ++t) {
        const double x = ax + (bx - ax) * t / k, y = ay + (by - ay) * t / k;
        double ang = std::atan2(y, x);
        if (ang < 0) ang += units::kTwoPi;
        shell.push_back({x, y, ang});
      }
    }
    std::stable_sort(shell.begin(), shell.end(),
                     [](const auto& a, const auto& b) { return a[2] < b[2]; });
    for (const auto& p : shell) {
      if (static_cast<int>(pts.size()) == n) break;
      pts.push_back({p[0], p[1]});
    }
  }
  Positions r(n, 2);
  for (int i = 0; i < n; ++i) r.row(i) << pts[i][0], pts[i][1];
  const Eigen::RowVector2d centroid = r.colwise().mean();
  if (centroid.norm() > 1e-12 * spacing) r.rowwise() -= centroid;
  return r;
}

namespace {

// Total pseudopotential force; returns the smallest pair distance squared.
double total_force(const Positions& r, double kx, double ky, double k, Positions& f) {
  const Eigen::Index n = r.rows();
  f.resize(n, 2);
  double min_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    f(i, 0) = -kx * r(i, 0);
    f(i, 1) = -ky * r(i, 1);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = r(i, 0), yi = r(i, 1);
    double fx = 0.0, fy = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = xi - r(j, 0), dy = yi - r(j, 1);
      const double d2 = dx * dx + dy * dy;
      min_d2 = std::min(min_d2, d2);
      const double c = k / (d2 * std::sqrt(d2));
      fx += c * dx;
      fy += c * dy;
      f(j, 0) -= c * dx;
      f(j, 1) -= c * dy;
    }
    f(i, 0) += fx;
    f(i, 1) += fy;
  }
  return min_d2;
}

double max_row_norm(const Positions& f) {
  return f.rows() == 0 ? 0.0 : f.rowwise().norm().maxCoeff();
}

}  // namespace

double pseudopotential_energy(const Positions& r, double omega_x, double omega_y, double mass,
                              double charge) {
  const double k = units::coulomb_constant() * charge * charge;
  const double trap = 0.5 * mass *
                      (omega_x * omega_x * r.col(0).squaredNorm() +
                       omega_y * omega_y * r.col(1).squaredNorm());
  return trap + coulomb_energy(r, k);
}

CrystalState relax(const Positions& seed, double omega_x, double omega_y, double mass,
                   double charge, const RelaxOptions& opts) {
  if (!(omega_x > 0 && omega_y > 0 && mass > 0))
    throw ConfigError("relax: frequencies and mass must be positive");
  const double k = units::coulomb_constant() * charge * charge;
  const double kx = mass * omega_x * omega_x, ky = mass * omega_y * omega_y;
  const double wmax = std::max(omega_x, omega_y);
  const double dt = opts.step_factor / wmax;
  const double eta = opts.damping_factor * mass * wmax;
  const double guard2 = opts.collision_distance * opts.collision_distance;

  if (min_pair_distance(seed) < opts.collision_distance)
    throw CollisionDetected("seed places ions within the collision distance");

  CrystalState st;
  st.force_tolerance = opts.tolerance_factor * mass * omega_x * omega_x;
  Positions r = seed;
  Positions v = Positions::Zero(r.rows(), 2);
  Positions f;
  total_force(r, kx, ky, k, f);
  st.gradient_norm = max_row_norm(f);

  // Velocity Verlet; the damping term is applied half explicitly, half
  // implicitly so the update stays stable for any eta*dt/m.
  const double half = 0.5 * dt / mass;
  const double implicit = 1.0 / (1.0 + 0.5 * dt * eta / mass);
  long step = 0;
  for (; step < opts.max_steps && st.gradient_norm > st.force_tolerance; ++step) {
    if (opts.energy_stride > 0 && step % opts.energy_stride == 0)
      st.energy_trace.push_back(pseudopotential_energy(r, omega_x, omega_y, mass, charge));
    v += half * (f - eta * v);
    r += dt * v;
    const double min_d2 = total_force(r, kx, ky, k, f);
    if (min_d2 < guard2) {
      std::ostringstream os;
      os << "ions approached within " << std::sqrt(min_d2) << " um at step " << step;
      throw CollisionDetected(os.str());
    }
    v = (v + half * f) * implicit;
    st.gradient_norm = max_row_norm(f);
  }
  if (opts.energy_stride > 0)
    st.energy_trace.push_back(pseudopotential_energy(r, omega_x, omega_y, mass, charge));
  st.steps = step;
  st.converged = st.gradient_norm <= st.force_tolerance;
  st.positions = std::move(r);
  st.nn_stats = nn_statistics(st.positions);
  return st;
}

std::vector<int> nearest_neighbours(const Positions& r) {
  const int n = static_cast<int>(r.rows());
  std::vector<int> nn(n, -1);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (r.row(i) - r.row(j)).squaredNorm();
      if (d < best) {
        best = d;
        nn[i] = j;
      }
    }
  }
  return nn;
}

namespace {

DistanceStats summarize(std::vector<double> d) {
  DistanceStats s;
  if (!d.empty()) {
    s.min = *std::min_element(d.begin(), d.end());
    s.max = *std::max_element(d.begin(), d.end());
    double sum = 0.0;
    for (double x : d) sum += x;
    s.mean = sum / static_cast<double>(d.size());
  }
  s.distances = std::move(d);
  return s;
}

}  // namespace

DistanceStats nn_statistics(const Positions& r) {
  const auto nn = nearest_neighbours(r);
  std::vector<double> d;
  d.reserve(nn.size());
  for (std::size_t i = 0; i < nn.size(); ++i)
    if (nn[i] >= 0) d.push_back((r.row(static_cast<Eigen::Index>(i)) - r.row(nn[i])).norm());
  return summarize(std::move(d));
}

BondGraph bond_statistics(const Positions& r) {
  const int n = static_cast<int>(r.rows());
  BondGraph g;
  std::vector<double> d;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::RowVector2d mid = 0.5 * (r.row(i) + r.row(j));
      const double rad2 = 0.25 * (r.row(i) - r.row(j)).squaredNorm();
      bool empty = true;
      for (int k = 0; k < n && empty; ++k) {
        if (k == i || k == j) continue;
        if ((r.row(k) - mid).squaredNorm() < rad2 * (1.0 - 1e-12)) empty = false;
      }
      if (empty) {
        g.bonds.emplace_back(i, j);
        d.push_back(std::sqrt(4.0 * rad2));
      }
    }
  }
  g.stats = summarize(std::move(d));
  return g;
}

}  // namespace mmgate
