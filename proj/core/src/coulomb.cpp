#include "mmgate/coulomb.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mmgate/errors.hpp"

namespace mmgate {

namespace {

constexpr double kCoincidence = 1e-9;  // um

[[noreturn]] void coincident(int i, int j) {
  std::ostringstream os;
  os << "ions " << i << " and " << j << " coincide";
  throw CoincidentIons(os.str());
}

}  // namespace

double coulomb_energy(const Positions& r, double k) {
  const int n = static_cast<int>(r.rows());
  double e = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e += k / (r.row(i) - r.row(j)).norm();
  return e;
}

Eigen::VectorXd coulomb_gradient(const Positions& r, double k) {
  const int n = static_cast<int>(r.rows());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = r(i, 0) - r(j, 0);
      const double dy = r(i, 1) - r(j, 1);
      const double d2 = dx * dx + dy * dy;
      if (d2 < kCoincidence * kCoincidence) coincident(i, j);
      const double inv = 1.0 / std::sqrt(d2);
      const double c = -k * inv * inv * inv;
      g[2 * i] += c * dx;
      g[2 * i + 1] += c * dy;
      g[2 * j] -= c * dx;
      g[2 * j + 1] -= c * dy;
    }
  }
  return g;
}

void coulomb_derivatives(const Positions& r, double k, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
  const int n = static_cast<int>(r.rows());
  g.setZero(2 * n);
  h.setZero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = r(i, 0) - r(j, 0);
      const double dy = r(i, 1) - r(j, 1);
      const double d2 = dx * dx + dy * dy;
      if (d2 < kCoincidence * kCoincidence) coincident(i, j);
      const double inv = 1.0 / std::sqrt(d2);
      const double inv3 = inv * inv * inv;
      const double inv5 = inv3 * inv * inv;
      const double c = -k * inv3;
      g[2 * i] += c * dx;
      g[2 * i + 1] += c * dy;
      g[2 * j] -= c * dx;
      g[2 * j + 1] -= c * dy;
      // d^2(k/r)/dd_a dd_b = k (3 d_a d_b / r^5 - delta_ab / r^3)
      const double bxx = k * (3.0 * dx * dx * inv5 - inv3);
      const double byy = k * (3.0 * dy * dy * inv5 - inv3);
      const double bxy = k * 3.0 * dx * dy * inv5;
      const int a = 2 * i, b = 2 * j;
      h(a, a) += bxx;
      h(a + 1, a + 1) += byy;
      h(a, a + 1) += bxy;
      h(a + 1, a) += bxy;
      h(b, b) += bxx;
      h(b + 1, b + 1) += byy;
      h(b, b + 1) += bxy;
      h(b + 1, b) += bxy;
      h(a, b) -= bxx;
      h(a + 1, b + 1) -= byy;
      h(a, b + 1) -= bxy;
      h(a + 1, b) -= bxy;
      h(b, a) -= bxx;
      h(b + 1, a + 1) -= byy;
      h(b, a + 1) -= bxy;
      h(b + 1, a) -= bxy;
    }
  }
}

double min_pair_distance(const Positions& r) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = i + 1; j < r.rows(); ++j)
      best = std::min(best, (r.row(i) - r.row(j)).norm());
  return best;
}

}  // namespace mmgate
