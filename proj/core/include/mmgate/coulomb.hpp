#pragma once

#include <Eigen/Dense>

namespace mmgate {

// N x 2 ion positions (um), row-major so the storage is x1,y1,x2,y2,...
using Positions = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

inline Eigen::Map<const Eigen::VectorXd> flatten(const Positions& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
}
inline Positions unflatten(const Eigen::VectorXd& v) {
  return Eigen::Map<const Positions>(v.data(), v.size() / 2, 2);
}

// Pair energy sum_{i<j} k / r_ij.
double coulomb_energy(const Positions& r, double k);

// Gradient of the pair energy, interleaved (2N). Throws CoincidentIons.
Eigen::VectorXd coulomb_gradient(const Positions& r, double k);

// Gradient and 2N x 2N Hessian of the pair energy. Throws CoincidentIons.
void coulomb_derivatives(const Positions& r, double k, Eigen::VectorXd& gradient,
                         Eigen::MatrixXd& hessian);

// Smallest pair distance (infinity for N < 2).
double min_pair_distance(const Positions& r);

}  // namespace mmgate
