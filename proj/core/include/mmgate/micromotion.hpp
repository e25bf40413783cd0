#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mmgate/coulomb.hpp"
#include "mmgate/trap_model.hpp"

namespace mmgate {

// Quadratic model of the Coulomb energy in interleaved in-plane coordinates:
//   V_C(r) ~ const + linear . r + r^T hessian r / 2.
// `drive` holds the cos(n Omega_T t) harmonics of the linear term; for the
// static expansion only column 0 is populated and equals `linear`.
struct QuadraticExpansion {
  Eigen::MatrixXd hessian;      // M_C, 2N x 2N
  Eigen::VectorXd gradient;     // grad V_C at the expansion point
  Eigen::VectorXd linear;       // gradient - hessian * r0
  Eigen::VectorXd dc_diagonal;  // diagonal of M_DC
  Eigen::MatrixXd drive;        // 2N x (H+1)
};

struct NormalCoordinateSystem {
  Eigen::MatrixXd q;          // rows are normal coordinates: s = Q r
  Eigen::VectorXd lambda;     // eigenvalues of M_DC + M_C, ascending
  Eigen::VectorXd a;          // 4 lambda / (m Omega_T^2)
  Eigen::MatrixXd f;          // per coordinate drive harmonics, 2N x (H+1)
};

// Solution of s'' + (a - 2 q cos 2x) s = sum_n f_n cos 2nx as s = sum_n c_n cos 2nx.
struct DrivenMathieuSolution {
  std::vector<double> coefficients;  // c_0..c_nmax
};

enum class ExpansionKind {
  Static,          // Taylor expansion about r0 only
  PeriodAveraged,  // curvature and drive averaged along the current orbit
};

struct MicromotionOptions {
  ExpansionKind expansion = ExpansionKind::PeriodAveraged;
  double tolerance = 1e-4;  // um, max per-ion change of r0
  int max_iterations = 50;
  int harmonics = 10;       // rf harmonics kept in the trajectory
  int samples = 64;         // phase samples per rf period for averaging
  int anderson_depth = 6;
  double mixing = 0.5;
  // Coordinates whose monodromy trace exceeds 2 by at most this much are
  // accepted as marginal (soft rotation of a nearly isotropic crystal).
  double marginal_trace_excess = 1e-5;
};

struct MicromotionExpansion {
  Positions r0, r1, r2;
  Eigen::MatrixXd harmonics;         // 2N x (H+1), column n multiplies cos(n Omega_T t)
  NormalCoordinateSystem normal;     // from the final iteration
  Eigen::MatrixXd coordinate_series;  // 2N x (nmax+1), s_i harmonics
  std::vector<DrivenMathieuSolution> unit_series;  // per coordinate, unit constant drive
  std::vector<double> amplitude;     // per ion, max |r(t) - r0| over a period
  ExpansionKind expansion = ExpansionKind::PeriodAveraged;
  double q = 0.0;
  double rf_angular_freq = 0.0;
  int iterations = 0;
  double last_change = 0.0;
  bool converged = false;
  int marginal_coordinates = 0;    // stable only within marginal_trace_excess

  int ion_count() const { return static_cast<int>(r0.rows()); }
  // Position of every ion at rf phase theta = Omega_T t.
  Positions at_phase(double theta) const;
};

inline constexpr int kMaxSeriesOrder = 20;

QuadraticExpansion quadratic_expansion(const Positions& r0, const TrapConfig& trap);

// Period-averaged expansion along the trajectory given by cosine harmonics
// (2N x (H+1)), sampled at `samples` rf phases.
QuadraticExpansion averaged_expansion(const Eigen::MatrixXd& harmonics, const TrapConfig& trap,
                                      int samples);

NormalCoordinateSystem normal_coordinates(const QuadraticExpansion& e, const TrapConfig& trap);

// Unit constant drive: a c0 - q c1 = 1, ... Truncation grows until
// |c_nmax| < 1e-12 max|c|, capped at kMaxSeriesOrder.
DrivenMathieuSolution solve_driven_mathieu(double a, double q);
// General cosine drive f_0..f_H.
DrivenMathieuSolution solve_driven_mathieu(double a, double q, std::span<const double> drive);

// max over a period of |s'' + (a - 2q cos 2x) s - f(x)|.
double driven_mathieu_residual(double a, double q, std::span<const double> series,
                               std::span<const double> drive, int samples = 256);

MicromotionExpansion self_consistent_positions(const Positions& crystal, const TrapConfig& trap,
                                               const MicromotionOptions& opts = {});
// Warm start from a previous expansion (all harmonics reused).
MicromotionExpansion self_consistent_positions(const MicromotionExpansion& start,
                                               const TrapConfig& trap,
                                               const MicromotionOptions& opts = {});

std::vector<double> micromotion_amplitudes(const MicromotionExpansion& e);

// Mean per-ion distance between two position sets.
double mean_displacement(const Positions& a, const Positions& b);

}  // namespace mmgate
