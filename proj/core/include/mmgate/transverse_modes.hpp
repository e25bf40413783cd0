#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mmgate/coulomb.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/trap_model.hpp"

namespace mmgate {

struct CouplingMatrices {
  Eigen::MatrixXd avg_inv_r3;      // <1/r_ij^3> over an rf period, um^-3
  Eigen::MatrixXd first_harmonic;  // 2 <cos(Omega_T t) / r_ij^3>
  Eigen::MatrixXd static_inv_r3;   // 1/r_ij^3 at r0
};

// Uniform `samples`-point average over one rf period of the series trajectory.
CouplingMatrices time_averaged_coupling(const MicromotionExpansion& e, int samples = 256);

// Couplings of a static configuration (all three matrices from r alone).
CouplingMatrices static_coupling(const Positions& r);

// Pair term in the transverse stiffness.
enum class TransverseCoupling {
  // sum_{i!=j} k/r^3 (z_i z_j - z_i^2): pair stiffness 2k/r^3.
  Literal,
  // Second-order expansion of k/|r_ij + z_ij|: pair stiffness k/r^3.
  PairExpansion,
};

struct TransverseModeSet {
  Eigen::VectorXd frequencies;  // rad/us, ascending
  Eigen::MatrixXd modes;        // column k is mode vector b^k
  Eigen::MatrixXd stiffness;    // u/us^2
  bool includes_micromotion = false;
};

TransverseModeSet transverse_mode_set(const Eigen::MatrixXd& inv_r3, double omega_z,
                                      const TrapConfig& trap, bool includes_micromotion,
                                      TransverseCoupling form = TransverseCoupling::Literal);

struct ModeShiftReport {
  std::vector<int> match;       // match[k] = index in `without` paired with mode k of `with`
  std::vector<double> overlap;  // |b_with^k . b_without^match[k]|
  std::vector<double> shift;    // omega_with - omega_without, rad/us
  double mean_abs_shift = 0.0;  // rad/us
  double max_overlap_deficit = 0.0;
};

// Greedy maximal-overlap matching; ties broken by frequency proximity.
// Throws AmbiguousMatching if any matched overlap is below 0.9.
ModeShiftReport mode_shift_report(const TransverseModeSet& with, const TransverseModeSet& without);

struct RwaBound {
  double frequency_bound = 0.0;  // max_k |q| (omega_k / Omega_T)^2
  double norm_bound = 0.0;       // |K_1| / |K| * max_k (omega_k / Omega_T)^2
};

RwaBound rwa_perturbation_bound(const CouplingMatrices& c, const TransverseModeSet& modes,
                                double rf_angular_freq, double q, const TrapConfig& trap,
                                TransverseCoupling form = TransverseCoupling::Literal);

}  // namespace mmgate
