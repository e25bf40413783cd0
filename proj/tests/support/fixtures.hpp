#pragma once

#include <random>

#include <Eigen/Dense>

#include "mmgate/crystal.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/trap_model.hpp"
#include "mmgate/transverse_modes.hpp"
#include "mmgate/units.hpp"

namespace mmgate::testing {

// The 171 u planar trap used throughout the examples.
inline TrapConfig planar_trap(int ions) {
  TrapConfig t;
  t.dc_voltage = -1.1;
  t.rf_voltage = 90.0;
  t.rf_angular_freq = units::angular_from_mhz(50.0);
  t.electrode_size = 200.0;
  t.anisotropy = 0.01;
  t.ion_mass = 171.0;
  t.ion_count = ions;
  return t;
}

struct SmallCrystal {
  TrapConfig trap;
  MathieuParams mp;
  CrystalState crystal;
  MicromotionExpansion mm;
};

inline SmallCrystal small_crystal(int ions, const TrapConfig* base = nullptr) {
  SmallCrystal s;
  s.trap = base ? *base : planar_trap(ions);
  s.trap.ion_count = ions;
  s.mp = full_mathieu_parameters(s.trap);
  s.crystal = relax(seed_hexagonal(ions, 7.0), s.mp.omega_x, s.mp.omega_y, s.trap.ion_mass,
                    s.trap.ion_charge);
  s.mm = self_consistent_positions(s.crystal.positions, s.trap);
  return s;
}

// Random orthonormal mode set with frequencies in [lo, hi].
inline TransverseModeSet synthetic_modes(int k, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(lo, hi);
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = gauss(rng);
  TransverseModeSet set;
  set.modes = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
  set.frequencies.resize(k);
  for (int i = 0; i < k; ++i) set.frequencies[i] = uni(rng);
  std::sort(set.frequencies.data(), set.frequencies.data() + k);
  return set;
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uni(rng);
  return v;
}

}  // namespace mmgate::testing
