#include "mmgate/trap_model.hpp"

#include <cmath>
#include <sstream>

#include "mmgate/errors.hpp"
#include "mmgate/units.hpp"

namespace mmgate {

UnstableRegion::UnstableRegion(double a, double q, const std::string& where)
    : Error([&] {
        std::ostringstream os;
        os.precision(10);
        os << "unstable Mathieu parameters (a=" << a << ", q=" << q << ")";
        if (!where.empty()) os << " on " << where;
        return os.str();
      }()),
      a_(a),
      q_(q) {}

void TrapConfig::validate() const {
  if (!(rf_angular_freq > 0)) throw ConfigError("rf frequency must be positive");
  if (!(electrode_size > 0)) throw ConfigError("electrode size d0 must be positive");
  if (!(ion_mass > 0)) throw ConfigError("ion mass must be positive");
  if (ion_count < 1) throw ConfigError("ion count must be at least 1");
  if (!(std::abs(anisotropy) < 1)) throw ConfigError("anisotropy must satisfy |gamma| < 1");
  if (ion_charge == 0) throw ConfigError("ion charge must be nonzero");
}

MathieuParams mathieu_parameters(const TrapConfig& cfg) {
  cfg.validate();
  const double e = cfg.ion_charge * units::volt_energy();
  const double scale = cfg.ion_mass * cfg.electrode_size * cfg.electrode_size *
                       cfg.rf_angular_freq * cfg.rf_angular_freq;
  MathieuParams p;
  const double base = 8.0 * e * cfg.dc_voltage / scale;
  p.a_x = base * (1.0 + cfg.anisotropy);
  p.a_y = base * (1.0 - cfg.anisotropy);
  // Written as -(a_x + a_y) so the Laplace sum vanishes in floating point.
  p.a_z = -(p.a_x + p.a_y);
  p.q_x = -4.0 * e * cfg.rf_voltage / scale;
  p.q_y = p.q_x;
  p.q_z = -2.0 * p.q_x;
  return p;
}

namespace {

// sin(x)/x for real or imaginary x, given x^2.
double sinc_from_square(double x2) {
  if (std::abs(x2) < 1e-8) return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  if (x2 > 0) {
    const double x = std::sqrt(x2);
    return std::sin(x) / x;
  }
  const double x = std::sqrt(-x2);
  return std::sinh(x) / x;
}

}  // namespace

namespace {

double hill_truncated(double a, double q, int order) {
  // Hill determinant with rows n != 0 normalised by (2n)^2 - a and row 0
  // multiplied by -a, so the a -> 0 limit stays finite:
  //   sin^2(pi beta / 2) = -(pi^2/4) sinc^2(pi sqrt(a)/2) det'.
  // Row n has diagonal d_n and equal off-diagonals o_n.
  double dm2 = 1.0, dm1 = 1.0;
  double prev_off = 0.0;
  bool first = true;
  for (int n = -order; n <= order; ++n) {
    const double diag = n == 0 ? -a : 1.0;
    const double off = n == 0 ? q : q / (4.0 * n * n - a);
    const double dk = first ? diag : diag * dm1 - off * prev_off * dm2;
    first = false;
    dm2 = dm1;
    dm1 = dk;
    prev_off = off;
  }
  const double half_pi = units::kPi / 2.0;
  const double s = sinc_from_square(half_pi * half_pi * a);
  return -half_pi * half_pi * s * s * dm1;
}

}  // namespace

double hill_discriminant(double a, double q, int order) {
  // The truncation error decays only as order^-3, so the order is doubled
  // until successive values agree.
  if (order < 1) order = 1;
  double prev = hill_truncated(a, q, order);
  for (int n = 2 * order; n <= 16384; n *= 2) {
    const double cur = hill_truncated(a, q, n);
    if (std::abs(cur - prev) <= 1e-16) return cur;
    prev = cur;
  }
  return prev;
}

double characteristic_exponent(double a, double q, int order) {
  if (q == 0.0) {
    if (a < 0 || a >= 1) throw UnstableRegion(a, q);
    return std::sqrt(a);
  }
  const double sin2 = hill_discriminant(a, q, order);
  if (!(sin2 >= 0.0 && sin2 <= 1.0)) throw UnstableRegion(a, q);
  return 2.0 / units::kPi * std::asin(std::sqrt(sin2));
}

SecularFrequencies secular_frequencies(MathieuParams& p, const TrapConfig& cfg) {
  auto beta_of = [](double a, double q, const char* axis) {
    try {
      return characteristic_exponent(a, q);
    } catch (const UnstableRegion&) {
      throw UnstableRegion(a, q, std::string(axis) + " axis");
    }
  };
  p.beta_x = beta_of(p.a_x, p.q_x, "x");
  p.beta_y = beta_of(p.a_y, p.q_y, "y");
  p.beta_z = beta_of(p.a_z, p.q_z, "z");
  const double half = cfg.rf_angular_freq / 2.0;
  p.omega_x = p.beta_x * half;
  p.omega_y = p.beta_y * half;
  p.omega_z = p.beta_z * half;
  SecularFrequencies s{p.omega_x, p.omega_y, p.omega_z, Planarity::Ok};
  const double in_plane = std::max(p.omega_x, p.omega_y);
  if (!(p.omega_z >= kPlanarityRatio * in_plane)) s.planarity = Planarity::Warning;
  return s;
}

MathieuParams full_mathieu_parameters(const TrapConfig& cfg, Planarity* planarity) {
  MathieuParams p = mathieu_parameters(cfg);
  const SecularFrequencies s = secular_frequencies(p, cfg);
  if (planarity) *planarity = s.planarity;
  return p;
}

double dc_curvature_x(const TrapConfig& cfg) {
  return 2.0 * (1.0 + cfg.anisotropy) * cfg.ion_charge * units::volt_energy() * cfg.dc_voltage /
         (cfg.electrode_size * cfg.electrode_size);
}

double dc_curvature_y(const TrapConfig& cfg) {
  return 2.0 * (1.0 - cfg.anisotropy) * cfg.ion_charge * units::volt_energy() * cfg.dc_voltage /
         (cfg.electrode_size * cfg.electrode_size);
}

double pair_coupling(const TrapConfig& cfg) {
  return units::coulomb_constant() * cfg.ion_charge * cfg.ion_charge;
}

}  // namespace mmgate
