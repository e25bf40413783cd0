#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmgate/coulomb.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/transverse_modes.hpp"
#include "mmgate/units.hpp"

namespace mmgate {

// Sign s of the conditional-phase target exp(i s pi/4 sz sz).
enum class TargetSign { Auto, Positive, Negative };

struct GateConfig {
  std::pair<int, int> pair{0, 1};
  double delta_k = 8.0;           // um^-1, along z
  double waist = 3.0;             // um
  double detuning = 0.0;          // mu, rad/us
  double gate_time = 0.0;         // tau, us
  int segments = 13;
  double thermal_rate = units::angular_from_mhz(10.0);  // k_B T / hbar, rad/us
  std::array<double, 2> phase_offset{0.0, 0.0};          // laser phase per ion at t = 0
  TargetSign target = TargetSign::Auto;

  void validate() const;
};

enum class PairSelector { Center, Edge };

// Center: the two ions closest to the origin. Edge: the nearest-neighbour pair
// (i, nn(i)) whose midpoint lies farthest from the origin.
std::pair<int, int> select_pair(const Positions& r, PairSelector which);

// Rabi-frequency envelope exp(-|r_j(t) - r_j0|^2 / w^2) as a cosine series in
// the rf phase theta = Omega_T t.
struct BeamModulation {
  std::vector<double> cosine{1.0};  // G_0..G_Nh
  double rf_angular_freq = 0.0;
  double reconstruction_error = 0.0;  // sup-norm over the sampled phases
  // Exact envelope as a function of theta; used by the quadrature route.
  std::function<double(double)> exact;

  double evaluate(double theta) const;
  double evaluate_exact(double theta) const { return exact ? exact(theta) : evaluate(theta); }
};

inline constexpr int kDefaultModulationHarmonics = 10;

// Exact envelope of ion j at rf phase theta.
double beam_envelope(const MicromotionExpansion& e, int ion, double waist, double theta);

BeamModulation beam_modulation(const MicromotionExpansion& e, int ion, double waist,
                               int harmonics = kDefaultModulationHarmonics, int samples = 512);

// Envelope identically one (static trap or modulation switched off).
BeamModulation unit_modulation();

using PairModulation = std::array<BeamModulation, 2>;

// Lamb-Dicke parameter delta_k sqrt(hbar / (2 m omega)).
double lamb_dicke_parameter(double delta_k, double mass, double omega);

// Bose-Einstein occupations at k_B T / hbar = thermal_rate.
Eigen::VectorXd thermal_occupations(const Eigen::VectorXd& frequencies, double thermal_rate);

enum class IntegrationRoute { Analytic, Quadrature };

// A[j] is K x m: alpha_j^k = sum_i x_i A[j](k, i).
using AlphaTensor = std::array<Eigen::MatrixXcd, 2>;

AlphaTensor alpha_map(const TransverseModeSet& modes, const GateConfig& g,
                      const PairModulation& mod, double mass,
                      IntegrationRoute route = IntegrationRoute::Analytic);

// Symmetric m x m matrix with phi12 = x^T W x.
Eigen::MatrixXd phase_map(const TransverseModeSet& modes, const GateConfig& g,
                          const PairModulation& mod, double mass,
                          IntegrationRoute route = IntegrationRoute::Analytic);

// alpha as a 2 x K matrix for amplitudes x.
Eigen::MatrixXcd apply_alpha(const AlphaTensor& a, const Eigen::VectorXd& x);

// Thermal gate fidelity with reference exp(i target sz sz). Exact for
// displacement-type evolution: every branch pair contributes a composition
// phase and a Gaussian thermal factor.
double fidelity(const Eigen::MatrixXcd& alpha, double phi12, const Eigen::VectorXd& nbar,
                double target = units::kPi / 4.0);

// M with 1 - F ~ x^T M x for small residual displacement at the target phase.
Eigen::MatrixXd infidelity_quadratic_proxy(const AlphaTensor& a, const Eigen::VectorXd& nbar);

struct PulseSolution {
  Eigen::VectorXd amplitudes;  // rad/us per segment
  Eigen::MatrixXcd alpha;      // 2 x K
  double phi12 = 0.0;
  double target_phase = units::kPi / 4.0;
  double fidelity = 0.0;
  double infidelity = 1.0;
  double proxy_infidelity = 0.0;  // x^T M x at the returned amplitudes
  double max_rabi = 0.0;          // rad/us
  bool proxy_regularized = false;
};

struct OptimizeOptions {
  int refine_iterations = 200;
  IntegrationRoute route = IntegrationRoute::Analytic;
};

PulseSolution optimize_pulse(const TransverseModeSet& modes, const GateConfig& g,
                             const PairModulation& mod, double mass,
                             const OptimizeOptions& opts = {});

// Evaluates fixed amplitudes under another mode set / modulation.
PulseSolution evaluate_pulse(const Eigen::VectorXd& amplitudes, double target_phase,
                             const TransverseModeSet& modes, const GateConfig& g,
                             const PairModulation& mod, double mass);

struct ScanRow {
  double detuning = 0.0;  // rad/us
  double detuning_over_omega_z = 0.0;
  std::optional<PulseSolution> solution;
  std::string error;
  std::optional<double> baseline_fidelity;  // static pulse applied with micromotion
};

struct ScanResult {
  std::vector<ScanRow> rows;
  int best = -1;  // index of the smallest infidelity, -1 if every point failed
};

// Static-trap reference used for the baseline column.
struct StaticBaseline {
  const TransverseModeSet* modes = nullptr;
};

// Half-open grid mu_i = lo + i (hi - lo) / steps, i < steps, so doubling the
// step count refines the grid. Rows are ordered by mu whatever `jobs` is.
ScanResult scan_detuning(const TransverseModeSet& modes, const GateConfig& g,
                         const PairModulation& mod, double mass, double mu_lo, double mu_hi,
                         int steps, int jobs = 1, StaticBaseline baseline = {},
                         const OptimizeOptions& opts = {});

struct StaticCrosscheck {
  double static_on_static = 0.0;
  double static_on_micromotion = 0.0;
  PulseSolution pulse;
};

// Optimizes with unit modulation on the static modes, then re-evaluates the
// same amplitudes with the micromotion modulation and mode set.
StaticCrosscheck static_pulse_crosscheck(const TransverseModeSet& modes_static,
                                         const TransverseModeSet& modes_micromotion,
                                         const GateConfig& g, const PairModulation& mod_micromotion,
                                         double mass, const OptimizeOptions& opts = {});

struct ErrorBudget {
  double crosstalk = 0.0;             // P_c
  double thermal_spread = 0.0;        // dF_1
  double lamb_dicke = 0.0;            // dF_2
  double micromotion_residual = 0.0;  // |q|^3
  double distance = 0.0;              // um
  double delta_r = 0.0;               // um
  double eta_z = 0.0;
  double nbar_z = 0.0;
};

ErrorBudget error_budget(double distance, double waist, double delta_r, double eta_z,
                         double nbar_z, double q);

// Uses the pair distance from the crystal and eta_z at the centre-of-mass mode.
ErrorBudget error_budget(const GateConfig& g, const Positions& crystal,
                         const TransverseModeSet& modes, double delta_r, double nbar_z,
                         double mass, double q);

// sqrt(k_B T / (m omega^2)) along x and y combined in quadrature (um).
double thermal_width(double thermal_rate, double mass, double omega_x, double omega_y);

}  // namespace mmgate
