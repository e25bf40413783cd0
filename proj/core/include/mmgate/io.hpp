#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmgate/crystal.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/trap_model.hpp"
#include "mmgate/transverse_modes.hpp"

namespace mmgate::io {

inline constexpr const char* kToolVersion = MMGATE_VERSION_STRING;

// Flat "key = value" configuration; '#' starts a comment. Keys:
//   dc_voltage_V, rf_voltage_V, rf_freq_MHz, electrode_size_um, anisotropy,
//   ion_mass_u, ion_charge_e, ion_count, seed_spacing_um,
//   micromotion_expansion (averaged|static), micromotion_harmonics.
// *_freq_MHz values are ordinary frequencies, stored internally as rad/us.
struct RunConfig {
  TrapConfig trap;
  double rf_freq_mhz = 0.0;  // as written; trap.rf_angular_freq is derived
  double seed_spacing = 7.0;
  MicromotionOptions micromotion;
};

RunConfig parse_config(std::string_view text);  // throws ConfigError
RunConfig load_config(const std::filesystem::path& path);
std::string canonical_config(const RunConfig& cfg);
std::string fnv1a_hex(std::string_view data);
std::string config_hash(const RunConfig& cfg);

// Text helpers shared by the writers.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string format_double(double v);  // 17 significant digits

struct CrystalSnapshot {
  RunConfig config;
  std::string config_hash;
  MathieuParams mathieu;
  bool planar = true;
  Positions pseudo_positions;
  long relax_steps = 0;
  double relax_gradient_norm = 0.0;
  double relax_force_tolerance = 0.0;
  bool relax_converged = false;
  DistanceStats nn_stats;
  DistanceStats bond_stats;
  // Micromotion series.
  Eigen::MatrixXd harmonics;  // 2N x (H+1)
  std::vector<double> amplitude;
  int micromotion_iterations = 0;
  double micromotion_last_change = 0.0;
  double mean_shift = 0.0;  // um, r0 vs pseudo positions
};

std::string crystal_snapshot_text(const CrystalSnapshot& s);
CrystalSnapshot parse_crystal_snapshot(std::string_view text);

// Rebuilds the series trajectory (normal coordinates are not persisted).
MicromotionExpansion expansion_from(const CrystalSnapshot& s);

struct ModeSetRecord {
  std::string name;
  TransverseModeSet set;
};

struct ModeSnapshot {
  std::string crystal_hash;
  double omega_z = 0.0;
  std::vector<ModeSetRecord> sets;  // "static_pseudo", "static_selfconsistent", "averaged"
  // Shift reports keyed by description, e.g. "averaged_vs_static_selfconsistent".
  std::vector<std::pair<std::string, ModeShiftReport>> shifts;
  RwaBound rwa;
};

std::string mode_snapshot_text(const ModeSnapshot& s);
ModeSnapshot parse_mode_snapshot(std::string_view text);
const TransverseModeSet& find_set(const ModeSnapshot& s, const std::string& name);

struct PulseSnapshot {
  std::string crystal_hash;
  GateConfig gate;
  PulseSolution solution;
  std::optional<double> baseline_fidelity;
};

std::string pulse_snapshot_text(const PulseSnapshot& s);
PulseSnapshot parse_pulse_snapshot(std::string_view text);

// Columns mu_rad_per_us, mu_over_omega_z, infidelity, max_rabi_2pi_MHz,
// amp_1..amp_m [, baseline_fidelity] [, error].
std::string scan_csv(const ScanResult& scan, int segments, bool baseline);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, std::string>> stages;  // stage -> status
};

std::string manifest_text(const RunManifest& m);
std::string utc_timestamp();

}  // namespace mmgate::io
