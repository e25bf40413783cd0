#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmgate/crystal.hpp"
#include "mmgate/errors.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/io.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/trap_model.hpp"
#include "mmgate/transverse_modes.hpp"
#include "mmgate/units.hpp"
#include "mmgate/verification.hpp"

using namespace mmgate;

namespace {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kNonConvergence = 3,
  kInstability = 4,
  kImaginary = 5,
  kGateTarget = 6,
  kVerifyBreach = 7,
};

std::string mhz(double omega) { return io::format_double(units::mhz_from_angular(omega)); }

std::string manifest_path(const std::string& explicit_path, const std::string& out) {
  return explicit_path.empty() ? out + ".manifest.json" : explicit_path;
}

void write_manifest(io::RunManifest m, const std::string& path) {
  m.finished_at = io::utc_timestamp();
  io::write_text(path, io::manifest_text(m));
}

TrapConfig default_trap(int ions) {
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

// ---------------------------------------------------------------- relax

struct RelaxArgs {
  std::string config, out, manifest;
};

int cmd_relax(const RelaxArgs& a) {
  io::RunManifest man;
  man.command = "relax";
  man.started_at = io::utc_timestamp();
  man.inputs = {a.config};
  const io::RunConfig cfg = io::load_config(a.config);
  man.config_hash = io::config_hash(cfg);

  Planarity planarity = Planarity::Ok;
  const MathieuParams mp = full_mathieu_parameters(cfg.trap, &planarity);
  man.stages.emplace_back("mathieu", "ok");
  std::cout << "a = (" << mp.a_x << ", " << mp.a_y << ", " << mp.a_z << "), q = " << mp.q_x << "\n"
            << "omega/2pi = (" << mhz(mp.omega_x) << ", " << mhz(mp.omega_y) << ", "
            << mhz(mp.omega_z) << ") MHz\n";
  if (planarity == Planarity::Warning)
    std::cerr << "warning: omega_z / max(omega_x, omega_y) < " << kPlanarityRatio << "\n";

  const CrystalState st = relax(seed_hexagonal(cfg.trap.ion_count, cfg.seed_spacing), mp.omega_x,
                                mp.omega_y, cfg.trap.ion_mass, cfg.trap.ion_charge);
  if (!st.converged) {
    std::ostringstream os;
    os << "relaxation stopped after " << st.steps << " steps with force norm "
       << st.gradient_norm << " (tolerance " << st.force_tolerance << ")";
    throw NonConvergence(os.str());
  }
  man.stages.emplace_back("relax", "ok");

  const MicromotionExpansion e = self_consistent_positions(st.positions, cfg.trap, cfg.micromotion);
  man.stages.emplace_back("micromotion", "ok");
  if (e.marginal_coordinates > 0)
    std::cerr << "note: " << e.marginal_coordinates
              << " normal coordinate(s) marginally outside the Mathieu stability region\n";

  io::CrystalSnapshot s;
  s.config = cfg;
  s.config_hash = man.config_hash;
  s.mathieu = mp;
  s.planar = planarity == Planarity::Ok;
  s.pseudo_positions = st.positions;
  s.relax_steps = st.steps;
  s.relax_gradient_norm = st.gradient_norm;
  s.relax_force_tolerance = st.force_tolerance;
  s.relax_converged = st.converged;
  s.nn_stats = st.nn_stats;
  s.bond_stats = bond_statistics(st.positions).stats;
  s.harmonics = e.harmonics;
  s.amplitude = e.amplitude;
  s.micromotion_iterations = e.iterations;
  s.micromotion_last_change = e.last_change;
  s.mean_shift = mean_displacement(e.r0, st.positions);
  io::write_text(a.out, io::crystal_snapshot_text(s));
  man.outputs = {a.out};

  double max_amp = 0.0;
  for (double v : e.amplitude) max_amp = std::max(max_amp, v);
  std::cout << "ions " << cfg.trap.ion_count << ", relax steps " << st.steps << "\n"
            << "nearest-neighbour distance (min, max, mean) = (" << s.nn_stats.min << ", "
            << s.nn_stats.max << ", " << s.nn_stats.mean << ") um\n"
            << "bond length (min, max, mean) = (" << s.bond_stats.min << ", " << s.bond_stats.max
            << ", " << s.bond_stats.mean << ") um\n"
            << "micromotion: " << e.iterations << " iterations, mean shift " << s.mean_shift
            << " um, max amplitude " << max_amp << " um\n"
            << "wrote " << a.out << "\n";
  write_manifest(man, manifest_path(a.manifest, a.out));
  return kOk;
}

// ---------------------------------------------------------------- modes

struct ModesArgs {
  std::string crystal, out, manifest, coupling = "literal";
};

io::CrystalSnapshot load_crystal(const std::string& path, std::string* text_hash = nullptr) {
  const std::string text = io::read_text(path);
  io::CrystalSnapshot s = io::parse_crystal_snapshot(text);
  if (io::config_hash(s.config) != s.config_hash)
    throw ConfigError(path + ": embedded config does not match its hash");
  if (text_hash) *text_hash = io::fnv1a_hex(text);
  return s;
}

int cmd_modes(const ModesArgs& a) {
  io::RunManifest man;
  man.command = "modes";
  man.started_at = io::utc_timestamp();
  man.inputs = {a.crystal};
  std::string crystal_hash;
  const io::CrystalSnapshot s = load_crystal(a.crystal, &crystal_hash);
  man.config_hash = s.config_hash;
  TransverseCoupling form;
  if (a.coupling == "literal")
    form = TransverseCoupling::Literal;
  else if (a.coupling == "pair")
    form = TransverseCoupling::PairExpansion;
  else
    throw ConfigError("--coupling must be 'literal' or 'pair'");

  const TrapConfig& trap = s.config.trap;
  const MicromotionExpansion e = io::expansion_from(s);
  const double wz = s.mathieu.omega_z;
  const CouplingMatrices avg = time_averaged_coupling(e);
  io::ModeSnapshot m;
  m.crystal_hash = crystal_hash;
  m.omega_z = wz;
  m.sets.push_back({"static_pseudo", transverse_mode_set(static_coupling(s.pseudo_positions).static_inv_r3,
                                                         wz, trap, false, form)});
  m.sets.push_back({"static_selfconsistent",
                    transverse_mode_set(static_coupling(e.r0).static_inv_r3, wz, trap, false, form)});
  m.sets.push_back({"averaged", transverse_mode_set(avg.avg_inv_r3, wz, trap, true, form)});
  man.stages.emplace_back("modes", "ok");
  m.shifts.emplace_back("averaged_vs_static_selfconsistent",
                        mode_shift_report(m.sets[2].set, m.sets[1].set));
  m.shifts.emplace_back("averaged_vs_static_pseudo", mode_shift_report(m.sets[2].set, m.sets[0].set));
  m.rwa = rwa_perturbation_bound(avg, m.sets[2].set, trap.rf_angular_freq, s.mathieu.q_x, trap, form);
  man.stages.emplace_back("shifts", "ok");
  io::write_text(a.out, io::mode_snapshot_text(m));
  man.outputs = {a.out};

  const auto& f = m.sets[2].set.frequencies;
  std::cout << "modes " << f.size() << ", band [" << f.minCoeff() / wz << ", " << f.maxCoeff() / wz
            << "] omega_z, omega_z/2pi = " << mhz(wz) << " MHz\n";
  for (const auto& [name, rep] : m.shifts)
    std::cout << name << ": mean |shift|/2pi = " << rep.mean_abs_shift / units::kTwoPi * 1e3
              << " kHz, min overlap = " << 1.0 - rep.max_overlap_deficit << "\n";
  std::cout << "rwa bound: frequency " << m.rwa.frequency_bound << ", norm " << m.rwa.norm_bound
            << "\nwrote " << a.out << "\n";
  write_manifest(man, manifest_path(a.manifest, a.out));
  return kOk;
}

// ---------------------------------------------------------------- gate

struct GateArgs {
  std::string crystal, modes, out, csv, manifest;
  std::string pair = "center";
  int segments = 13;
  double tau_cycles = 50.0;
  std::string mu_scan = "0.84:1.01:200";
  double temperature = 10.0;  // k_B T / h, MHz
  double dk = 8.0, waist = 3.0;
  bool static_baseline = false;
  double target = 1e-3;
  int jobs = 1;
  std::string route = "analytic";
};

struct CommonGateArgs {
  std::string pair = "center";
  double temperature = 10.0;
  double dk = 8.0, waist = 3.0;
};

std::pair<int, int> resolve_pair(const std::string& spec, const Positions& r) {
  if (spec == "center") return select_pair(r, PairSelector::Center);
  if (spec == "edge") return select_pair(r, PairSelector::Edge);
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw ConfigError("--pair must be center, edge or i,j");
  try {
    const int i = std::stoi(spec.substr(0, comma)), j = std::stoi(spec.substr(comma + 1));
    if (i < 0 || j < 0 || i == j || i >= r.rows() || j >= r.rows())
      throw ConfigError("--pair indices out of range");
    return {i, j};
  } catch (const std::logic_error&) {
    throw ConfigError("--pair must be center, edge or i,j");
  }
}

struct Loaded {
  io::CrystalSnapshot crystal;
  io::ModeSnapshot modes;
  MicromotionExpansion expansion;
};

Loaded load_inputs(const std::string& crystal_path, const std::string& modes_path) {
  Loaded l;
  std::string hash;
  l.crystal = load_crystal(crystal_path, &hash);
  l.modes = io::parse_mode_snapshot(io::read_text(modes_path));
  if (l.modes.crystal_hash != hash)
    throw ConfigError(modes_path + " was not computed from " + crystal_path);
  l.expansion = io::expansion_from(l.crystal);
  return l;
}

int cmd_gate(const GateArgs& a) {
  io::RunManifest man;
  man.command = "gate";
  man.started_at = io::utc_timestamp();
  man.inputs = {a.crystal, a.modes};
  const Loaded in = load_inputs(a.crystal, a.modes);
  man.config_hash = in.crystal.config_hash;

  double lo = 0, hi = 0;
  int steps = 0;
  {
    char c1 = 0, c2 = 0;
    std::istringstream ss(a.mu_scan);
    if (!(ss >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || !ss.eof())
      throw ConfigError("--mu-scan must be lo:hi:steps in units of omega_z");
  }
  IntegrationRoute route;
  if (a.route == "analytic")
    route = IntegrationRoute::Analytic;
  else if (a.route == "quadrature")
    route = IntegrationRoute::Quadrature;
  else
    throw ConfigError("--route must be 'analytic' or 'quadrature'");

  const TransverseModeSet& modes = io::find_set(in.modes, "averaged");
  const double wz = in.modes.omega_z;
  GateConfig g;
  g.pair = resolve_pair(a.pair, in.expansion.r0);
  g.delta_k = a.dk;
  g.waist = a.waist;
  g.segments = a.segments;
  g.gate_time = a.tau_cycles * units::kTwoPi / wz;
  g.thermal_rate = units::angular_from_mhz(a.temperature);
  g.detuning = lo * wz;
  g.validate();
  if (!(a.target > 0)) throw ConfigError("--target must be positive");

  const PairModulation mod{beam_modulation(in.expansion, g.pair.first, g.waist),
                           beam_modulation(in.expansion, g.pair.second, g.waist)};
  StaticBaseline baseline;
  if (a.static_baseline) baseline.modes = &io::find_set(in.modes, "static_pseudo");
  OptimizeOptions opts;
  opts.route = route;
  const ScanResult scan = scan_detuning(modes, g, mod, in.crystal.config.trap.ion_mass, lo * wz,
                                        hi * wz, steps, a.jobs, baseline, opts);
  man.stages.emplace_back("scan", "ok");

  const std::string csv = a.csv.empty() ? a.out + ".csv" : a.csv;
  io::write_text(csv, io::scan_csv(scan, g.segments, a.static_baseline));
  man.outputs.push_back(csv);
  int failed = 0;
  for (const auto& row : scan.rows) failed += row.solution ? 0 : 1;
  if (failed) man.stages.emplace_back("scan_rows_failed", std::to_string(failed));

  std::cout << "pair (" << g.pair.first << ", " << g.pair.second << "), " << steps
            << " detunings, " << failed << " failed\n";
  if (scan.best < 0) {
    man.stages.emplace_back("best", "none");
    write_manifest(man, manifest_path(a.manifest, a.out));
    std::cerr << "error: no detuning produced a pulse";
    if (!scan.rows.empty() && !scan.rows[0].error.empty()) std::cerr << " (" << scan.rows[0].error << ")";
    std::cerr << "\n";
    return kGateTarget;
  }
  const ScanRow& best = scan.rows[static_cast<std::size_t>(scan.best)];
  io::PulseSnapshot ps;
  ps.crystal_hash = in.modes.crystal_hash;
  ps.gate = g;
  ps.gate.detuning = best.detuning;
  ps.solution = *best.solution;
  ps.baseline_fidelity = best.baseline_fidelity;
  io::write_text(a.out, io::pulse_snapshot_text(ps));
  man.outputs.push_back(a.out);
  std::cout << "best mu/omega_z = " << best.detuning_over_omega_z
            << ", infidelity = " << best.solution->infidelity
            << ", max Rabi/2pi = " << mhz(best.solution->max_rabi) << " MHz\n";
  if (a.static_baseline) {
    double worst = 0.0;
    for (const auto& row : scan.rows)
      if (row.baseline_fidelity) worst = std::max(worst, *row.baseline_fidelity);
    std::cout << "static-trap pulse with micromotion: max fidelity over scan = " << worst << "\n";
  }
  std::cout << "wrote " << csv << ", " << a.out << "\n";
  const bool reached = best.solution->infidelity < a.target;
  man.stages.emplace_back("target", reached ? "reached" : "missed");
  write_manifest(man, manifest_path(a.manifest, a.out));
  if (!reached) {
    std::cerr << "error: best infidelity " << best.solution->infidelity << " is not below "
              << a.target << "\n";
    return kGateTarget;
  }
  return kOk;
}

// ---------------------------------------------------------------- error-budget

struct BudgetArgs {
  std::string crystal, modes, out, manifest;
  CommonGateArgs gate;
  double delta_r = -1.0;  // um; negative selects the thermal width
  double nbar_z = -1.0;   // negative selects the thermal occupation at omega_z
};

int cmd_error_budget(const BudgetArgs& a) {
  io::RunManifest man;
  man.command = "error-budget";
  man.started_at = io::utc_timestamp();
  man.inputs = {a.crystal, a.modes};
  const Loaded in = load_inputs(a.crystal, a.modes);
  man.config_hash = in.crystal.config_hash;
  const TransverseModeSet& modes = io::find_set(in.modes, "averaged");
  const auto& mp = in.crystal.mathieu;
  const double mass = in.crystal.config.trap.ion_mass;
  GateConfig g;
  g.pair = resolve_pair(a.gate.pair, in.expansion.r0);
  g.delta_k = a.gate.dk;
  g.waist = a.gate.waist;
  g.thermal_rate = units::angular_from_mhz(a.gate.temperature);
  const double delta_r =
      a.delta_r >= 0 ? a.delta_r : thermal_width(g.thermal_rate, mass, mp.omega_x, mp.omega_y);
  double nbar_z = a.nbar_z;
  if (nbar_z < 0) {
    Eigen::VectorXd w(1);
    w[0] = mp.omega_z;
    nbar_z = thermal_occupations(w, g.thermal_rate)[0];
  }
  const ErrorBudget b = error_budget(g, in.expansion.r0, modes, delta_r, nbar_z, mass, mp.q_x);
  std::cout << "pair (" << g.pair.first << ", " << g.pair.second << "), d = " << b.distance
            << " um, w = " << g.waist << " um\n"
            << "P_c  = exp(-2 (d/w)^2)                      = " << b.crosstalk << "\n"
            << "dF_1 = (pi^2/4) (dr/w)^4, dr = " << b.delta_r << " um  = " << b.thermal_spread << "\n"
            << "dF_2 = pi^2 eta^4 (n^2 + n + 1/8), eta = " << b.eta_z << ", n = " << b.nbar_z
            << " = " << b.lamb_dicke << "\n"
            << "micromotion residual bound |q|^3          = " << b.micromotion_residual << "\n";
  if (!a.out.empty()) {
    nlohmann::json j = {
        {"schema", "mmgate.error_budget"},
        {"schema_version", 1},
        {"pair", {g.pair.first, g.pair.second}},
        {"distance_um", b.distance},
        {"waist_um", g.waist},
        {"delta_r_um", b.delta_r},
        {"eta_z", b.eta_z},
        {"nbar_z", b.nbar_z},
        {"crosstalk", {{"formula", "exp(-2 (d/w)^2)"}, {"value", b.crosstalk}}},
        {"thermal_spread", {{"formula", "(pi^2/4) (dr/w)^4"}, {"value", b.thermal_spread}}},
        {"lamb_dicke", {{"formula", "pi^2 eta^4 (n^2 + n + 1/8)"}, {"value", b.lamb_dicke}}},
        {"micromotion_residual", {{"formula", "|q|^3"}, {"value", b.micromotion_residual}}}};
    io::write_text(a.out, j.dump(1, '\t') + "\n");
    man.outputs = {a.out};
    write_manifest(man, manifest_path(a.manifest, a.out));
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string scope, config;
  int n = 7;
  int cases = 200;
  int points = 100;
};

int cmd_verify(const VerifyArgs& a) {
  bool ok = true;
  if (a.scope == "trap") {
    const auto r = verify::trap_grid(a.points);
    ok = r.max_deviation < 1e-9;
    std::cout << "trap: " << r.points << " stable (a, q) points, max |dbeta| = " << r.max_deviation
              << " at (a, q) = (" << r.worst_a << ", " << r.worst_q << "), tolerance 1e-9\n";
  } else if (a.scope == "micromotion") {
    TrapConfig trap = default_trap(a.n);
    double spacing = 7.0;
    MicromotionOptions mm;
    if (!a.config.empty()) {
      const io::RunConfig cfg = io::load_config(a.config);
      trap = cfg.trap;
      spacing = cfg.seed_spacing;
      mm = cfg.micromotion;
    }
    const auto r = verify::micromotion_orbit(trap, spacing, mm);
    ok = r.rms_deviation < 1e-3;
    std::cout << "micromotion: N = " << r.ions << ", settled after " << r.periods
              << " rf periods, RMS deviation = " << r.rms_deviation
              << " um, max = " << r.max_deviation << " um, tolerance 1e-3 um\n";
  } else if (a.scope == "fidelity") {
    const auto r = verify::fidelity_grid(a.cases);
    ok = r.max_deviation < 1e-6;
    std::cout << "fidelity: " << r.cases << " cases, max |F_closed - F_fock| = " << r.max_deviation
              << ", tolerance 1e-6\n";
  } else {
    throw ConfigError("verify scope must be trap, micromotion or fidelity");
  }
  std::cout << (ok ? "within tolerance" : "TOLERANCE EXCEEDED") << "\n";
  return ok ? kOk : kVerifyBreach;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gate design for planar ion crystals with rf micromotion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  RelaxArgs ra;
  auto* relax_cmd = app.add_subcommand("relax", "relax a crystal and solve its micromotion");
  relax_cmd->add_option("--config", ra.config, "configuration file")->required();
  relax_cmd->add_option("--out", ra.out, "crystal snapshot to write")->required();
  relax_cmd->add_option("--manifest", ra.manifest, "manifest path (default <out>.manifest.json)");

  ModesArgs ma;
  auto* modes_cmd = app.add_subcommand("modes", "transverse modes with and without micromotion");
  modes_cmd->add_option("--crystal", ma.crystal, "crystal snapshot")->required();
  modes_cmd->add_option("--out", ma.out, "mode snapshot to write")->required();
  modes_cmd->add_option("--coupling", ma.coupling, "literal or pair")->capture_default_str();
  modes_cmd->add_option("--manifest", ma.manifest, "manifest path (default <out>.manifest.json)");

  GateArgs ga;
  auto* gate_cmd = app.add_subcommand("gate", "optimise segmented pulses over a detuning scan");
  gate_cmd->add_option("--crystal", ga.crystal, "crystal snapshot")->required();
  gate_cmd->add_option("--modes", ga.modes, "mode snapshot")->required();
  gate_cmd->add_option("--out", ga.out, "best pulse snapshot to write")->required();
  gate_cmd->add_option("--csv", ga.csv, "scan table (default <out>.csv)");
  gate_cmd->add_option("--pair", ga.pair, "center, edge or i,j")->capture_default_str();
  gate_cmd->add_option("--segments", ga.segments, "pulse segments")->capture_default_str();
  gate_cmd->add_option("--tau-cycles", ga.tau_cycles, "gate time in periods of omega_z")
      ->capture_default_str();
  gate_cmd->add_option("--mu-scan", ga.mu_scan, "lo:hi:steps in units of omega_z")
      ->capture_default_str();
  gate_cmd->add_option("--temperature", ga.temperature, "k_B T / h in MHz")->capture_default_str();
  gate_cmd->add_option("--dk", ga.dk, "wave-vector difference, 1/um")->capture_default_str();
  gate_cmd->add_option("--waist", ga.waist, "beam waist, um")->capture_default_str();
  gate_cmd->add_flag("--static-baseline", ga.static_baseline,
                     "also apply static-trap pulses to the micromotion case");
  gate_cmd->add_option("--target", ga.target, "required best infidelity")->capture_default_str();
  gate_cmd->add_option("--jobs", ga.jobs, "worker threads")->capture_default_str();
  gate_cmd->add_option("--route", ga.route, "analytic or quadrature")->capture_default_str();
  gate_cmd->add_option("--manifest", ga.manifest, "manifest path (default <out>.manifest.json)");

  BudgetArgs ba;
  auto* budget_cmd = app.add_subcommand("error-budget", "noise estimates for a gate pair");
  budget_cmd->add_option("--crystal", ba.crystal, "crystal snapshot")->required();
  budget_cmd->add_option("--modes", ba.modes, "mode snapshot")->required();
  budget_cmd->add_option("--pair", ba.gate.pair, "center, edge or i,j")->capture_default_str();
  budget_cmd->add_option("--temperature", ba.gate.temperature, "k_B T / h in MHz")
      ->capture_default_str();
  budget_cmd->add_option("--dk", ba.gate.dk, "wave-vector difference, 1/um")->capture_default_str();
  budget_cmd->add_option("--waist", ba.gate.waist, "beam waist, um")->capture_default_str();
  budget_cmd->add_option("--delta-r", ba.delta_r, "thermal position spread, um (default: thermal)");
  budget_cmd->add_option("--nbar-z", ba.nbar_z, "transverse occupation (default: thermal)");
  budget_cmd->add_option("--out", ba.out, "JSON report to write");
  budget_cmd->add_option("--manifest", ba.manifest, "manifest path (default <out>.manifest.json)");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "compare fast solvers with their oracles");
  verify_cmd->add_option("scope", va.scope, "trap, micromotion or fidelity")->required();
  verify_cmd->add_option("--n", va.n, "ions for the micromotion check")->capture_default_str();
  verify_cmd->add_option("--config", va.config, "trap configuration for the micromotion check");
  verify_cmd->add_option("--cases", va.cases, "fidelity cases")->capture_default_str();
  verify_cmd->add_option("--points", va.points, "(a, q) points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  std::cout.precision(10);
  try {
    if (*relax_cmd) return cmd_relax(ra);
    if (*modes_cmd) return cmd_modes(ma);
    if (*gate_cmd) return cmd_gate(ga);
    if (*budget_cmd) return cmd_error_budget(ba);
    if (*verify_cmd) return cmd_verify(va);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const NoSettle& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const UnstableRegion& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kInstability;
  } catch (const CollisionDetected& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kInstability;
  } catch (const Runaway& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kInstability;
  } catch (const ImaginaryFrequency& e) {
    std::cerr << "imaginary frequency: " << e.what() << "\n";
    return kImaginary;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
