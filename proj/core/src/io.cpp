#include "mmgate/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mmgate/errors.hpp"
#include "mmgate/units.hpp"

namespace mmgate::io {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError("config key '" + key + "': not an integer");
  return static_cast<int>(d);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, val).second) throw ConfigError("config key '" + key + "' given twice");
  }
  RunConfig c;
  auto take = [&](const char* key, bool required) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) throw ConfigError(std::string("config key '") + key + "' is required");
      return std::nullopt;
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  c.trap.dc_voltage = to_double("dc_voltage_V", *take("dc_voltage_V", true));
  c.trap.rf_voltage = to_double("rf_voltage_V", *take("rf_voltage_V", true));
  c.rf_freq_mhz = to_double("rf_freq_MHz", *take("rf_freq_MHz", true));
  c.trap.rf_angular_freq = units::angular_from_mhz(c.rf_freq_mhz);
  c.trap.electrode_size = to_double("electrode_size_um", *take("electrode_size_um", true));
  c.trap.ion_mass = to_double("ion_mass_u", *take("ion_mass_u", true));
  c.trap.ion_count = to_int("ion_count", *take("ion_count", true));
  if (auto v = take("anisotropy", false)) c.trap.anisotropy = to_double("anisotropy", *v);
  if (auto v = take("ion_charge_e", false)) c.trap.ion_charge = to_double("ion_charge_e", *v);
  if (auto v = take("seed_spacing_um", false)) c.seed_spacing = to_double("seed_spacing_um", *v);
  if (auto v = take("micromotion_expansion", false)) {
    if (*v == "averaged")
      c.micromotion.expansion = ExpansionKind::PeriodAveraged;
    else if (*v == "static")
      c.micromotion.expansion = ExpansionKind::Static;
    else
      throw ConfigError("micromotion_expansion must be 'averaged' or 'static'");
  }
  if (auto v = take("micromotion_harmonics", false))
    c.micromotion.harmonics = to_int("micromotion_harmonics", *v);
  if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");
  if (!(c.seed_spacing > 0)) throw ConfigError("seed_spacing_um must be positive");
  if (c.micromotion.harmonics < 2 || c.micromotion.harmonics > kMaxSeriesOrder)
    throw ConfigError("micromotion_harmonics must lie in [2, 20]");
  c.trap.validate();
  return c;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string canonical_config(const RunConfig& c) {
  std::map<std::string, std::string> kv{
      {"dc_voltage_V", format_double(c.trap.dc_voltage)},
      {"rf_voltage_V", format_double(c.trap.rf_voltage)},
      {"rf_freq_MHz", format_double(c.rf_freq_mhz)},
      {"electrode_size_um", format_double(c.trap.electrode_size)},
      {"anisotropy", format_double(c.trap.anisotropy)},
      {"ion_mass_u", format_double(c.trap.ion_mass)},
      {"ion_charge_e", format_double(c.trap.ion_charge)},
      {"ion_count", std::to_string(c.trap.ion_count)},
      {"seed_spacing_um", format_double(c.seed_spacing)},
      {"micromotion_expansion",
       c.micromotion.expansion == ExpansionKind::Static ? "static" : "averaged"},
      {"micromotion_harmonics", std::to_string(c.micromotion.harmonics)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& c) { return fnv1a_hex(canonical_config(c)); }

namespace {

json positions_json(const Positions& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) a.push_back({p(i, 0), p(i, 1)});
  return a;
}

Positions positions_from(const json& a) {
  Positions p(static_cast<Eigen::Index>(a.size()), 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    p(static_cast<Eigen::Index>(i), 0) = a[i].at(0).get<double>();
    p(static_cast<Eigen::Index>(i), 1) = a[i].at(1).get<double>();
  }
  return p;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(std::move(row));
  }
  return a;
}

Eigen::MatrixXd matrix_from(const json& a) {
  if (a.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].get<double>();
  return m;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json stats_json(const DistanceStats& s) {
  return {{"min_um", s.min}, {"max_um", s.max}, {"mean_um", s.mean}, {"distances_um", s.distances}};
}

DistanceStats stats_from(const json& j) {
  DistanceStats s;
  s.min = j.at("min_um").get<double>();
  s.max = j.at("max_um").get<double>();
  s.mean = j.at("mean_um").get<double>();
  s.distances = j.at("distances_um").get<std::vector<double>>();
  return s;
}

json config_json(const RunConfig& c) {
  return {{"dc_voltage_V", c.trap.dc_voltage},
          {"rf_voltage_V", c.trap.rf_voltage},
          {"rf_freq_MHz", c.rf_freq_mhz},
          {"electrode_size_um", c.trap.electrode_size},
          {"anisotropy", c.trap.anisotropy},
          {"ion_mass_u", c.trap.ion_mass},
          {"ion_charge_e", c.trap.ion_charge},
          {"ion_count", c.trap.ion_count},
          {"seed_spacing_um", c.seed_spacing},
          {"micromotion_expansion",
           c.micromotion.expansion == ExpansionKind::Static ? "static" : "averaged"},
          {"micromotion_harmonics", c.micromotion.harmonics}};
}

RunConfig config_from(const json& j) {
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_string())
      os << it.key() << " = " << it->get<std::string>() << "\n";
    else if (it->is_number_integer())
      os << it.key() << " = " << it->get<long long>() << "\n";
    else
      os << it.key() << " = " << format_double(it->get<double>()) << "\n";
  }
  return parse_config(os.str());
}

void check_schema(const json& j, const char* name, int version) {
  if (j.value("schema", "") != name || j.value("schema_version", 0) != version)
    throw ConfigError(std::string("expected a ") + name + " v" + std::to_string(version) + " document");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed snapshot: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed snapshot: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(1, '\t') + "\n"; }

}  // namespace

std::string crystal_snapshot_text(const CrystalSnapshot& s) {
  json j;
  j["schema"] = "mmgate.crystal";
  j["schema_version"] = 1;
  j["config"] = config_json(s.config);
  j["config_hash"] = s.config_hash;
  const auto& m = s.mathieu;
  j["mathieu"] = {{"a_x", m.a_x}, {"a_y", m.a_y}, {"a_z", m.a_z}, {"q_x", m.q_x}, {"q_y", m.q_y},
                  {"q_z", m.q_z}, {"beta_x", m.beta_x}, {"beta_y", m.beta_y}, {"beta_z", m.beta_z},
                  {"omega_x_rad_per_us", m.omega_x}, {"omega_y_rad_per_us", m.omega_y},
                  {"omega_z_rad_per_us", m.omega_z}};
  j["planar"] = s.planar;
  j["relax"] = {{"steps", s.relax_steps},
                {"gradient_norm", s.relax_gradient_norm},
                {"force_tolerance", s.relax_force_tolerance},
                {"converged", s.relax_converged}};
  j["pseudo_positions_um"] = positions_json(s.pseudo_positions);
  j["nn_stats"] = stats_json(s.nn_stats);
  j["bond_stats"] = stats_json(s.bond_stats);
  json mm;
  mm["harmonics_um"] = matrix_rows(s.harmonics);
  const Eigen::Index cols = s.harmonics.cols();
  auto col = [&](Eigen::Index c) {
    return c < cols ? unflatten(s.harmonics.col(c)) : Positions(Positions::Zero(s.harmonics.rows() / 2, 2));
  };
  mm["r0_um"] = positions_json(col(0));
  mm["r1_um"] = positions_json(col(1));
  mm["r2_um"] = positions_json(col(2));
  mm["amplitude_um"] = s.amplitude;
  mm["iterations"] = s.micromotion_iterations;
  mm["last_change_um"] = s.micromotion_last_change;
  mm["mean_shift_um"] = s.mean_shift;
  j["micromotion"] = std::move(mm);
  return dump(j);
}

CrystalSnapshot parse_crystal_snapshot(std::string_view text) {
  const json j = parse_json(text);
  return guarded([&] {
    check_schema(j, "mmgate.crystal", 1);
    CrystalSnapshot s;
    s.config = config_from(j.at("config"));
    s.config_hash = j.at("config_hash").get<std::string>();
    const auto& m = j.at("mathieu");
    s.mathieu.a_x = m.at("a_x");
    s.mathieu.a_y = m.at("a_y");
    s.mathieu.a_z = m.at("a_z");
    s.mathieu.q_x = m.at("q_x");
    s.mathieu.q_y = m.at("q_y");
    s.mathieu.q_z = m.at("q_z");
    s.mathieu.beta_x = m.at("beta_x");
    s.mathieu.beta_y = m.at("beta_y");
    s.mathieu.beta_z = m.at("beta_z");
    s.mathieu.omega_x = m.at("omega_x_rad_per_us");
    s.mathieu.omega_y = m.at("omega_y_rad_per_us");
    s.mathieu.omega_z = m.at("omega_z_rad_per_us");
    s.planar = j.at("planar");
    const auto& r = j.at("relax");
    s.relax_steps = r.at("steps");
    s.relax_gradient_norm = r.at("gradient_norm");
    s.relax_force_tolerance = r.at("force_tolerance");
    s.relax_converged = r.at("converged");
    s.pseudo_positions = positions_from(j.at("pseudo_positions_um"));
    s.nn_stats = stats_from(j.at("nn_stats"));
    s.bond_stats = stats_from(j.at("bond_stats"));
    const auto& mm = j.at("micromotion");
    s.harmonics = matrix_from(mm.at("harmonics_um"));
    s.amplitude = mm.at("amplitude_um").get<std::vector<double>>();
    s.micromotion_iterations = mm.at("iterations");
    s.micromotion_last_change = mm.at("last_change_um");
    s.mean_shift = mm.at("mean_shift_um");
    if (s.harmonics.rows() != 2 * s.pseudo_positions.rows())
      throw ConfigError("crystal snapshot: harmonics do not match the ion count");
    return s;
  });
}

MicromotionExpansion expansion_from(const CrystalSnapshot& s) {
  MicromotionExpansion e;
  e.harmonics = s.harmonics;
  e.r0 = unflatten(s.harmonics.col(0));
  e.r1 = s.harmonics.cols() > 1 ? unflatten(s.harmonics.col(1)) : Positions::Zero(e.r0.rows(), 2);
  e.r2 = s.harmonics.cols() > 2 ? unflatten(s.harmonics.col(2)) : Positions::Zero(e.r0.rows(), 2);
  e.amplitude = s.amplitude;
  e.expansion = s.config.micromotion.expansion;
  e.q = s.mathieu.q_x;
  e.rf_angular_freq = s.config.trap.rf_angular_freq;
  e.iterations = s.micromotion_iterations;
  e.last_change = s.micromotion_last_change;
  e.converged = true;
  return e;
}

std::string mode_snapshot_text(const ModeSnapshot& s) {
  json j;
  j["schema"] = "mmgate.modes";
  j["schema_version"] = 1;
  j["crystal_hash"] = s.crystal_hash;
  j["omega_z_rad_per_us"] = s.omega_z;
  json sets = json::array();
  for (const auto& r : s.sets) {
    sets.push_back({{"name", r.name},
                    {"includes_micromotion", r.set.includes_micromotion},
                    {"frequencies_rad_per_us", vector_json(r.set.frequencies)},
                    {"frequencies_MHz", vector_json(r.set.frequencies / units::kTwoPi)},
                    {"mode_vectors", matrix_rows(r.set.modes.transpose())}});
  }
  j["sets"] = std::move(sets);
  json shifts = json::array();
  for (const auto& [name, rep] : s.shifts) {
    shifts.push_back({{"name", name},
                      {"match", rep.match},
                      {"overlap", rep.overlap},
                      {"shift_rad_per_us", rep.shift},
                      {"mean_abs_shift_rad_per_us", rep.mean_abs_shift},
                      {"mean_abs_shift_kHz", rep.mean_abs_shift / units::kTwoPi * 1e3},
                      {"max_overlap_deficit", rep.max_overlap_deficit}});
  }
  j["shifts"] = std::move(shifts);
  j["rwa_bound"] = {{"frequency_bound", s.rwa.frequency_bound}, {"norm_bound", s.rwa.norm_bound}};
  return dump(j);
}

ModeSnapshot parse_mode_snapshot(std::string_view text) {
  const json j = parse_json(text);
  return guarded([&] {
    check_schema(j, "mmgate.modes", 1);
    ModeSnapshot s;
    s.crystal_hash = j.at("crystal_hash").get<std::string>();
    s.omega_z = j.at("omega_z_rad_per_us");
    for (const auto& r : j.at("sets")) {
      ModeSetRecord rec;
      rec.name = r.at("name").get<std::string>();
      rec.set.includes_micromotion = r.at("includes_micromotion");
      rec.set.frequencies = vector_from(r.at("frequencies_rad_per_us"));
      rec.set.modes = matrix_from(r.at("mode_vectors")).transpose();
      s.sets.push_back(std::move(rec));
    }
    for (const auto& r : j.at("shifts")) {
      ModeShiftReport rep;
      rep.match = r.at("match").get<std::vector<int>>();
      rep.overlap = r.at("overlap").get<std::vector<double>>();
      rep.shift = r.at("shift_rad_per_us").get<std::vector<double>>();
      rep.mean_abs_shift = r.at("mean_abs_shift_rad_per_us");
      rep.max_overlap_deficit = r.at("max_overlap_deficit");
      s.shifts.emplace_back(r.at("name").get<std::string>(), std::move(rep));
    }
    s.rwa.frequency_bound = j.at("rwa_bound").at("frequency_bound");
    s.rwa.norm_bound = j.at("rwa_bound").at("norm_bound");
    return s;
  });
}

const TransverseModeSet& find_set(const ModeSnapshot& s, const std::string& name) {
  for (const auto& r : s.sets)
    if (r.name == name) return r.set;
  throw ConfigError("mode snapshot has no set named '" + name + "'");
}

namespace {

const char* target_name(TargetSign t) {
  switch (t) {
    case TargetSign::Positive:
      return "positive";
    case TargetSign::Negative:
      return "negative";
    default:
      return "auto";
  }
}

TargetSign target_from(const std::string& s) {
  if (s == "positive") return TargetSign::Positive;
  if (s == "negative") return TargetSign::Negative;
  if (s == "auto") return TargetSign::Auto;
  throw ConfigError("unknown target sign '" + s + "'");
}

}  // namespace

std::string pulse_snapshot_text(const PulseSnapshot& s) {
  json j;
  j["schema"] = "mmgate.pulse";
  j["schema_version"] = 1;
  j["crystal_hash"] = s.crystal_hash;
  const auto& g = s.gate;
  j["gate"] = {{"pair", {g.pair.first, g.pair.second}},
               {"delta_k_per_um", g.delta_k},
               {"waist_um", g.waist},
               {"detuning_rad_per_us", g.detuning},
               {"gate_time_us", g.gate_time},
               {"segments", g.segments},
               {"thermal_rate_rad_per_us", g.thermal_rate},
               {"phase_offset", {g.phase_offset[0], g.phase_offset[1]}},
               {"target", target_name(g.target)}};
  const auto& p = s.solution;
  json alpha = json::array();
  for (Eigen::Index r = 0; r < p.alpha.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index k = 0; k < p.alpha.cols(); ++k)
      row.push_back({p.alpha(r, k).real(), p.alpha(r, k).imag()});
    alpha.push_back(std::move(row));
  }
  j["solution"] = {{"amplitudes_rad_per_us", vector_json(p.amplitudes)},
                   {"alpha", std::move(alpha)},
                   {"phi12", p.phi12},
                   {"target_phase", p.target_phase},
                   {"fidelity", p.fidelity},
                   {"infidelity", p.infidelity},
                   {"proxy_infidelity", p.proxy_infidelity},
                   {"max_rabi_rad_per_us", p.max_rabi},
                   {"max_rabi_2pi_MHz", p.max_rabi / units::kTwoPi},
                   {"proxy_regularized", p.proxy_regularized}};
  j["baseline_fidelity"] = s.baseline_fidelity ? json(*s.baseline_fidelity) : json(nullptr);
  return dump(j);
}

PulseSnapshot parse_pulse_snapshot(std::string_view text) {
  const json j = parse_json(text);
  return guarded([&] {
    check_schema(j, "mmgate.pulse", 1);
    PulseSnapshot s;
    s.crystal_hash = j.at("crystal_hash").get<std::string>();
    const auto& g = j.at("gate");
    s.gate.pair = {g.at("pair").at(0).get<int>(), g.at("pair").at(1).get<int>()};
    s.gate.delta_k = g.at("delta_k_per_um");
    s.gate.waist = g.at("waist_um");
    s.gate.detuning = g.at("detuning_rad_per_us");
    s.gate.gate_time = g.at("gate_time_us");
    s.gate.segments = g.at("segments");
    s.gate.thermal_rate = g.at("thermal_rate_rad_per_us");
    s.gate.phase_offset = {g.at("phase_offset").at(0).get<double>(),
                           g.at("phase_offset").at(1).get<double>()};
    s.gate.target = target_from(g.at("target").get<std::string>());
    const auto& p = j.at("solution");
    s.solution.amplitudes = vector_from(p.at("amplitudes_rad_per_us"));
    const auto& a = p.at("alpha");
    s.solution.alpha.resize(static_cast<Eigen::Index>(a.size()),
                            a.empty() ? 0 : static_cast<Eigen::Index>(a[0].size()));
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t k = 0; k < a[r].size(); ++k)
        s.solution.alpha(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = {
            a[r][k].at(0).get<double>(), a[r][k].at(1).get<double>()};
    s.solution.phi12 = p.at("phi12");
    s.solution.target_phase = p.at("target_phase");
    s.solution.fidelity = p.at("fidelity");
    s.solution.infidelity = p.at("infidelity");
    s.solution.proxy_infidelity = p.at("proxy_infidelity");
    s.solution.max_rabi = p.at("max_rabi_rad_per_us");
    s.solution.proxy_regularized = p.at("proxy_regularized");
    if (!j.at("baseline_fidelity").is_null()) s.baseline_fidelity = j.at("baseline_fidelity").get<double>();
    return s;
  });
}

std::string scan_csv(const ScanResult& scan, int segments, bool baseline) {
  std::ostringstream os;
  os << "mu_rad_per_us,mu_over_omega_z,infidelity,max_rabi_2pi_MHz";
  for (int i = 1; i <= segments; ++i) os << ",amp_" << i;
  if (baseline) os << ",baseline_fidelity";
  os << "\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : scan.rows) {
    os << format_double(row.detuning) << "," << format_double(row.detuning_over_omega_z);
    if (row.solution) {
      os << "," << format_double(row.solution->infidelity) << ","
         << format_double(row.solution->max_rabi / units::kTwoPi);
      for (int i = 0; i < segments; ++i)
        os << "," << format_double(i < row.solution->amplitudes.size() ? row.solution->amplitudes[i] : nan);
    } else {
      os << "," << format_double(nan) << "," << format_double(nan);
      for (int i = 0; i < segments; ++i) os << "," << format_double(nan);
    }
    if (baseline) os << "," << format_double(row.baseline_fidelity.value_or(nan));
    os << "\n";
  }
  return os.str();
}

std::string manifest_text(const RunManifest& m) {
  json j;
  j["schema"] = "mmgate.manifest";
  j["schema_version"] = 1;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  json st = json::array();
  for (const auto& [k, v] : m.stages) st.push_back({{"stage", k}, {"status", v}});
  j["stages"] = std::move(st);
  return dump(j);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace mmgate::io
