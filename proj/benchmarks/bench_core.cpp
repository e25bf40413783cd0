#include <benchmark/benchmark.h>

#include "mmgate/crystal.hpp"
#include "mmgate/gate.hpp"
#include "mmgate/micromotion.hpp"
#include "mmgate/oracles.hpp"
#include "mmgate/trap_model.hpp"
#include "mmgate/units.hpp"

namespace {

using namespace mmgate;

TrapConfig planar_trap(int ions) {
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

void BM_CharacteristicExponent(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(characteristic_exponent(2.5e-3, -0.1029));
}
BENCHMARK(BM_CharacteristicExponent);

void BM_FloquetOracle(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(oracles::floquet_exponent(2.5e-3, -0.1029).beta);
}
BENCHMARK(BM_FloquetOracle);

void BM_Relax(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const TrapConfig t = planar_trap(n);
  const auto p = full_mathieu_parameters(t);
  const Positions seed = seed_hexagonal(n, 7.0);
  for (auto _ : st) benchmark::DoNotOptimize(relax(seed, p.omega_x, p.omega_y, t.ion_mass, 1.0).steps);
}
BENCHMARK(BM_Relax)->Arg(7)->Arg(19)->Unit(benchmark::kMillisecond);

void BM_SelfConsistent(benchmark::State& st) {
  const TrapConfig t = planar_trap(19);
  const auto p = full_mathieu_parameters(t);
  const auto c = relax(seed_hexagonal(19, 7.0), p.omega_x, p.omega_y, t.ion_mass, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(self_consistent_positions(c.positions, t).iterations);
}
BENCHMARK(BM_SelfConsistent)->Unit(benchmark::kMillisecond);

TransverseModeSet uniform_modes(int k) {
  TransverseModeSet s;
  s.frequencies = Eigen::VectorXd::LinSpaced(k, 11.8, 13.9);
  s.modes = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Random(k, k)).householderQ();
  return s;
}

void BM_PhaseMap(benchmark::State& st) {
  const auto modes = uniform_modes(static_cast<int>(st.range(0)));
  GateConfig g;
  g.pair = {0, 1};
  g.detuning = 13.5;
  g.gate_time = 22.6;
  const PairModulation mod{unit_modulation(), unit_modulation()};
  for (auto _ : st) benchmark::DoNotOptimize(phase_map(modes, g, mod, 171.0).sum());
}
BENCHMARK(BM_PhaseMap)->Arg(19)->Arg(127)->Unit(benchmark::kMillisecond);

void BM_Fidelity(benchmark::State& st) {
  const int k = static_cast<int>(st.range(0));
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(2, k) * 0.01;
  const Eigen::VectorXd n = Eigen::VectorXd::Constant(k, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(fidelity(a, 0.78, n));
}
BENCHMARK(BM_Fidelity)->Arg(127);

}  // namespace

BENCHMARK_MAIN();
