#include <benchmark/benchmark.h>

#include <numbers>

#include "wgscat/channels.hpp"
#include "wgscat/linear.hpp"
#include "wgscat/oracle.hpp"

namespace {

using namespace wgscat;

const SystemParams kParams{.g2 = 1.0, .delta = 0.3, .Delta = 0.4, .beta = 0.2, .phi = 2.1};

void BM_Kernels(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, default_grid(1.0, 1.0, n));
  for (auto _ : state) benchmark::DoNotOptimize(excitation_kernels(kParams, f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Kernels)->RangeMultiplier(4)->Range(512, 32768)->Complexity();

void BM_ChannelProbabilities(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, default_grid(1.0, 1.0, n));
  for (auto _ : state) {
    const auto set = copropagating_channels(kParams, f);
    benchmark::DoNotOptimize(channel_probabilities(set));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChannelProbabilities)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond)->Complexity();

void BM_PulseTransmission(benchmark::State& state) {
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, spectral_grid(1.0, 1.0, 2048));
  for (auto _ : state) benchmark::DoNotOptimize(pulse_transmission(kParams, f));
}
BENCHMARK(BM_PulseTransmission)->Unit(benchmark::kMicrosecond);

void BM_TransferEvaluation(benchmark::State& state) {
  const auto tr = traveling_transfer(kParams, true);
  double w = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tr.transmit(w));
    w = w > 5.0 ? -5.0 : w + 1e-3;
  }
}
BENCHMARK(BM_TransferEvaluation);

void BM_OracleStanding(benchmark::State& state) {
  const double dt = 1.0 / static_cast<double>(state.range(0));
  const PulseEnvelope f = make_pulse(PulseShape::square, 1.0, oracle_grid(1.0, 1.0, dt, 11.0));
  OracleOptions options;
  options.max_step_rate = 1.0;  // timing only; accuracy is covered by the tests
  options.drift_tolerance = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(kParams, Geometry::standing, f, options));
}
BENCHMARK(BM_OracleStanding)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
