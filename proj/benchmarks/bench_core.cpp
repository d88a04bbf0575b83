#include <benchmark/benchmark.h>

#include "choinet/quantifiers.hpp"

using namespace choinet;

static void BM_PartialTrace(benchmark::State& state) {
  const Index d = state.range(0);
  const QuantumState rho = random_state({d, d, d}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho.matrix(), rho.dims(), {0, 2}));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(3)->Arg(4);

static void BM_PartialTranspose(benchmark::State& state) {
  const Index d = state.range(0);
  const QuantumState rho = random_state({d, d}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(partial_transpose(rho.matrix(), rho.dims(), {1}));
}
BENCHMARK(BM_PartialTranspose)->Arg(2)->Arg(4)->Arg(8);

static void BM_StateNetwork(benchmark::State& state) {
  const auto blocks = static_cast<int>(state.range(0));
  std::vector<BlockSpec> right;
  for (int k = 0; k < blocks; ++k) right.emplace_back(random_povm({2, 2}, 3, 10 + k), random_state({2, 2}, 20 + k));
  const LineNetwork net({}, right, StateSubject{random_state({2, 2}, 3)});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_network(net));
}
BENCHMARK(BM_StateNetwork)->Arg(1)->Arg(2)->Arg(4);

static void BM_MeasurementNetwork(benchmark::State& state) {
  const LineNetwork net({BlockSpec(bell_povm(2), max_entangled(2).state())}, {},
                        MeasSubject(bell_povm(2), random_state({2, 2}, 4), random_state({2, 2}, 5)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_network(net));
}
BENCHMARK(BM_MeasurementNetwork);

static void BM_Robustness(benchmark::State& state) {
  const Index d = state.range(0);
  const QuantumState rho = random_state({d, d}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(generalized_robustness_ppt(rho));
}
BENCHMARK(BM_Robustness)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_PovmWeight(benchmark::State& state) {
  const Povm m = random_povm({2, 2}, 3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(povm_weight_ppt(m));
}
BENCHMARK(BM_PovmWeight)->Unit(benchmark::kMillisecond);

static void BM_FixedNoiseBisection(benchmark::State& state) {
  const QuantumState rho = random_state({2, 2}, 8, 1);
  const QuantumState white(identity(4) / 4.0, {2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(fixed_noise_robustness(rho, white));
}
BENCHMARK(BM_FixedNoiseBisection)->Unit(benchmark::kMillisecond);

static void BM_DykstraFeasibility(benchmark::State& state) {
  const QuantumState rho = random_separable_state({2, 2}, 4, 9);
  ConeSpec spec;
  spec.blocks.push_back(ConeBlock::ppt({2, 2}, {1}));
  spec.constraints.push_back({{{0, TermOp::Identity, 1.0}}, rho.matrix()});
  for (auto _ : state) benchmark::DoNotOptimize(feasibility(spec));
}
BENCHMARK(BM_DykstraFeasibility)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
