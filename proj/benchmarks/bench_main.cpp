#include <benchmark/benchmark.h>

#include "lstmopt/bilstm.hpp"
#include "lstmopt/generator.hpp"
#include "lstmopt/solvers.hpp"

namespace {

using namespace lstmopt;

Instance desk_instance(std::size_t T, int c, std::uint64_t k) {
  return generate_instance(desk_preset(c, 100, T, 17), k);
}

void BM_LpRelaxation(benchmark::State& state) {
  const Instance inst = desk_instance(static_cast<std::size_t>(state.range(0)), 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(inst, FixPlan{}).objective);
}
BENCHMARK(BM_LpRelaxation)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_BranchAndBound(benchmark::State& state) {
  const std::size_t T = static_cast<std::size_t>(state.range(0));
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(branch_and_bound(desk_instance(T, 3, k++ % 16), FixPlan{}).objective);
}
BENCHMARK(BM_BranchAndBound)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DynamicProgram(benchmark::State& state) {
  const Instance inst = desk_instance(static_cast<std::size_t>(state.range(0)), 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_dp(inst).objective);
}
BENCHMARK(BM_DynamicProgram)->Arg(20)->Arg(90)->Arg(360);

void BM_LsCutRounds(benchmark::State& state) {
  const Instance inst = desk_instance(20, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ls_cut_rounds(inst, 5).cuts.size());
}
BENCHMARK(BM_LsCutRounds);

void BM_BiLstmForward(benchmark::State& state) {
  BiLstmModel model(BiLstmConfig{4, 3, static_cast<std::size_t>(state.range(1)), 0.3});
  model.initialize(1);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(bilstm_forward(model, x).back());
}
BENCHMARK(BM_BiLstmForward)->Args({20, 40})->Args({90, 40})->Args({90, 150});

void BM_Backprop(benchmark::State& state) {
  BiLstmModel model(BiLstmConfig{4, 3, 40, 0.3});
  model.initialize(1);
  model.training_mode = true;
  std::vector<Example> batch;
  for (int i = 0; i < 64; ++i) {
    batch.push_back({Eigen::MatrixXd::Random(20, 4), std::vector<double>(20, static_cast<double>(i % 2))});
  }
  std::vector<double> grad;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(backprop(model, batch, grad, seed++));
}
BENCHMARK(BM_Backprop)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
