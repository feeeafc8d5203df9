#include <benchmark/benchmark.h>

#include <cmath>

#include "ed/airy.hpp"
#include "ed/linear_bvp.hpp"
#include "ed/refsolver.hpp"
#include "ed/series.hpp"

namespace {

void BM_EvalAirySeriesBranch(benchmark::State& state) {
  double s = 0.0;
  for (auto _ : state) {
    s = std::fmod(s + 0.37, 9.0);
    benchmark::DoNotOptimize(ed::eval_airy(s));
  }
}
BENCHMARK(BM_EvalAirySeriesBranch);

void BM_EvalAiryAsymptoticBranch(benchmark::State& state) {
  double s = 9.0;
  for (auto _ : state) {
    s = 9.001 + std::fmod(s, 31.0);
    benchmark::DoNotOptimize(ed::eval_airy(s));
  }
}
BENCHMARK(BM_EvalAiryAsymptoticBranch);

void BM_BuildBasis(benchmark::State& state) {
  const ed::ModelParams p = ed::params_with_delta_j(0.5, 0.6, 1.0 / 3.0, 1.5);
  const ed::Grid g(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ed::AiryBasis(p, g));
}
BENCHMARK(BM_BuildBasis)->Arg(1000);

void BM_LinearSolve(benchmark::State& state) {
  const ed::ModelParams p = ed::params_with_delta_j(0.5, 0.6, 1.0 / 3.0, 1.5);
  const ed::Grid g(static_cast<int>(state.range(0)));
  const ed::AiryBasis basis(p, g);
  const ed::GridFn r = ed::GridFn::constant(g, -2.0 * p.delta_j);
  for (auto _ : state) benchmark::DoNotOptimize(ed::solve_linear_bvp(r, basis));
}
BENCHMARK(BM_LinearSolve)->Arg(1000);

void BM_SeriesRun(benchmark::State& state) {
  const ed::ModelParams p = ed::params_with_delta_j(0.5, 0.6, 1.0 / 3.0, 1.5);
  const ed::Grid g(1000);
  const ed::AiryBasis basis(p, g);
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ed::run_series(p, n_max, basis));
}
BENCHMARK(BM_SeriesRun)->Arg(25)->Arg(100);

void BM_ReferenceSolve(benchmark::State& state) {
  const ed::ModelParams p = ed::params_with_delta_j(0.5, 0.6, 1.0 / 3.0, 1.5);
  const ed::Grid g(static_cast<int>(state.range(0)));
  ed::RefOptions opts;
  opts.extrapolate = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(ed::solve_reference(p, g, opts));
}
BENCHMARK(BM_ReferenceSolve)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
