#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "reflecto/dict.hpp"
#include "reflecto/geoalg.hpp"
#include "reflecto/lasso.hpp"
#include "reflecto/verify.hpp"

namespace {

using namespace reflecto;

data::Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  data::Dataset ds;
  ds.X = Matrix(n, d);
  ds.y.resize(n);
  for (auto& v : ds.X.data) v = unif(rng);
  for (auto& v : ds.y) v = unif(rng);
  return ds;
}

void BM_GeneralizedCross(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Vec> vs(d - 1, Vec(d));
  for (auto& v : vs)
    for (auto& x : v) x = unif(rng);
  for (auto _ : state) benchmark::DoNotOptimize(geoalg::generalized_cross(vs));
}
BENCHMARK(BM_GeneralizedCross)->Arg(3)->Arg(5)->Arg(8);

void BM_Build3Layer(benchmark::State& state) {
  const auto ds = random_dataset(static_cast<std::size_t>(state.range(0)), 2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(dict::build_3layer_absval(ds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Build3Layer)->Arg(2)->Arg(4)->Arg(6)->Complexity();

void BM_LassoSolve(benchmark::State& state) {
  const auto ds = random_dataset(6, 2, 13);
  const auto dc = dict::build_3layer_absval(ds);
  const Matrix A = dc.matrix();
  for (auto _ : state) {
    auto sol = lasso::solve(lasso::Problem{A, ds.y, 1e-3}, 1e-8, 20000);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_LassoSolve);

void BM_MinNormHomotopy(benchmark::State& state) {
  const auto ds = random_dataset(5, 2, 17);
  const auto dc = dict::build_3layer_absval(ds);
  const Matrix A = dc.matrix();
  for (auto _ : state) {
    auto sol = lasso::solve_min_norm(A, ds.y, 1e-7);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(BM_MinNormHomotopy);

void BM_BuildSublibrary(benchmark::State& state) {
  const auto ds = random_dataset(4, 2, 19);
  const int layers = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(dict::build_deep_sublibrary(ds, layers));
}
BENCHMARK(BM_BuildSublibrary)->Arg(2)->Arg(3)->Arg(4);

void BM_DetectBreakpoints(benchmark::State& state) {
  auto f = [](double t) {
    return std::fabs(std::fabs(std::fabs(t - 2.0) - 2.0) - 1.0);
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(
        verify::detect_breakpoints_1d(f, -6, 8, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DetectBreakpoints)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
