// Microbenchmarks for the training pipeline pieces. The O(N h^2) covariance
// stage dominates; the h^3 solve only matters once h approaches N.

#include "eemkit/eem.hpp"
#include "eemkit/eval.hpp"
#include "eemkit/feature_map.hpp"
#include "eemkit/linalg.hpp"

#include "support/oracles.hpp"

#include <benchmark/benchmark.h>

using namespace eemkit;

namespace {

oracles::Blobs bench_data(int n, int d) {
  return oracles::make_blobs(n / 2, n - n / 2, d, 1.0, 1234);
}

void BM_LedoitWolf(benchmark::State& state) {
  const int h = int(state.range(0));
  auto blobs = bench_data(2000, 8);
  Eigen::MatrixXd H =
      apply_random_map(sample_random_map(8, h, Activation::rbf, 1), blobs.X);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linalg::ledoit_wolf(H));
  }
  state.SetComplexityN(h);
}
BENCHMARK(BM_LedoitWolf)->Arg(50)->Arg(100)->Arg(250)->Arg(500)->Complexity();

void BM_EemFit(benchmark::State& state) {
  const int h = int(state.range(0));
  auto blobs = bench_data(2000, 8);
  std::vector<int> pos, neg;
  for (int i = 0; i < blobs.y.size(); ++i) (blobs.y[i] > 0 ? pos : neg).push_back(i);
  Eigen::MatrixXd xp = take_rows(blobs.X, pos);
  Eigen::MatrixXd xn = take_rows(blobs.X, neg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fit(xp, xn, sample_random_map(8, h, Activation::rbf, 1)));
  }
  state.SetComplexityN(h);
}
BENCHMARK(BM_EemFit)->Arg(50)->Arg(100)->Arg(250)->Arg(500)->Complexity();

void BM_NystromBuild(benchmark::State& state) {
  const int h = int(state.range(0));
  auto blobs = bench_data(2000, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_nystrom(blobs.X, h, 0.5, 1));
  }
  state.SetComplexityN(h);
}
BENCHMARK(BM_NystromBuild)->Arg(50)->Arg(100)->Arg(250)->Arg(500)->Complexity();

void BM_Predict(benchmark::State& state) {
  const int h = int(state.range(0));
  auto blobs = bench_data(2000, 8);
  std::vector<int> pos, neg;
  for (int i = 0; i < blobs.y.size(); ++i) (blobs.y[i] > 0 ? pos : neg).push_back(i);
  EemModel model = fit(take_rows(blobs.X, pos), take_rows(blobs.X, neg),
                       sample_random_map(8, h, Activation::rbf, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(model, blobs.X));
  }
}
BENCHMARK(BM_Predict)->Arg(50)->Arg(250);

}  // namespace

BENCHMARK_MAIN();
