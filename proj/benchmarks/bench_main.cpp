#include <benchmark/benchmark.h>

#include <vector>

#include "aloe/benchmarks.hpp"
#include "aloe/estimator.hpp"
#include "aloe/normal.hpp"

namespace {

void BM_QuantileTail(benchmark::State& state) {
  double p = 1e-300;
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloe::stat::normal_quantile(p));
    p = p < 1e-10 ? p * 1.7 : 1e-300;
  }
}
BENCHMARK(BM_QuantileTail);

void BM_TruncatedNormal(benchmark::State& state) {
  const double tau = static_cast<double>(state.range(0));
  aloe::RandomStream rs(1);
  for (auto _ : state) benchmark::DoNotOptimize(aloe::stat::sample_upper_truncated_normal(tau, rs.uniform()));
}
BENCHMARK(BM_TruncatedNormal)->Arg(1)->Arg(6)->Arg(30);

void BM_HalfspaceConditional(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  std::vector<double> omega(d, 0.0);
  omega[0] = 1.0;
  std::vector<double> x(d);
  aloe::RandomStream rs(2);
  for (auto _ : state) {
    aloe::stat::sample_halfspace_conditional(omega, 4.0, rs, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_HalfspaceConditional)->Arg(2)->Arg(50)->Arg(500);

void BM_CountBlock(benchmark::State& state) {
  const auto J = static_cast<std::size_t>(state.range(0));
  const aloe::HighDimProblem hp = aloe::make_highdim({100, J, 6.0, 3});
  const Eigen::Index block = 1024;
  Eigen::MatrixXd points(100, block);
  std::vector<std::size_t> given(block);
  aloe::RandomStream rs(4);
  for (Eigen::Index c = 0; c < block; ++c) {
    given[static_cast<std::size_t>(c)] = static_cast<std::size_t>(c) % J;
    hp.problem.draw_given(given[static_cast<std::size_t>(c)], rs, std::span<double>(points.col(c).data(), 100));
  }
  std::vector<std::size_t> counts(block);
  for (auto _ : state) {
    hp.problem.count_given_block(given, points, counts);
    benchmark::DoNotOptimize(counts.data());
  }
  state.SetItemsProcessed(state.iterations() * block);
}
BENCHMARK(BM_CountBlock)->Arg(50)->Arg(200);

void BM_Polygon360(benchmark::State& state) {
  const aloe::HalfSpaceProblem p = aloe::make_polygon({360, 6.0, aloe::AngleSet::kFull});
  std::uint32_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(aloe::estimate(p, 1000, aloe::RandomStream(5, rep++)).mu_hat);
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Polygon360);

}  // namespace

BENCHMARK_MAIN();
