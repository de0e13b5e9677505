#include <benchmark/benchmark.h>

#include <random>

#include "realrays/alpha.hpp"
#include "realrays/counting.hpp"
#include "support.hpp"

using namespace realrays;

namespace {

PolynomialSystem sample_system(int n, int degree) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n * 100 + degree));
  std::vector<int> degrees(static_cast<std::size_t>(n), degree);
  std::vector<Polynomial> polys;
  for (int i = 0; i < n; ++i) polys.push_back(testing::random_polynomial(rng, n + 1, degree));
  return PolynomialSystem(std::move(degrees), std::move(polys)).normalized();
}

template <class Arith>
void point_evaluator(benchmark::State& state, Arith ar) {
  const auto f = sample_system(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  PointEvaluator<Arith> eval(ar, f);
  std::mt19937_64 rng(1);
  std::vector<SpherePoint> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(testing::random_point(rng, f.dimension()));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(pts[i++ & 255].span()));
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_PointEvaluatorHost(benchmark::State& state) { point_evaluator(state, HostArithmetic{}); }
void BM_PointEvaluatorRounded24(benchmark::State& state) {
  point_evaluator(state, RoundedArithmetic(PrecisionContext(24)));
}

void BM_Residual(benchmark::State& state) {
  const auto f = sample_system(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  PointEvaluator<HostArithmetic> eval(HostArithmetic{}, f);
  std::mt19937_64 rng(2);
  auto x = testing::random_point(rng, f.dimension());
  for (auto _ : state) benchmark::DoNotOptimize(eval.residual(x.span()));
  state.SetItemsProcessed(state.iterations());
}

void BM_BuildGraph(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto f = sample_system(n, 3);
  const CubeGridSpec spec{n, k};
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(f, spec, ArithmeticMode::exact()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.point_count()));
}

void BM_BuildGraphRounded(benchmark::State& state) {
  const auto f = sample_system(1, 3);
  const CubeGridSpec spec{1, 14};
  const auto mode = ArithmeticMode::rounded(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(f, spec, mode));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.point_count()));
}

void BM_CountRoots(benchmark::State& state) {
  const auto f = sample_system(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_roots(f));
}

}  // namespace

BENCHMARK(BM_PointEvaluatorHost)->Args({1, 2})->Args({1, 6})->Args({2, 3})->Args({3, 4});
BENCHMARK(BM_PointEvaluatorRounded24)->Args({1, 2})->Args({2, 3})->Args({3, 4});
BENCHMARK(BM_Residual)->Args({1, 6})->Args({2, 3});
BENCHMARK(BM_BuildGraph)->Args({1, 12})->Args({1, 16})->Args({2, 6})->Args({2, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildGraphRounded)->Arg(53)->Arg(24)->Arg(8)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountRoots)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
