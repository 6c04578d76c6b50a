#include <benchmark/benchmark.h>

#include <vector>

#include "screenlab/best_response.hpp"
#include "screenlab/evaluation.hpp"
#include "screenlab/oracle.hpp"
#include "screenlab/parallel.hpp"

using namespace screenlab;

namespace {

const CostModel kEuclid = CostModel::euclidean();

std::vector<Point> types(std::size_t n) {
  Rng rng(99);
  std::vector<Point> xs(n);
  for (auto& x : xs) x = rng.in_box({-3, -3}, {3, 3});
  return xs;
}

}  // namespace

static void BM_Zigzag(benchmark::State& state) {
  const Wedge w = canonical_wedge(60.0);
  const auto xs = types(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zigzag_two_step(xs[i++ & 1023], w.a, w.b, kEuclid));
  }
}
BENCHMARK(BM_Zigzag);

static void BM_BestResponse(benchmark::State& state) {
  const Wedge w = canonical_wedge(static_cast<double>(state.range(0)));
  const Sequential m{w.a, w.b, 0.5, Disclosure::Disclose};
  const auto xs = types(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response(xs[i++ & 1023], m, Setting::Manipulation, kEuclid));
  }
}
BENCHMARK(BM_BestResponse)->Arg(25)->Arg(60)->Arg(120);

static void BM_Evaluate(benchmark::State& state) {
  set_thread_override(static_cast<unsigned>(state.range(1)));
  const Wedge w = canonical_wedge(45.0);
  const Distribution d = Distribution::uniform({-2, -2}, {2, 2});
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evaluate(Sequential{w.a, w.b, 0.5}, w, d, Setting::Manipulation, kEuclid, Objective::PI, n, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  set_thread_override(0);
}
BENCHMARK(BM_Evaluate)->Args({100000, 1})->Args({100000, 4})->Unit(benchmark::kMillisecond);

static void BM_DistanceTransform(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  std::vector<char> mask(side * side, 0);
  for (std::size_t j = 0; j < side; ++j)
    for (std::size_t i = 0; i < side; ++i) mask[j * side + i] = i + 2 * j > side;
  for (auto _ : state) {
    benchmark::DoNotOptimize(detail::distance_transform(mask, side, side));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_DistanceTransform)->Arg(256)->Arg(600)->Unit(benchmark::kMillisecond);

static void BM_OracleBestResponse(benchmark::State& state) {
  const Wedge w = canonical_wedge(60.0);
  const Mechanism m = Sequential{w.a, w.b, 0.5};
  const GridSpec grid = GridSpec::around({0, 0}, 3.0, 0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_best_response({-0.4, 0.3}, m, Setting::Manipulation, kEuclid, grid));
  }
}
BENCHMARK(BM_OracleBestResponse)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
