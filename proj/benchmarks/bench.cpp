#include <benchmark/benchmark.h>

#include "logcert/blowup.hpp"
#include "logcert/chains.hpp"
#include "logcert/lab.hpp"

#include <cmath>
#include <random>

namespace {

void BM_chain_build(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  auto inst = logcert::chains::make_random_instance(4, k, rng);
  for (auto _ : state) {
    auto res = logcert::chains::build_safe_chain(inst.x, inst.y, inst.arrangement);
    benchmark::DoNotOptimize(res.certificate.measured_length);
  }
}
BENCHMARK(BM_chain_build)->Arg(1)->Arg(2)->Arg(3);

void BM_grid_dijkstra(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  logcert::grid::GridField f({0, 0}, {1, 1}, n, n);
  std::vector<double> g(f.values().size(), 1.0);
  for (auto _ : state) {
    auto d = logcert::grid::grid_shortest_paths(f, g, {f.idx(n / 2, n / 2)});
    benchmark::DoNotOptimize(d.back());
  }
}
BENCHMARK(BM_grid_dijkstra)->Arg(64)->Arg(128)->Arg(256);

void BM_lelong_sweep(benchmark::State& state) {
  auto v = logcert::grid::GridField::from_function(
      {-0.2, -0.2}, {0.2, 0.2}, 512, 512, [](const logcert::grid::Point2& p) {
        return std::log(p.norm());
      });
  for (auto _ : state) {
    auto sw = logcert::lab::lelong_sweep(v, {0, 0}, {0.01, 0.0316, 0.1});
    benchmark::DoNotOptimize(sw.max_over_min());
  }
}
BENCHMARK(BM_lelong_sweep);

void BM_fiber_distance_oracle(benchmark::State& state) {
  logcert::blowup::ChartGridOracle oracle(64);
  Eigen::Vector2d a(0.5, 0.2), b(-0.4, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.fiber_distance(a, b));
  }
}
BENCHMARK(BM_fiber_distance_oracle);

}  // namespace

BENCHMARK_MAIN();
