// Serial reference vs OpenMP kernels on the three hot paths: candidate
// enumeration, rasterization, and the direction sweep.
//
//   cmake --build build --target bench_kernels && ./build/bench/bench_kernels

#include <benchmark/benchmark.h>

#include <cmath>

#include "mayocut/discrete_solver.hpp"
#include "mayocut/kernels.hpp"
#include "mayocut/measure_solver.hpp"
#include "mayocut/oracle.hpp"
#include "mayocut/parallel.hpp"

namespace {

using namespace mayocut;

Instance benchmark_instance() {
  GenBox box;
  box.lo = PointQ{Rat(0), Rat(0)};
  box.hi = PointQ{Rat(10), Rat(10)};
  return gen_instance(4242, 2, {28, 28}, box);
}

ShapeSpec benchmark_shape() {
  ShapeSpec s;
  s.name = "pair";
  s.parts.push_back(BallShape{PointD{-1, 1}, 1.0, 1.0});
  s.parts.push_back(BallShape{PointD{-1, -1}, 1.0, 1.0});
  return s;
}

void BM_EnumerateCuts(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const Instance inst = benchmark_instance();
  for (auto _ : state) {
    auto cuts = enumerate_all_cuts(inst);
    benchmark::DoNotOptimize(cuts);
  }
  set_max_threads(0);
}

void BM_Rasterize(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const ShapeSpec shape = benchmark_shape();
  for (auto _ : state) {
    auto grid = rasterize(shape, 1.0 / 160);
    benchmark::DoNotOptimize(grid);
  }
  set_max_threads(0);
}

void BM_MeasureSweep(benchmark::State& state) {
  set_max_threads(static_cast<int>(state.range(0)));
  const std::vector<MeasureInput> inputs = {
      benchmark_shape(), [] {
        ShapeSpec s;
        s.name = "other";
        s.parts.push_back(BallShape{PointD{1, 1}, 1.0, 1.0});
        s.parts.push_back(BallShape{PointD{1, -1}, 1.0, 1.0});
        return s;
      }()};
  for (auto _ : state) {
    auto sol = solve_measure_cut(inputs, {0.0625});
    benchmark::DoNotOptimize(sol);
  }
  set_max_threads(0);
}

}  // namespace

BENCHMARK(BM_EnumerateCuts)->Arg(1)->Arg(2)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rasterize)->Arg(1)->Arg(2)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasureSweep)->Arg(1)->Arg(2)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
