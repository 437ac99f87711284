#include <benchmark/benchmark.h>

#include "plpot/extremal.hpp"
#include "plpot/ferrier.hpp"
#include "plpot/kernel.hpp"

using namespace plpot;

namespace {

ConvexBody segment() { return build_body(std::vector<std::vector<long long>>{{0}, {1}}); }

void BM_PhiDisk(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  ExtremalProblem prob(segment(), circle_sample(512), n);
  CVector z0{Complex(1.7, 0.9)};
  for (auto _ : state) benchmark::DoNotOptimize(prob.solve(z0).phi_value);
}
BENCHMARK(BM_PhiDisk)->Arg(4)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PhiTorus(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  ExtremalProblem prob(simplex_body(2), torus_sample(32, 32), n);
  CVector z0{1.5, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(prob.solve(z0).phi_value);
}
BENCHMARK(BM_PhiTorus)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ConvolveHp(benchmark::State& state) {
  auto q = quadrilateral_body();
  auto k = build_kernel(2, static_cast<int>(state.range(0)));
  CVector z{Complex(0.3, 0.1), Complex(40.0, -3.0)};
  for (auto _ : state) benchmark::DoNotOptimize(convolve_hp(q, k, 0.5, z).value);
}
BENCHMARK(BM_ConvolveHp)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Counterexample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(counterexample_point(0.5, 5.0, 64).gap);
}
BENCHMARK(BM_Counterexample)->Unit(benchmark::kMillisecond);

void BM_FerrierHp(benchmark::State& state) {
  auto q = quadrilateral_body();
  CVector x{Complex(0.01, 0.0), Complex(300.0, 2.0)};
  for (auto _ : state) benchmark::DoNotOptimize(ferrier_hp(q, 10.0, x).u_t_value);
}
BENCHMARK(BM_FerrierHp)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
