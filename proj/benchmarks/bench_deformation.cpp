#include <benchmark/benchmark.h>

#include "matword/deformation.hpp"

using namespace matword;

static void BM_ConnectGujc(benchmark::State& state) {
  InstanceSpec spec;
  spec.m = 2;
  spec.n = static_cast<int>(state.range(0));
  spec.delta = 0.02;
  spec.seed = 21;
  const Instance inst = generate_instance(spec);
  for (auto _ : state) benchmark::DoNotOptimize(connect_gujc(inst.x, inst.y, 0.2).achieved_eps);
}
BENCHMARK(BM_ConnectGujc)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ConnectSoftAlgebraic(benchmark::State& state) {
  InstanceSpec spec;
  spec.m = 2;
  spec.n = static_cast<int>(state.range(0));
  spec.delta = 0.01;
  spec.eps_alg = 1e-3;
  spec.polys = {PolyC({-1.0, 0.0, 1.0}, true)};
  spec.seed = 22;
  const Instance inst = generate_instance(spec);
  const double delta = soft_delta(inst.x, inst.y, spec.polys);
  for (auto _ : state)
    benchmark::DoNotOptimize(connect_soft_algebraic(inst.x, inst.y, spec.polys, delta, 0.05).achieved_eps);
}
BENCHMARK(BM_ConnectSoftAlgebraic)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_VerifyUlpacTrial(benchmark::State& state) {
  InstanceSpec spec;
  spec.m = 2;
  spec.n = 16;
  spec.delta = 0.02;
  spec.polys = {PolyC({-1.0, 0.0, 1.0}, true)};
  for (auto _ : state) benchmark::DoNotOptimize(verify_ulpac(spec, 1).passed());
}
BENCHMARK(BM_VerifyUlpacTrial)->Unit(benchmark::kMillisecond);
