#include <benchmark/benchmark.h>

#include "matword/approximants.hpp"
#include "matword/deformation.hpp"
#include "matword/random.hpp"

using namespace matword;

static Instance make(int n) {
  InstanceSpec spec;
  spec.m = 2;
  spec.n = n;
  spec.delta = 0.02;
  spec.seed = 11;
  return generate_instance(spec);
}

static void BM_JointIsospectralApproximant(benchmark::State& state) {
  const Instance inst = make(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(joint_isospectral_approximant(inst.x, inst.y, 0.02).w.data());
}
BENCHMARK(BM_JointIsospectralApproximant)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_NearbyCommutingUnitary(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Rng rng(12);
  VectorC d(n);
  for (Index i = 0; i < n; ++i) d(i) = static_cast<double>(i % 4) * 0.5;
  const MatrixC u = random_unitary(n, rng);
  const MatrixC dm = u * d.asDiagonal() * u.adjoint();
  const MatrixC w = exp_i_pi(random_hermitian(n, rng, 0.01));
  for (auto _ : state) benchmark::DoNotOptimize(nearby_commuting_unitary(w, dm).z.data());
}
BENCHMARK(BM_NearbyCommutingUnitary)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
