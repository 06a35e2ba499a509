#include <benchmark/benchmark.h>

#include "matword/minpoly.hpp"
#include "matword/pseudospectra.hpp"
#include "matword/random.hpp"

using namespace matword;

static void BM_SigmaMinField(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Rng rng(1);
  const MatrixC a = random_complex(n, rng) / std::sqrt(static_cast<double>(n));
  const Grid2D g = chebyshev_grid({-1.5, 1.5, -1.5, 1.5}, 31, 31);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_min_field(a, g).values.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_SigmaMinField)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_SigmaMinDenseSvd(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Rng rng(2);
  const MatrixC a = random_complex(n, rng) / std::sqrt(static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(sigma_min_at(a, cplx(0.1, 0.2)));
}
BENCHMARK(BM_SigmaMinDenseSvd)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_ApproxMinPoly(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Rng rng(3);
  VectorC d(n);
  for (Index i = 0; i < n; ++i) d(i) = cplx(static_cast<double>(i % 10) / 10.0, 0.0) + 1e-4 * rng.complex_normal();
  const MatrixC u = random_unitary(n, rng);
  const MatrixC a = u * d.asDiagonal() * u.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(approx_min_poly(a, 1e-2, 12).residual);
}
BENCHMARK(BM_ApproxMinPoly)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
