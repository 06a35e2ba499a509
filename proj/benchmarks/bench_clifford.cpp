#include <benchmark/benchmark.h>

#include "matword/clifford.hpp"
#include "matword/random.hpp"

using namespace matword;

static std::vector<MatrixC> tuple(int count, Index n) {
  Rng rng(31);
  std::vector<MatrixC> xs;
  for (int j = 0; j < count; ++j) xs.push_back(random_complex(n, rng));
  return xs;
}

// Dense branch: operator size 2^N n <= 4096.
static void BM_CliffordNormDense(benchmark::State& state) {
  const auto xs = tuple(static_cast<int>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(clifford_norm(xs));
}
BENCHMARK(BM_CliffordNormDense)->Args({2, 16})->Args({4, 16})->Args({4, 32})->Unit(benchmark::kMillisecond);

// Matrix-free power iteration above 4096.
static void BM_CliffordNormMatrixFree(benchmark::State& state) {
  const auto xs = tuple(static_cast<int>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(clifford_norm(xs));
}
BENCHMARK(BM_CliffordNormMatrixFree)->Args({6, 80})->Args({8, 32})->Unit(benchmark::kMillisecond);
