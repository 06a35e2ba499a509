#pragma once

#include <cstdint>
#include <numbers>
#include <random>

#include "matword/linalg.hpp"

namespace matword {

/// Seeded source for every random construction in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  cplx complex_normal() {
    constexpr double kScale = 1.0 / std::numbers::sqrt2;
    const double re = normal();
    const double im = normal();
    return {re * kScale, im * kScale};
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Independent child seed for trial `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

MatrixC random_complex(Index n, Rng& rng);
VectorC random_unit_vector(Index n, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
MatrixC random_unitary(Index n, Rng& rng);
/// Random hermitian matrix scaled to operator norm `norm`.
MatrixC random_hermitian(Index n, Rng& rng, double norm = 1.0);

}  // namespace matword
