#include "matword/random.hpp"

#include <Eigen/QR>

namespace matword {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MatrixC random_complex(Index n, Rng& rng) {
  MatrixC a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = rng.complex_normal();
  return a;
}

VectorC random_unit_vector(Index n, Rng& rng) {
  VectorC v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

MatrixC random_unitary(Index n, Rng& rng) {
  const MatrixC g = random_complex(n, rng);
  Eigen::HouseholderQR<MatrixC> qr(g);
  MatrixC q = qr.householderQ() * identity(n);
  const MatrixC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

MatrixC random_hermitian(Index n, Rng& rng, double norm) {
  const MatrixC g = random_complex(n, rng);
  MatrixC h = hermitian_part(g);
  const double current = op_norm(h);
  if (current > 0.0) h *= norm / current;
  return h;
}

}  // namespace matword
