#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "matword/linalg.hpp"

namespace matword {

/// Left-regular representation of the real Clifford algebra with N
/// generators e_j (e_j e_k = -e_k e_j, e_j^2 = -1) on span{e_S : S subset of
/// {1..N}}. Basis index = bitmask of S; generators are signed permutations.
struct CliffordRep {
  int num_generators = 0;
  std::vector<Eigen::MatrixXi> generators;

  Index dim() const { return Index{1} << num_generators; }
};

inline constexpr int kMaxCliffordGenerators = 12;

/// Cached per N; throws DomainError when N < 1 or N > 12.
std::shared_ptr<const CliffordRep> clifford_generators(int n);

/// i * sum_j X_j (x) e_j, of size n * 2^N.
MatrixC clifford_operator(std::span<const MatrixC> xs);
MatrixC clifford_operator(const NormalTuple& x);

/// ||Cliff(X)||. Dense SVD up to size 4096, matrix-free power iteration
/// (relative tolerance 1e-8) above that.
double clifford_norm(std::span<const MatrixC> xs);

/// Delta(S, T) = ||Cliff(S - T)||.
double delta_metric(std::span<const MatrixC> s, std::span<const MatrixC> t);
double delta_metric(const NormalTuple& s, const NormalTuple& t);

}  // namespace matword
