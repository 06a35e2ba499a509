#include "matword/clifford.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "matword/errors.hpp"

namespace matword {

namespace {

std::shared_ptr<const CliffordRep> build_rep(int n) {
  auto rep = std::make_shared<CliffordRep>();
  rep->num_generators = n;
  const int dim = 1 << n;
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXi e = Eigen::MatrixXi::Zero(dim, dim);
    const unsigned bit = 1u << j;
    for (int s = 0; s < dim; ++s) {
      const auto set = static_cast<unsigned>(s);
      // e_j e_S: move e_j past the generators of S with smaller index,
      // then e_j e_j = -1 if j is in S.
      int sign = (std::popcount(set & (bit - 1u)) % 2 == 0) ? 1 : -1;
      if (set & bit) sign = -sign;
      e(static_cast<int>(set ^ bit), s) = sign;
    }
    rep->generators.push_back(std::move(e));
  }
  return rep;
}

void check_tuple(std::span<const MatrixC> xs, const char* what) {
  if (xs.empty()) throw DimensionError(std::string(what) + ": empty tuple");
  if (xs.size() > static_cast<std::size_t>(kMaxCliffordGenerators))
    throw DomainError(std::string(what) + ": more than 12 generators");
  for (const auto& x : xs)
    if (x.rows() != xs.front().rows() || x.cols() != xs.front().cols() || x.rows() != x.cols())
      throw DimensionError(std::string(what) + ": tuple members must be square and equal size");
}

// y = Cliff(X) v without forming the operator. v is laid out with the
// Clifford index fastest: v[a * 2^N + S].
VectorC apply_clifford(std::span<const MatrixC> xs, const CliffordRep& rep, const VectorC& v) {
  const Index n = xs.front().rows();
  const Index d = rep.dim();
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> vm(
      v.data(), n, d);
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> acc =
      Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(n, d);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto& e = rep.generators[j];
    // (X (x) E) v  <->  X * Vm * E^T ; E has one nonzero per column.
    MatrixC permuted(n, d);
    for (Index s = 0; s < d; ++s) {
      for (Index r = 0; r < d; ++r) {
        if (e(r, s) != 0) {
          permuted.col(r) = vm.col(s) * static_cast<double>(e(r, s));
          break;
        }
      }
    }
    acc += xs[j] * permuted;
  }
  VectorC out(n * d);
  Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out.data(), n, d) =
      acc * cplx(0.0, 1.0);
  return out;
}

}  // namespace

std::shared_ptr<const CliffordRep> clifford_generators(int n) {
  if (n < 1 || n > kMaxCliffordGenerators) {
    std::ostringstream os;
    os << "clifford_generators: N = " << n << " outside [1, " << kMaxCliffordGenerators << "]";
    throw DomainError(os.str());
  }
  static std::shared_mutex mutex;
  static std::array<std::shared_ptr<const CliffordRep>, kMaxCliffordGenerators + 1> cache;
  {
    std::shared_lock lock(mutex);
    if (cache[static_cast<std::size_t>(n)]) return cache[static_cast<std::size_t>(n)];
  }
  std::unique_lock lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(n)];
  if (!slot) slot = build_rep(n);
  return slot;
}

MatrixC clifford_operator(std::span<const MatrixC> xs) {
  check_tuple(xs, "clifford_operator");
  const auto rep = clifford_generators(static_cast<int>(xs.size()));
  const Index n = xs.front().rows();
  const Index d = rep->dim();
  MatrixC out = MatrixC::Zero(n * d, n * d);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto& e = rep->generators[j];
    for (Index s = 0; s < d; ++s) {
      for (Index r = 0; r < d; ++r) {
        const int sign = e(r, s);
        if (sign == 0) continue;
        // kron(X, E): block (a, b) of size d holds X(a, b) * E
        for (Index b = 0; b < n; ++b)
          for (Index a = 0; a < n; ++a)
            out(a * d + r, b * d + s) += cplx(0.0, static_cast<double>(sign)) * xs[j](a, b);
      }
    }
  }
  return out;
}

MatrixC clifford_operator(const NormalTuple& x) { return clifford_operator(std::span(x.matrices())); }

double clifford_norm(std::span<const MatrixC> xs) {
  check_tuple(xs, "clifford_norm");
  const Index n = xs.front().rows();
  const auto rep = clifford_generators(static_cast<int>(xs.size()));
  const Index size = n * rep->dim();
  if (size <= 4096) return op_norm(clifford_operator(xs));

  // Cliff(X) is normal when every X_j is hermitian but not in general, so
  // iterate on Cliff* Cliff. Cliff* = i sum X_j* (x) e_j (e_j^T = -e_j).
  std::vector<MatrixC> adj;
  adj.reserve(xs.size());
  for (const auto& x : xs) adj.push_back(x.adjoint());
  VectorC v = VectorC::Ones(size) / std::sqrt(static_cast<double>(size));
  double estimate = 0.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const VectorC w = apply_clifford(xs, *rep, v);
    const VectorC z = apply_clifford(adj, *rep, w);
    const double lambda = std::sqrt(std::abs(v.dot(z)));
    const double nz = z.norm();
    if (nz == 0.0) return 0.0;
    v = z / nz;
    if (iter > 0 && std::abs(lambda - estimate) <= 1e-8 * std::max(lambda, 1e-300)) return lambda;
    estimate = lambda;
  }
  return estimate;
}

double delta_metric(std::span<const MatrixC> s, std::span<const MatrixC> t) {
  if (s.size() != t.size()) throw DimensionError("delta_metric: arity mismatch");
  std::vector<MatrixC> diff;
  diff.reserve(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j].rows() != t[j].rows() || s[j].cols() != t[j].cols())
      throw DimensionError("delta_metric: dimension mismatch");
    diff.push_back(s[j] - t[j]);
  }
  return clifford_norm(diff);
}

double delta_metric(const NormalTuple& s, const NormalTuple& t) {
  return delta_metric(std::span(s.matrices()), std::span(t.matrices()));
}

}  // namespace matword
