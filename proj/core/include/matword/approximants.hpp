#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "matword/linalg.hpp"

namespace matword {

struct ProjectionFamily {
  std::vector<MatrixC> projections;
  double completeness_residual = 0.0;  // ||sum P_j - 1||

  /// Validates hermiticity, idempotence and pairwise orthogonality within
  /// tol (default 1e-8 * n) and records the completeness residual.
  static ProjectionFamily from(std::vector<MatrixC> projections,
                               std::optional<double> tol = std::nullopt);
};

/// Nonzero products P_j Q_k. Throws ToleranceError when some P_j and Q_k
/// fail to commute within tol (default 1e-8 * n).
ProjectionFamily refine_projections(const ProjectionFamily& p, const ProjectionFamily& q,
                                    std::optional<double> tol = std::nullopt);

struct CommutingUnitary {
  MatrixC z;
  double constant = 0.0;      // 3 r (r - 1) / s
  double gap = 0.0;           // s
  std::size_t clusters = 0;   // r
  bool completed = false;     // a compressed block was rank deficient
  double commutator_residual = 0.0;  // ||[Z, D]||
  double distance = 0.0;             // ||1 - W Z||
  double defect = 0.0;               // ||W D W* - D||
};

/// Unitary Z commuting with D such that ||1 - WZ|| <= C ||WDW* - D||.
/// Z* is assembled from the polar parts of the compressions of W to the
/// spectral subspaces of D. cluster_tol defaults to 1e-8 * n * max(1, ||D||).
CommutingUnitary nearby_commuting_unitary(const MatrixC& w, const MatrixC& d,
                                          std::optional<double> cluster_tol = std::nullopt);

/// Min-sum assignment (Hungarian method). result[row] = column.
std::vector<Index> solve_assignment(const Eigen::MatrixXd& cost);

/// Minimises the largest selected cost first, then the sum among the
/// assignments achieving it.
std::vector<Index> bottleneck_assignment(const Eigen::MatrixXd& cost);

struct IsospectralApproximant {
  MatrixC w;                       // Psi = Ad[W]
  std::vector<Index> permutation;  // source eigen slot -> target eigen slot
  double matching_cost = 0.0;      // largest coordinate mismatch of the matching
  double distance_to_target = 0.0; // max_j ||Psi(X_j) - Y_j||
  double distance_to_source = 0.0; // max_j ||Psi(X_j) - X_j||

  MatrixC apply(const MatrixC& x) const { return w * x * w.adjoint(); }
  /// Psi^dagger = Ad[W*]
  IsospectralApproximant adjoint() const;
};

/// Psi = Ad[W] sending the joint eigenbasis of X onto that of Y along a
/// bottleneck matching of joint eigenvalues, so sigma(Psi(X_j)) = sigma(X_j)
/// and Psi(X_j) commutes with Y_j. Throws ToleranceError when a tuple does
/// not commute within tol (default 1e-8 * n) or some ||X_j - Y_j|| > delta
/// + tol, and DomainError when the matching cost exceeds 3 N delta + tol.
IsospectralApproximant joint_isospectral_approximant(const NormalTuple& x, const NormalTuple& y,
                                                     double delta,
                                                     std::optional<double> tol = std::nullopt);

/// Normal matrix with n distinct eigenvalues, pairwise separated by at
/// least delta / n, commuting with the whole tuple and within delta of X_j.
/// Returns X_j itself when its eigenvalues are already that well
/// separated. Throws DomainError when delta / n is too small to resolve.
MatrixC nearby_generator(const NormalTuple& x, std::size_t j, double delta,
                         std::optional<double> tol = std::nullopt);

/// Upper-left n x n block of a 2n x 2n matrix.
MatrixC compress_kappa(const MatrixC& m);
/// x (+) x
MatrixC embed_iota2(const MatrixC& x);

enum class DilationKind { standard, z2 };

/// standard: 1_2 (x) W. z2: (S (x) 1_n)(W* (+) W) with S = diag(1, -1).
MatrixC dilation_unitary(const MatrixC& w, DilationKind kind);
IsospectralApproximant dilate(const IsospectralApproximant& psi, DilationKind kind);

}  // namespace matword
