#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace matword {

using cplx = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Engineering default for unitarity/normality/commutation slack: 1e-8 * n.
inline double default_tol(Index n) { return 1e-8 * static_cast<double>(n); }

MatrixC identity(Index n);

/// Largest singular value.
double op_norm(const MatrixC& a);

/// Smallest singular value of a square matrix.
double sigma_min(const MatrixC& a);

double unitarity_defect(const MatrixC& w);    // ||W*W - 1||
double normality_defect(const MatrixC& a);    // ||AA* - A*A||
double hermiticity_defect(const MatrixC& a);  // ||A - A*||

/// (A + A*)/2, removes rounding asymmetry from hermitian results.
MatrixC hermitian_part(const MatrixC& a);

MatrixC commutator(const MatrixC& a, const MatrixC& b);

/// W X W*. Throws ToleranceError when ||W*W - 1|| exceeds `tol`
/// (default 1e-8 * n).
MatrixC adjoint_action(const MatrixC& w, const MatrixC& x,
                       std::optional<double> tol = std::nullopt);

struct CartesianParts {
  MatrixC real;  // (A + A*)/2
  MatrixC imag;  // (A - A*)/(2i)
};

CartesianParts cartesian_decomposition(const MatrixC& a);

/// Eigenpairs of a normal matrix with orthonormal eigenvectors, sorted by
/// (real, imag). Hermitian inputs go through the self-adjoint solver.
struct NormalEigen {
  VectorC values;
  MatrixC vectors;
};

NormalEigen normal_eigen(const MatrixC& n);

/// Single-linkage groups: i and j share a group whenever a chain of points
/// with consecutive distances <= tol joins them. Groups are ordered by
/// their smallest member index and each group lists indices ascending.
std::vector<std::vector<Index>> single_linkage_clusters(std::span<const cplx> values,
                                                        double tol);

struct SpectralDecomposition {
  std::vector<cplx> values;         // cluster representatives (means)
  std::vector<MatrixC> projections; // P_j = B_j B_j*
  std::vector<MatrixC> bases;       // orthonormal columns spanning range(P_j)
  double cluster_tol = 0.0;

  std::size_t size() const { return values.size(); }
  /// Smallest distance between distinct cluster representatives
  /// (infinity for a single cluster).
  double min_gap() const;
};

/// Clusters the spectrum of a normal matrix. Throws ToleranceError if
/// ||NN* - N*N|| > normality_tol (default 1e-8 * n), and ClusteringError
/// if the clustering is ambiguous: a cluster whose spread exceeds
/// cluster_tol, or two clusters closer than 2 * cluster_tol.
SpectralDecomposition spectral_decomposition(const MatrixC& n, double cluster_tol,
                                             std::optional<double> normality_tol = std::nullopt);

/// An ordered tuple of same-size matrices together with the measured
/// pairwise commutator bound and contraction slack. The bounds are always
/// computed from the matrices, never supplied by the caller.
class NormalTuple {
 public:
  NormalTuple() = default;
  explicit NormalTuple(std::vector<MatrixC> matrices);

  std::size_t size() const { return matrices_.size(); }
  bool empty() const { return matrices_.empty(); }
  Index dim() const { return matrices_.empty() ? 0 : matrices_.front().rows(); }
  const MatrixC& operator[](std::size_t j) const { return matrices_[j]; }
  const std::vector<MatrixC>& matrices() const { return matrices_; }

  /// max_{j<k} ||[X_j, X_k]||
  double commutator_bound() const { return commutator_bound_; }
  /// max_j max(0, ||X_j|| - 1)
  double contraction_slack() const { return contraction_slack_; }
  /// max_j ||X_j X_j* - X_j* X_j||
  double normality_bound() const { return normality_bound_; }

 private:
  std::vector<MatrixC> matrices_;
  double commutator_bound_ = 0.0;
  double contraction_slack_ = 0.0;
  double normality_bound_ = 0.0;
};

struct JointDiagonalization {
  MatrixC unitary;                 // columns: joint eigenvectors
  std::vector<VectorC> diagonals;  // diagonals[j](i) = <u_i, X_j u_i>
  double residual = 0.0;           // max_j ||U* X_j U - diag(d_j)||
  double residual_bound = 0.0;     // the bound the residual was checked against
};

struct JointDiagonalizeOptions {
  /// Eigenvalue clustering threshold used while refining blocks;
  /// defaults to max(tol, 1e-8 * n * scale).
  std::optional<double> cluster_tol;
  /// Acceptable residual; defaults to 1e-8 * n + 4 * sqrt(tol) * scale,
  /// with scale = max(1, max_j ||X_j||).
  std::optional<double> residual_bound;
};

/// Recursive block refinement: diagonalise X_1, split by eigenvalue
/// cluster, restrict X_2 to each block, and so on. Throws ToleranceError
/// when the tuple's commutator bound exceeds tol or the final off-diagonal
/// leak exceeds the residual bound.
JointDiagonalization joint_diagonalize(const NormalTuple& tuple, double tol,
                                       const JointDiagonalizeOptions& options = {});

/// e^{pi i t H} for hermitian H, via its eigendecomposition.
MatrixC exp_i_pi(const MatrixC& h, double t = 1.0);

/// f(H) for hermitian H, applied through the spectral theorem.
MatrixC hermitian_function(const MatrixC& h, const std::function<double(double)>& f);

/// Hermitian H with -1 <= H <= 1 and e^{pi i H} = Z. Throws
/// ToleranceError if Z is not unitary within tol, DomainError if the
/// spectrum of Z comes within tol of -1.
MatrixC principal_unitary_log(const MatrixC& z, std::optional<double> tol = std::nullopt);

struct PolarParts {
  MatrixC isometry;  // V
  MatrixC positive;  // R, positive semidefinite
  bool completed = false;  // true when A was rank deficient and V was completed
};

/// A = V R from a full SVD (A = U S Q*, V = U Q*, R = Q S Q*). V is unitary;
/// on rank-deficient inputs it is a deterministic unitary completion.
PolarParts polar_decomposition(const MatrixC& a);

/// Polar decomposition of the compression B* A B restricted to range(B),
/// lifted back: V = B V_k B*, R = B R_k B*. B must have orthonormal columns.
PolarParts polar_on_range(const MatrixC& a, const MatrixC& basis);

}  // namespace matword
