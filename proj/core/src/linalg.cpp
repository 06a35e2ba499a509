#include "matword/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "matword/errors.hpp"

namespace matword {

namespace {

void require_square(const MatrixC& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
}

void require_same_dim(const MatrixC& a, const MatrixC& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols();
    throw DimensionError(os.str());
  }
}

bool lex_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

MatrixC identity(Index n) { return MatrixC::Identity(n, n); }

double op_norm(const MatrixC& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<MatrixC> svd(a);
  return svd.singularValues()(0);
}

double sigma_min(const MatrixC& a) {
  require_square(a, "sigma_min");
  Eigen::BDCSVD<MatrixC> svd(a);
  return svd.singularValues()(a.rows() - 1);
}

double unitarity_defect(const MatrixC& w) {
  require_square(w, "unitarity_defect");
  return op_norm(w.adjoint() * w - identity(w.rows()));
}

double normality_defect(const MatrixC& a) {
  require_square(a, "normality_defect");
  return op_norm(a * a.adjoint() - a.adjoint() * a);
}

double hermiticity_defect(const MatrixC& a) {
  require_square(a, "hermiticity_defect");
  return op_norm(a - a.adjoint());
}

MatrixC hermitian_part(const MatrixC& a) { return (a + a.adjoint()) * 0.5; }

MatrixC commutator(const MatrixC& a, const MatrixC& b) {
  require_square(a, "commutator");
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

MatrixC adjoint_action(const MatrixC& w, const MatrixC& x, std::optional<double> tol) {
  require_square(w, "adjoint_action");
  require_same_dim(w, x, "adjoint_action");
  const double limit = tol.value_or(default_tol(w.rows()));
  const double defect = unitarity_defect(w);
  if (defect > limit) {
    std::ostringstream os;
    os << "adjoint_action: W is not unitary (||W*W - 1|| = " << defect << " > " << limit << ")";
    throw ToleranceError(os.str());
  }
  return w * x * w.adjoint();
}

CartesianParts cartesian_decomposition(const MatrixC& a) {
  require_square(a, "cartesian_decomposition");
  const cplx two_i(0.0, 2.0);
  return {(a + a.adjoint()) * 0.5, (a - a.adjoint()) / two_i};
}

NormalEigen normal_eigen(const MatrixC& n) {
  require_square(n, "normal_eigen");
  const Index dim = n.rows();
  NormalEigen raw;
  const double scale = std::max(1.0, n.cwiseAbs().maxCoeff());
  if ((n - n.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(hermitian_part(n));
    raw.values = es.eigenvalues().cast<cplx>();
    raw.vectors = es.eigenvectors();
  } else {
    Eigen::ComplexSchur<MatrixC> schur(n);
    raw.values = schur.matrixT().diagonal();
    raw.vectors = schur.matrixU();
  }

  std::vector<Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return lex_less(raw.values(a), raw.values(b)); });
  NormalEigen out;
  out.values.resize(dim);
  out.vectors.resize(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    out.values(k) = raw.values(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = raw.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

std::vector<std::vector<Index>> single_linkage_clusters(std::span<const cplx> values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) {
        const std::size_t ri = find(i);
        const std::size_t rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<Index>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(static_cast<Index>(i));
  }
  return groups;
}

double SpectralDecomposition::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t k = j + 1; k < values.size(); ++k)
      gap = std::min(gap, std::abs(values[j] - values[k]));
  return gap;
}

SpectralDecomposition spectral_decomposition(const MatrixC& n, double cluster_tol,
                                             std::optional<double> normality_tol) {
  require_square(n, "spectral_decomposition");
  if (!(cluster_tol >= 0.0)) throw DomainError("spectral_decomposition: cluster_tol must be >= 0");
  const double ntol = normality_tol.value_or(default_tol(n.rows()));
  const double defect = normality_defect(n);
  if (defect > ntol) {
    std::ostringstream os;
    os << "spectral_decomposition: matrix is not normal (||NN* - N*N|| = " << defect << " > "
       << ntol << ")";
    throw ToleranceError(os.str());
  }

  const NormalEigen eig = normal_eigen(n);
  std::vector<cplx> vals(eig.values.data(), eig.values.data() + eig.values.size());
  const auto groups = single_linkage_clusters(vals, cluster_tol);

  SpectralDecomposition out;
  out.cluster_tol = cluster_tol;
  for (const auto& g : groups) {
    cplx mean(0.0, 0.0);
    for (Index i : g) mean += vals[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(g.size());
    double spread = 0.0;
    for (Index i : g) spread = std::max(spread, std::abs(vals[static_cast<std::size_t>(i)] - mean));
    if (spread > cluster_tol) {
      std::ostringstream os;
      os << "spectral_decomposition: cluster around " << mean << " has spread " << spread
         << " > cluster_tol " << cluster_tol << " (chained eigenvalues)";
      throw ClusteringError(os.str());
    }
    MatrixC basis(n.rows(), static_cast<Index>(g.size()));
    for (std::size_t c = 0; c < g.size(); ++c) basis.col(static_cast<Index>(c)) = eig.vectors.col(g[c]);
    out.values.push_back(mean);
    out.projections.push_back(basis * basis.adjoint());
    out.bases.push_back(std::move(basis));
  }

  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      double d = std::numeric_limits<double>::infinity();
      for (Index i : groups[a])
        for (Index j : groups[b])
          d = std::min(d, std::abs(vals[static_cast<std::size_t>(i)] - vals[static_cast<std::size_t>(j)]));
      if (d <= 2.0 * cluster_tol) {
        std::ostringstream os;
        os << "spectral_decomposition: eigenvalue gap " << d << " straddles cluster_tol "
           << cluster_tol << " (ambiguous clustering)";
        throw ClusteringError(os.str());
      }
    }
  }
  return out;
}

NormalTuple::NormalTuple(std::vector<MatrixC> matrices) : matrices_(std::move(matrices)) {
  if (matrices_.empty()) return;
  for (const auto& m : matrices_) {
    require_square(m, "NormalTuple");
    require_same_dim(matrices_.front(), m, "NormalTuple");
    if (!m.allFinite()) throw DomainError("NormalTuple: non-finite entry");
  }
  for (std::size_t j = 0; j < matrices_.size(); ++j) {
    contraction_slack_ = std::max(contraction_slack_, op_norm(matrices_[j]) - 1.0);
    normality_bound_ = std::max(normality_bound_, normality_defect(matrices_[j]));
    for (std::size_t k = j + 1; k < matrices_.size(); ++k)
      commutator_bound_ =
          std::max(commutator_bound_, op_norm(matrices_[j] * matrices_[k] - matrices_[k] * matrices_[j]));
  }
}

JointDiagonalization joint_diagonalize(const NormalTuple& tuple, double tol,
                                       const JointDiagonalizeOptions& options) {
  if (tuple.empty()) throw DimensionError("joint_diagonalize: empty tuple");
  if (tuple.commutator_bound() > tol) {
    std::ostringstream os;
    os << "joint_diagonalize: commutator bound " << tuple.commutator_bound() << " exceeds tol " << tol;
    throw ToleranceError(os.str());
  }
  const Index n = tuple.dim();
  double scale = 1.0;
  for (const auto& x : tuple.matrices()) scale = std::max(scale, op_norm(x));
  const double ctol = options.cluster_tol.value_or(std::max(tol, default_tol(n) * scale));
  const double bound =
      options.residual_bound.value_or(default_tol(n) + 4.0 * std::sqrt(std::max(tol, 0.0)) * scale);

  std::vector<MatrixC> blocks{identity(n)};
  for (const auto& x : tuple.matrices()) {
    std::vector<MatrixC> refined;
    for (const auto& b : blocks) {
      if (b.cols() == 1) {
        refined.push_back(b);
        continue;
      }
      const MatrixC restricted = b.adjoint() * x * b;
      const NormalEigen eig = normal_eigen(restricted);
      std::vector<cplx> vals(eig.values.data(), eig.values.data() + eig.values.size());
      for (const auto& g : single_linkage_clusters(vals, ctol)) {
        MatrixC q(b.cols(), static_cast<Index>(g.size()));
        for (std::size_t c = 0; c < g.size(); ++c) q.col(static_cast<Index>(c)) = eig.vectors.col(g[c]);
        refined.push_back(b * q);
      }
    }
    blocks = std::move(refined);
  }

  JointDiagonalization out;
  out.unitary.resize(n, n);
  Index col = 0;
  for (const auto& b : blocks) {
    out.unitary.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  out.residual_bound = bound;
  for (const auto& x : tuple.matrices()) {
    const MatrixC d = out.unitary.adjoint() * x * out.unitary;
    VectorC diag = d.diagonal();
    MatrixC off = d;
    off.diagonal().setZero();
    out.residual = std::max(out.residual, op_norm(off));
    out.diagonals.push_back(std::move(diag));
  }
  if (out.residual > bound) {
    std::ostringstream os;
    os << "joint_diagonalize: off-diagonal residual " << out.residual << " exceeds bound " << bound;
    throw ToleranceError(os.str());
  }
  return out;
}

MatrixC exp_i_pi(const MatrixC& h, double t) {
  require_square(h, "exp_i_pi");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(hermitian_part(h));
  VectorC phases(h.rows());
  for (Index k = 0; k < h.rows(); ++k)
    phases(k) = std::polar(1.0, std::numbers::pi * t * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixC hermitian_function(const MatrixC& h, const std::function<double(double)>& f) {
  require_square(h, "hermitian_function");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(hermitian_part(h));
  VectorC vals(h.rows());
  for (Index k = 0; k < h.rows(); ++k) vals(k) = f(es.eigenvalues()(k));
  return hermitian_part(es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint());
}

MatrixC principal_unitary_log(const MatrixC& z, std::optional<double> tol) {
  require_square(z, "principal_unitary_log");
  const double limit = tol.value_or(default_tol(z.rows()));
  const double defect = unitarity_defect(z);
  if (defect > limit) {
    std::ostringstream os;
    os << "principal_unitary_log: Z is not unitary (||Z*Z - 1|| = " << defect << ")";
    throw ToleranceError(os.str());
  }
  Eigen::ComplexSchur<MatrixC> schur(z);
  const VectorC vals = schur.matrixT().diagonal();
  VectorC angles(z.rows());
  for (Index k = 0; k < z.rows(); ++k) {
    if (std::abs(vals(k) + 1.0) <= limit) {
      std::ostringstream os;
      os << "principal_unitary_log: eigenvalue " << vals(k) << " within " << limit
         << " of the branch point -1";
      throw DomainError(os.str());
    }
    angles(k) = std::arg(vals(k)) / std::numbers::pi;
  }
  const MatrixC& u = schur.matrixU();
  return hermitian_part(u * angles.asDiagonal() * u.adjoint());
}

PolarParts polar_decomposition(const MatrixC& a) {
  require_square(a, "polar_decomposition");
  Eigen::JacobiSVD<MatrixC> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  PolarParts out;
  out.isometry = svd.matrixU() * svd.matrixV().adjoint();
  out.positive = hermitian_part(svd.matrixV() * s.cast<cplx>().asDiagonal() * svd.matrixV().adjoint());
  const double smax = s.size() ? s(0) : 0.0;
  out.completed = s.size() == 0 || s(s.size() - 1) <= 1e-14 * std::max(1.0, smax);
  return out;
}

PolarParts polar_on_range(const MatrixC& a, const MatrixC& basis) {
  require_square(a, "polar_on_range");
  if (basis.rows() != a.rows()) throw DimensionError("polar_on_range: basis rows must match A");
  const MatrixC block = basis.adjoint() * a * basis;
  PolarParts local = polar_decomposition(block);
  local.isometry = basis * local.isometry * basis.adjoint();
  local.positive = basis * local.positive * basis.adjoint();
  return local;
}

}  // namespace matword
