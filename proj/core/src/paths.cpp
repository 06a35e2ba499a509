#include "matword/paths.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "matword/errors.hpp"

namespace matword {

namespace {

std::vector<double> sample_times(int n_samples) {
  if (n_samples < 2) throw DomainError("path: need at least 2 samples");
  std::vector<double> t(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n_samples - 1);
  t.back() = 1.0;
  return t;
}

void require_hermitian_contraction(const MatrixC& h, double tol, const char* what) {
  if (h.rows() != h.cols()) throw DimensionError(std::string(what) + ": expected a square matrix");
  const double herm = hermiticity_defect(h);
  if (herm > tol) {
    std::ostringstream os;
    os << what << ": matrix is not hermitian (||H - H*|| = " << herm << ")";
    throw ToleranceError(os.str());
  }
  const double norm = op_norm(h);
  if (norm > 1.0 + tol) {
    std::ostringstream os;
    os << what << ": spectrum leaves [-1, 1] (||H|| = " << norm << ")";
    throw ToleranceError(os.str());
  }
}

}  // namespace

const char* to_string(PathKind kind) {
  switch (kind) {
    case PathKind::curved: return "curved";
    case PathKind::flat: return "flat";
    case PathKind::flat_functional: return "flat_functional";
    case PathKind::concat: return "concat";
  }
  return "unknown";
}

MatrixPath curved_path(const MatrixC& h, const MatrixC& d, int n_samples, std::optional<double> tol) {
  if (d.rows() != h.rows() || d.cols() != h.cols()) throw DimensionError("curved_path: H and D differ in size");
  require_hermitian_contraction(h, tol.value_or(default_tol(h.rows())), "curved_path");
  MatrixPath p;
  p.kind = PathKind::curved;
  p.times = sample_times(n_samples);
  p.generator = hermitian_part(h);
  p.start = d;
  Eigen::SelfAdjointEigenSolver<MatrixC> es(p.generator);
  const MatrixC& v = es.eigenvectors();
  const MatrixC rotated = v.adjoint() * d * v;
  const Index n = h.rows();
  for (double t : p.times) {
    if (t == 0.0) {
      p.samples.push_back(d);
      continue;
    }
    VectorC phase(n);
    for (Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, std::numbers::pi * t * es.eigenvalues()(k));
    // (V e^{i pi t L} V*) D (V e^{-i pi t L} V*) = V (phase_k conj(phase_l) rotated_kl) V*
    MatrixC inner = rotated;
    for (Index l = 0; l < n; ++l)
      for (Index k = 0; k < n; ++k) inner(k, l) *= phase(k) * std::conj(phase(l));
    p.samples.push_back(v * inner * v.adjoint());
  }
  p.end = p.samples.back();
  return p;
}

MatrixPath flat_path(const MatrixC& x, const MatrixC& y, int n_samples) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("flat_path: X and Y differ in size");
  MatrixPath p;
  p.kind = PathKind::flat;
  p.times = sample_times(n_samples);
  p.start = x;
  p.end = y;
  for (double t : p.times) {
    if (t == 0.0) p.samples.push_back(x);
    else if (t == 1.0) p.samples.push_back(y);
    else p.samples.push_back((1.0 - t) * x + t * y);
  }
  return p;
}

MatrixPath flat_functional_path(const std::function<double(double)>& f, const MatrixC& h2,
                                const MatrixC& h3, int n_samples, std::optional<double> tol) {
  if (h2.rows() != h3.rows() || h2.cols() != h3.cols())
    throw DimensionError("flat_functional_path: H2 and H3 differ in size");
  const double limit = tol.value_or(default_tol(h2.rows()));
  require_hermitian_contraction(h2, limit, "flat_functional_path");
  require_hermitian_contraction(h3, limit, "flat_functional_path");
  MatrixPath p;
  p.kind = PathKind::flat_functional;
  p.times = sample_times(n_samples);
  p.start = h2;
  p.end = h3;
  for (double t : p.times) {
    const MatrixC mix = t == 0.0 ? h2 : (t == 1.0 ? h3 : MatrixC(t * h3 + (1.0 - t) * h2));
    p.samples.push_back(hermitian_function(mix, f));
  }
  return p;
}

MatrixPath constant_path(const MatrixC& x, int n_samples) {
  MatrixPath p;
  p.kind = PathKind::flat;
  p.times = sample_times(n_samples);
  p.start = x;
  p.end = x;
  p.samples.assign(p.times.size(), x);
  return p;
}

MatrixPath concat(const MatrixPath& p, const MatrixPath& q, std::optional<double> tol) {
  if (p.samples.empty() || q.samples.empty()) throw DomainError("concat: empty path");
  if (p.dim() != q.dim()) throw DimensionError("concat: paths differ in size");
  const double limit = tol.value_or(default_tol(p.dim()));
  const double gap = op_norm(p.back() - q.front());
  if (gap > limit) {
    std::ostringstream os;
    os << "concat: endpoint mismatch " << gap << " > " << limit;
    throw DomainError(os.str());
  }
  MatrixPath out;
  out.kind = PathKind::concat;
  out.start = p.front();
  out.end = q.back();
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.times.push_back(0.5 * p.times[i]);
    out.samples.push_back(p.samples[i]);
  }
  for (std::size_t i = 1; i < q.size(); ++i) {
    out.times.push_back(0.5 + 0.5 * q.times[i]);
    out.samples.push_back(q.samples[i]);
  }
  out.times.back() = 1.0;
  return out;
}

double path_length(const MatrixPath& p) {
  if (p.size() < 2) throw DomainError("path_length: need at least 2 samples");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += op_norm(p.samples[i + 1] - p.samples[i]);
  return total;
}

PathReport verify_path(const MatrixPath& p, std::span<const PathConstraint> constraints) {
  PathReport report;
  for (const auto& c : constraints) {
    ConstraintCheck check;
    auto residual = std::visit(
        [&](const auto& con) -> std::function<double(std::size_t)> {
          using T = std::decay_t<decltype(con)>;
          check.bound = con.bound;
          if constexpr (std::is_same_v<T, CommutesWith>) {
            check.name = "commutes_with";
            return [&](std::size_t i) { return op_norm(commutator(p.samples[i], con.partner)); };
          } else if constexpr (std::is_same_v<T, CommutesWithPath>) {
            check.name = "commutes_with_path";
            if (con.other.size() != p.size()) throw DimensionError("verify_path: paths have different sample counts");
            return [&](std::size_t i) { return op_norm(commutator(p.samples[i], con.other.samples[i])); };
          } else if constexpr (std::is_same_v<T, PolynomialZero>) {
            check.name = "polynomial_zero";
            return [&](std::size_t i) { return op_norm(poly_eval_matrix(con.p, p.samples[i])); };
          } else if constexpr (std::is_same_v<T, Normality>) {
            check.name = "normality";
            return [&](std::size_t i) { return normality_defect(p.samples[i]); };
          } else {
            check.name = "distance_to";
            return [&](std::size_t i) { return op_norm(p.samples[i] - con.target); };
          }
        },
        c);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double r = residual(i);
      if (i == 0 || r > check.max_residual) {
        check.max_residual = r;
        check.argmax_t = p.times[i];
      }
    }
    check.pass = check.max_residual <= check.bound;
    report.pass = report.pass && check.pass;
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace matword
