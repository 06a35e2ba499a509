#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "matword/linalg.hpp"
#include "matword/minpoly.hpp"

namespace matword {

inline constexpr int kDefaultSamples = 65;

enum class PathKind { curved, flat, flat_functional, concat };

const char* to_string(PathKind kind);

/// Sampled map [0, 1] -> M_n. times[0] = 0, times.back() = 1, strictly
/// increasing; samples[i] is the value at times[i].
struct MatrixPath {
  PathKind kind = PathKind::flat;
  std::vector<double> times;
  std::vector<MatrixC> samples;
  MatrixC generator;  // H of a curved path (empty otherwise)
  MatrixC start;      // endpoint data the path was built from
  MatrixC end;

  Index dim() const { return samples.empty() ? 0 : samples.front().rows(); }
  std::size_t size() const { return samples.size(); }
  const MatrixC& front() const { return samples.front(); }
  const MatrixC& back() const { return samples.back(); }
};

/// Sample count of each half when a path of `total` samples is assembled
/// by concatenating two equal halves.
inline int half_samples(int total) { return (total - 1) / 2 + 1; }

/// t -> e^{pi i t H} D e^{-pi i t H}. Throws ToleranceError when H is not
/// hermitian or not a contraction within tol (default 1e-8 * n).
MatrixPath curved_path(const MatrixC& h, const MatrixC& d, int n_samples = kDefaultSamples,
                       std::optional<double> tol = std::nullopt);

/// t -> (1 - t) X + t Y
MatrixPath flat_path(const MatrixC& x, const MatrixC& y, int n_samples = kDefaultSamples);

/// t -> f(t H3 + (1 - t) H2) through the spectral theorem. Throws
/// ToleranceError when H2 or H3 is not a hermitian contraction within tol.
MatrixPath flat_functional_path(const std::function<double(double)>& f, const MatrixC& h2,
                                const MatrixC& h3, int n_samples = kDefaultSamples,
                                std::optional<double> tol = std::nullopt);

MatrixPath constant_path(const MatrixC& x, int n_samples = kDefaultSamples);

/// P on [0, 1/2], Q on [1/2, 1]; the junction sample is kept once. Throws
/// DomainError when ||P(1) - Q(0)|| > tol (default 1e-8 * n).
MatrixPath concat(const MatrixPath& p, const MatrixPath& q, std::optional<double> tol = std::nullopt);

/// sum_i ||M_{i+1} - M_i||
double path_length(const MatrixPath& p);

/// ||[M_t, partner]||
struct CommutesWith {
  MatrixC partner;
  double bound = 0.0;
};
/// ||[M_t, Q_t]|| for a path on the same sample times.
struct CommutesWithPath {
  MatrixPath other;
  double bound = 0.0;
};
/// ||p(M_t)||
struct PolynomialZero {
  PolyC p;
  double bound = 0.0;
};
/// ||M_t M_t* - M_t* M_t||
struct Normality {
  double bound = 0.0;
};
/// ||M_t - target||
struct DistanceTo {
  MatrixC target;
  double bound = 0.0;
};

using PathConstraint = std::variant<CommutesWith, CommutesWithPath, PolynomialZero, Normality, DistanceTo>;

struct ConstraintCheck {
  std::string name;
  double max_residual = 0.0;
  double argmax_t = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct PathReport {
  std::vector<ConstraintCheck> checks;
  bool pass = true;
};

/// Maximum of each constraint residual over the samples; report only.
PathReport verify_path(const MatrixPath& p, std::span<const PathConstraint> constraints);

}  // namespace matword
