#include "matword/approximants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "matword/errors.hpp"

namespace matword {

namespace {

void require_unitary(const MatrixC& w, const char* what) {
  if (w.rows() != w.cols()) throw DimensionError(std::string(what) + ": W must be square");
  const double defect = unitarity_defect(w);
  if (defect > default_tol(w.rows())) {
    std::ostringstream os;
    os << what << ": W is not unitary (||W*W - 1|| = " << defect << ")";
    throw ToleranceError(os.str());
  }
}

// Kuhn's augmenting paths on the edges with cost <= limit.
bool has_perfect_matching(const Eigen::MatrixXd& cost, double limit) {
  const Index n = cost.rows();
  std::vector<Index> match_col(static_cast<std::size_t>(n), -1);
  std::vector<char> seen;
  std::function<bool(Index)> augment = [&](Index row) {
    for (Index c = 0; c < n; ++c) {
      if (cost(row, c) > limit || seen[static_cast<std::size_t>(c)]) continue;
      seen[static_cast<std::size_t>(c)] = 1;
      const Index other = match_col[static_cast<std::size_t>(c)];
      if (other < 0 || augment(other)) {
        match_col[static_cast<std::size_t>(c)] = row;
        return true;
      }
    }
    return false;
  };
  for (Index r = 0; r < n; ++r) {
    seen.assign(static_cast<std::size_t>(n), 0);
    if (!augment(r)) return false;
  }
  return true;
}

// Groups of indices whose joint vectors chain together at max-coordinate
// distance <= tol.
std::vector<Index> joint_cluster_labels(const std::vector<VectorC>& diags, double tol) {
  const Index n = diags.front().size();
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  Index next = 0;
  for (Index seed = 0; seed < n; ++seed) {
    if (label[static_cast<std::size_t>(seed)] >= 0) continue;
    std::vector<Index> stack{seed};
    label[static_cast<std::size_t>(seed)] = next;
    while (!stack.empty()) {
      const Index i = stack.back();
      stack.pop_back();
      for (Index k = 0; k < n; ++k) {
        if (label[static_cast<std::size_t>(k)] >= 0) continue;
        double d = 0.0;
        for (const auto& v : diags) d = std::max(d, std::abs(v(i) - v(k)));
        if (d <= tol) {
          label[static_cast<std::size_t>(k)] = next;
          stack.push_back(k);
        }
      }
    }
    ++next;
  }
  return label;
}

double tuple_scale(const NormalTuple& x) {
  double s = 1.0;
  for (const auto& m : x.matrices()) s = std::max(s, op_norm(m));
  return s;
}

}  // namespace

ProjectionFamily ProjectionFamily::from(std::vector<MatrixC> projections, std::optional<double> tol) {
  if (projections.empty()) throw DimensionError("ProjectionFamily: empty family");
  const Index n = projections.front().rows();
  const double limit = tol.value_or(default_tol(n));
  MatrixC sum = MatrixC::Zero(n, n);
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const auto& p = projections[j];
    if (p.rows() != n || p.cols() != n) throw DimensionError("ProjectionFamily: dimension mismatch");
    if (hermiticity_defect(p) > limit || op_norm(p * p - p) > limit)
      throw ToleranceError("ProjectionFamily: member is not a hermitian idempotent");
    for (std::size_t k = 0; k < j; ++k)
      if (op_norm(p * projections[k]) > limit)
        throw ToleranceError("ProjectionFamily: members are not pairwise orthogonal");
    sum += p;
  }
  ProjectionFamily out;
  out.completeness_residual = op_norm(sum - identity(n));
  out.projections = std::move(projections);
  return out;
}

ProjectionFamily refine_projections(const ProjectionFamily& p, const ProjectionFamily& q,
                                    std::optional<double> tol) {
  if (p.projections.empty() || q.projections.empty())
    throw DimensionError("refine_projections: empty family");
  const Index n = p.projections.front().rows();
  if (q.projections.front().rows() != n) throw DimensionError("refine_projections: dimension mismatch");
  const double limit = tol.value_or(default_tol(n));
  std::vector<MatrixC> out;
  for (const auto& pj : p.projections) {
    for (const auto& qk : q.projections) {
      const double c = op_norm(pj * qk - qk * pj);
      if (c > limit) {
        std::ostringstream os;
        os << "refine_projections: families do not commute (||[P_j, Q_k]|| = " << c << ")";
        throw ToleranceError(os.str());
      }
      MatrixC r = hermitian_part(pj * qk);
      if (op_norm(r) > limit) out.push_back(std::move(r));
    }
  }
  return ProjectionFamily::from(std::move(out), limit);
}

CommutingUnitary nearby_commuting_unitary(const MatrixC& w, const MatrixC& d,
                                          std::optional<double> cluster_tol) {
  require_unitary(w, "nearby_commuting_unitary");
  if (d.rows() != w.rows() || d.cols() != w.cols())
    throw DimensionError("nearby_commuting_unitary: W and D differ in size");
  const Index n = w.rows();
  const double ctol = cluster_tol.value_or(default_tol(n) * std::max(1.0, op_norm(d)));
  const SpectralDecomposition sd = spectral_decomposition(d, ctol);

  CommutingUnitary out;
  out.clusters = sd.size();
  MatrixC v = MatrixC::Zero(n, n);
  for (const auto& basis : sd.bases) {
    const PolarParts part = polar_on_range(w, basis);
    out.completed = out.completed || part.completed;
    v += part.isometry;
  }
  out.z = v.adjoint();
  if (out.clusters > 1) {
    out.gap = sd.min_gap();
    const auto r = static_cast<double>(out.clusters);
    out.constant = 3.0 * r * (r - 1.0) / out.gap;
  } else {
    out.gap = std::numeric_limits<double>::infinity();
    out.constant = 0.0;
  }
  out.commutator_residual = op_norm(out.z * d - d * out.z);
  out.distance = op_norm(identity(n) - w * out.z);
  out.defect = op_norm(w * d * w.adjoint() - d);
  return out;
}

std::vector<Index> solve_assignment(const Eigen::MatrixXd& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw DimensionError("solve_assignment: cost matrix must be square");
  if (n == 0) return {};
  // Potentials formulation, 1-based with a sentinel column 0.
  const double inf = std::numeric_limits<double>::infinity();
  const auto sz = static_cast<std::size_t>(n + 1);
  std::vector<double> u(sz, 0.0), v(sz, 0.0);
  std::vector<Index> p(sz, 0), way(sz, 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(sz, inf);
    std::vector<char> used(sz, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (used[js]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[js];
        if (cur < minv[js]) {
          minv[js] = cur;
          way[js] = j0;
        }
        if (minv[js] < delta) {
          delta = minv[js];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (used[js]) {
          u[static_cast<std::size_t>(p[js])] += delta;
          v[js] -= delta;
        } else {
          minv[js] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> result(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= n; ++j) result[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return result;
}

std::vector<Index> bottleneck_assignment(const Eigen::MatrixXd& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw DimensionError("bottleneck_assignment: cost matrix must be square");
  if (n == 0) return {};
  std::vector<double> levels(cost.data(), cost.data() + cost.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (has_perfect_matching(cost, levels[mid])) hi = mid;
    else lo = mid + 1;
  }
  const double limit = levels[lo];
  const double forbidden = (cost.cwiseAbs().sum() + 1.0) * 2.0;
  Eigen::MatrixXd restricted = cost;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (cost(i, j) > limit) restricted(i, j) = forbidden;
  return solve_assignment(restricted);
}

IsospectralApproximant IsospectralApproximant::adjoint() const {
  IsospectralApproximant out;
  out.w = w.adjoint();
  out.permutation.assign(permutation.size(), -1);
  for (std::size_t i = 0; i < permutation.size(); ++i)
    out.permutation[static_cast<std::size_t>(permutation[i])] = static_cast<Index>(i);
  out.matching_cost = matching_cost;
  return out;
}

IsospectralApproximant joint_isospectral_approximant(const NormalTuple& x, const NormalTuple& y,
                                                     double delta, std::optional<double> tol) {
  if (x.empty() || x.size() != y.size() || x.dim() != y.dim())
    throw DimensionError("joint_isospectral_approximant: tuples differ in arity or size");
  if (!(delta >= 0.0)) throw DomainError("joint_isospectral_approximant: delta must be >= 0");
  const Index n = x.dim();
  const std::size_t arity = x.size();
  const double limit = tol.value_or(default_tol(n));
  for (std::size_t j = 0; j < arity; ++j) {
    const double d = op_norm(x[j] - y[j]);
    if (d > delta + limit) {
      std::ostringstream os;
      os << "joint_isospectral_approximant: ||X_" << j + 1 << " - Y_" << j + 1 << "|| = " << d
         << " exceeds delta " << delta;
      throw ToleranceError(os.str());
    }
  }
  const JointDiagonalization jx = joint_diagonalize(x, limit);
  const JointDiagonalization jy = joint_diagonalize(y, limit);

  Eigen::MatrixXd cost(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      double c = 0.0;
      for (std::size_t j = 0; j < arity; ++j) c = std::max(c, std::abs(jx.diagonals[j](i) - jy.diagonals[j](k)));
      cost(i, k) = c;
    }
  IsospectralApproximant out;
  out.permutation = bottleneck_assignment(cost);
  for (Index i = 0; i < n; ++i)
    out.matching_cost = std::max(out.matching_cost, cost(i, out.permutation[static_cast<std::size_t>(i)]));
  const double max_cost = 3.0 * static_cast<double>(arity) * delta + limit;
  if (out.matching_cost > max_cost) {
    std::ostringstream os;
    os << "joint_isospectral_approximant: matching cost " << out.matching_cost << " exceeds "
       << max_cost;
    throw DomainError(os.str());
  }

  const double ctol_x = std::max(limit, default_tol(n) * tuple_scale(x));
  const double ctol_y = std::max(limit, default_tol(n) * tuple_scale(y));
  const auto lx = joint_cluster_labels(jx.diagonals, ctol_x);
  const auto ly = joint_cluster_labels(jy.diagonals, ctol_y);
  // Connected components of the bipartite graph joining the X cluster and
  // the Y cluster of every matched pair. When a component has a single X
  // cluster or a single Y cluster, Psi only has to carry the X subspace
  // onto the Y subspace, and the polar factor gives the closest such
  // unitary. Otherwise each matched (X cluster, Y cluster) block is aligned
  // on its own.
  const Index nx = *std::max_element(lx.begin(), lx.end()) + 1;
  const Index ny = *std::max_element(ly.begin(), ly.end()) + 1;
  std::vector<Index> parent(static_cast<std::size_t>(nx + ny));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::function<Index(Index)> find = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  for (Index i = 0; i < n; ++i) {
    const Index a = find(lx[static_cast<std::size_t>(i)]);
    const Index b = find(nx + ly[static_cast<std::size_t>(out.permutation[static_cast<std::size_t>(i)])]);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::map<Index, std::vector<Index>> components;
  for (Index i = 0; i < n; ++i) components[find(lx[static_cast<std::size_t>(i)])].push_back(i);

  auto align = [&](const std::vector<Index>& members) {
    const auto m = static_cast<Index>(members.size());
    MatrixC bs(n, m), bt(n, m);
    for (Index c = 0; c < m; ++c) {
      const Index i = members[static_cast<std::size_t>(c)];
      bs.col(c) = jx.unitary.col(i);
      bt.col(c) = jy.unitary.col(out.permutation[static_cast<std::size_t>(i)]);
    }
    const MatrixC aligned = bt * polar_decomposition(bt.adjoint() * bs).isometry;
    out.w += aligned * bs.adjoint();
  };

  out.w = MatrixC::Zero(n, n);
  for (const auto& [root, members] : components) {
    std::vector<Index> xs_seen, ys_seen;
    for (Index i : members) {
      xs_seen.push_back(lx[static_cast<std::size_t>(i)]);
      ys_seen.push_back(ly[static_cast<std::size_t>(out.permutation[static_cast<std::size_t>(i)])]);
    }
    std::sort(xs_seen.begin(), xs_seen.end());
    std::sort(ys_seen.begin(), ys_seen.end());
    const bool star = xs_seen.front() == xs_seen.back() || ys_seen.front() == ys_seen.back();
    if (star) {
      align(members);
      continue;
    }
    std::map<std::pair<Index, Index>, std::vector<Index>> blocks;
    for (Index i : members)
      blocks[{lx[static_cast<std::size_t>(i)], ly[static_cast<std::size_t>(out.permutation[static_cast<std::size_t>(i)])]}]
          .push_back(i);
    for (const auto& [key, block] : blocks) align(block);
  }

  for (std::size_t j = 0; j < arity; ++j) {
    const MatrixC image = out.apply(x[j]);
    out.distance_to_target = std::max(out.distance_to_target, op_norm(image - y[j]));
    out.distance_to_source = std::max(out.distance_to_source, op_norm(image - x[j]));
  }
  return out;
}

MatrixC nearby_generator(const NormalTuple& x, std::size_t j, double delta, std::optional<double> tol) {
  if (j >= x.size()) throw DimensionError("nearby_generator: index out of range");
  const Index n = x.dim();
  const double limit = tol.value_or(default_tol(n));
  const double h = delta / static_cast<double>(n);
  const double scale = tuple_scale(x);
  if (!(h > 1e-8 * scale)) {
    std::ostringstream os;
    os << "nearby_generator: delta " << delta << " too small to separate " << n << " eigenvalues";
    throw DomainError(os.str());
  }
  const JointDiagonalization jd = joint_diagonalize(x, limit);
  const VectorC& d = jd.diagonals[j];

  double min_gap = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) min_gap = std::min(min_gap, std::abs(d(a) - d(b)));
  if (min_gap >= h) return x[j];

  // Lattice offsets (a + ib) with |a + ib| <= n, nearest first, real ones
  // before complex ones at equal modulus.
  std::vector<std::pair<int, int>> offsets;
  const int radius = static_cast<int>(n);
  for (int a = -radius; a <= radius; ++a)
    for (int b = -radius; b <= radius; ++b)
      if (a * a + b * b <= radius * radius) offsets.emplace_back(a, b);
  std::sort(offsets.begin(), offsets.end(), [](const auto& l, const auto& r) {
    const int nl = l.first * l.first + l.second * l.second;
    const int nr = r.first * r.first + r.second * r.second;
    return std::make_tuple(nl, std::abs(l.second), l.first, l.second) <
           std::make_tuple(nr, std::abs(r.second), r.first, r.second);
  });

  VectorC assigned(n);
  for (Index i = 0; i < n; ++i) {
    bool placed = false;
    for (const auto& [a, b] : offsets) {
      const cplx cand = d(i) + h * cplx(a, b);
      if (std::abs(d(i)) <= 1.0 && std::abs(cand) > 1.0) continue;
      bool clear = true;
      for (Index k = 0; k < i && clear; ++k) clear = std::abs(cand - assigned(k)) >= h;
      if (clear) {
        assigned(i) = cand;
        placed = true;
        break;
      }
    }
    if (!placed) throw DomainError("nearby_generator: no separated lattice point within delta");
  }
  return jd.unitary * assigned.asDiagonal() * jd.unitary.adjoint();
}

MatrixC compress_kappa(const MatrixC& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw DimensionError("compress_kappa: expected an even-dimensional square matrix");
  const Index n = m.rows() / 2;
  return m.topLeftCorner(n, n);
}

MatrixC embed_iota2(const MatrixC& x) {
  if (x.rows() != x.cols()) throw DimensionError("embed_iota2: expected a square matrix");
  const Index n = x.rows();
  MatrixC out = MatrixC::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = x;
  out.bottomRightCorner(n, n) = x;
  return out;
}

MatrixC dilation_unitary(const MatrixC& w, DilationKind kind) {
  if (w.rows() != w.cols()) throw DimensionError("dilation_unitary: W must be square");
  const Index n = w.rows();
  MatrixC out = MatrixC::Zero(2 * n, 2 * n);
  if (kind == DilationKind::standard) {
    out.topLeftCorner(n, n) = w;
    out.bottomRightCorner(n, n) = w;
  } else {
    out.topLeftCorner(n, n) = w.adjoint();
    out.bottomRightCorner(n, n) = -w;
  }
  return out;
}

IsospectralApproximant dilate(const IsospectralApproximant& psi, DilationKind kind) {
  IsospectralApproximant out;
  out.w = dilation_unitary(psi.w, kind);
  out.matching_cost = psi.matching_cost;
  // The standard dilation acts slot-wise on both copies; the z2 dilation
  // mixes W and W*, so no single slot permutation describes it.
  if (kind == DilationKind::standard) {
    const auto n = static_cast<Index>(psi.permutation.size());
    out.permutation = psi.permutation;
    for (Index i = 0; i < n; ++i) out.permutation.push_back(psi.permutation[static_cast<std::size_t>(i)] + n);
  }
  return out;
}

}  // namespace matword
