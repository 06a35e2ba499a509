#include "matword/pseudospectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "matword/errors.hpp"
#include "matword/parallel.hpp"
#include "matword/random.hpp"

namespace matword {

namespace {

void check_bounds(const Bounds& b) {
  if (!(b.re_max > b.re_min) || !(b.im_max > b.im_min) || !std::isfinite(b.re_min) ||
      !std::isfinite(b.re_max) || !std::isfinite(b.im_min) || !std::isfinite(b.im_max))
    throw DomainError("grid: degenerate or non-finite rectangle");
}

class NodeIndex {
 public:
  explicit NodeIndex(std::vector<cplx>& nodes) : nodes_(nodes) {}

  Index get(double x, double y) {
    const auto key = std::make_pair(x, y);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<Index>(nodes_.size());
    nodes_.emplace_back(x, y);
    ids_.emplace(key, id);
    return id;
  }

 private:
  std::vector<cplx>& nodes_;
  std::map<std::pair<double, double>, Index> ids_;
};

// Leaves keep their order; node ids follow first appearance over leaves.
void rebuild_nodes(Grid2D& g) {
  g.nodes.clear();
  NodeIndex index(g.nodes);
  for (auto& leaf : g.leaves) {
    leaf.nodes.clear();
    const auto xs = chebyshev_points(leaf.x0, leaf.x1, g.leaf_order);
    const auto ys = chebyshev_points(leaf.y0, leaf.y1, g.leaf_order);
    for (double y : ys)
      for (double x : xs) leaf.nodes.push_back(index.get(x, y));
  }
}

std::vector<QuadCell> split(const QuadCell& c) {
  const double xm = 0.5 * (c.x0 + c.x1);
  const double ym = 0.5 * (c.y0 + c.y1);
  const int d = c.depth + 1;
  return {QuadCell{c.x0, xm, c.y0, ym, d, {}}, QuadCell{xm, c.x1, c.y0, ym, d, {}},
          QuadCell{c.x0, xm, ym, c.y1, d, {}}, QuadCell{xm, c.x1, ym, c.y1, d, {}}};
}

// Largest eigenvalue of (R R*)^{-1} = R^{-*} R^{-1}, R upper triangular, by
// Lanczos with full reorthogonalisation. Stops once the Ritz residual is
// below 1e-12 theta, which bounds the relative error of sigma_min by about
// 5e-13. Returns NaN when the iteration does not settle.
double inverse_lanczos_sigma(const MatrixC& r, const VectorC& start) {
  const Index n = r.rows();
  const Index max_steps = std::min<Index>(n, 64);
  MatrixC q(n, max_steps);
  std::vector<double> alpha, beta;
  VectorC v = start.normalized();
  const auto upper = r.triangularView<Eigen::Upper>();
  for (Index k = 0; k < max_steps; ++k) {
    q.col(k) = v;
    VectorC w = upper.solve(v);
    w = upper.adjoint().solve(w);
    if (!w.allFinite()) return std::numeric_limits<double>::quiet_NaN();
    alpha.push_back(v.dot(w).real());
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();

    const bool last = b == 0.0 || k + 1 == n || k + 1 == max_steps;
    if (k >= 2 && (k % 2 == 0 || last)) {
      const auto m = static_cast<Index>(alpha.size());
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = es.eigenvalues()(m - 1);
      const double tail = std::abs(es.eigenvectors()(m - 1, m - 1)) * b;
      if (!(theta > 0.0) || !std::isfinite(theta)) return std::numeric_limits<double>::quiet_NaN();
      if (b <= 1e-14 * theta || k + 1 == n || tail <= 1e-12 * theta) return 1.0 / std::sqrt(theta);
    } else if (b == 0.0) {
      break;
    }
    beta.push_back(b);
    v = w / b;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<double> chebyshev_points(double a, double b, int p) {
  if (p < 2) throw DomainError("chebyshev_points: need at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(p));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 0; k < p; ++k) {
    const int mirror = p - 1 - k;
    if (k == 0) out[0] = a;
    else if (k == p - 1) out[static_cast<std::size_t>(k)] = b;
    else if (2 * k == p - 1) out[static_cast<std::size_t>(k)] = mid;
    else {
      // symmetric about the midpoint by construction
      const double c = std::cos(std::numbers::pi * static_cast<double>(std::min(k, mirror)) /
                                static_cast<double>(p - 1));
      out[static_cast<std::size_t>(k)] = k < mirror ? mid - half * c : mid + half * c;
    }
  }
  return out;
}

Grid2D chebyshev_grid(const Bounds& bounds, int p, int q) {
  check_bounds(bounds);
  if (p < 2 || q < 2) throw DomainError("chebyshev_grid: p and q must be >= 2");
  Grid2D g;
  g.kind = Grid2D::Kind::tensor;
  g.bounds = bounds;
  g.xs = chebyshev_points(bounds.re_min, bounds.re_max, p);
  g.ys = chebyshev_points(bounds.im_min, bounds.im_max, q);
  g.nodes.reserve(g.xs.size() * g.ys.size());
  for (double y : g.ys)
    for (double x : g.xs) g.nodes.emplace_back(x, y);
  return g;
}

Grid2D quadtree_grid(const Bounds& bounds, int depth, int leaf_order) {
  check_bounds(bounds);
  if (depth < 0) throw DomainError("quadtree_grid: depth must be >= 0");
  if (leaf_order < 2) throw DomainError("quadtree_grid: leaf_order must be >= 2");
  Grid2D g;
  g.kind = Grid2D::Kind::quadtree;
  g.bounds = bounds;
  g.leaf_order = leaf_order;
  g.leaves.push_back(QuadCell{bounds.re_min, bounds.re_max, bounds.im_min, bounds.im_max, 0, {}});
  for (int level = 0; level < depth; ++level) {
    std::vector<QuadCell> next;
    for (const auto& c : g.leaves)
      for (auto& child : split(c)) next.push_back(std::move(child));
    g.leaves = std::move(next);
  }
  rebuild_nodes(g);
  return g;
}

Grid2D refine_grid(const Grid2D& g, const ScalarField2D& field, double threshold, int max_depth) {
  if (g.kind != Grid2D::Kind::quadtree) throw DomainError("refine_grid: grid is not a quadtree");
  if (field.values.size() != g.nodes.size()) throw DomainError("refine_grid: field does not match grid");
  Grid2D out;
  out.kind = Grid2D::Kind::quadtree;
  out.bounds = g.bounds;
  out.leaf_order = g.leaf_order;
  bool changed = false;
  for (const auto& leaf : g.leaves) {
    double lowest = std::numeric_limits<double>::infinity();
    for (Index id : leaf.nodes) lowest = std::min(lowest, field.values[static_cast<std::size_t>(id)]);
    if (lowest <= threshold && leaf.depth < max_depth) {
      for (auto& child : split(leaf)) out.leaves.push_back(std::move(child));
      changed = true;
    } else {
      out.leaves.push_back(QuadCell{leaf.x0, leaf.x1, leaf.y0, leaf.y1, leaf.depth, {}});
    }
  }
  if (!changed) return g;
  rebuild_nodes(out);
  return out;
}

ScalarField2D refine_adaptively(const Grid2D& g,
                                const std::function<ScalarField2D(const Grid2D&)>& evaluate,
                                double threshold, int max_depth) {
  ScalarField2D field = evaluate(g);
  for (;;) {
    Grid2D next = refine_grid(field.grid, field, threshold, max_depth);
    if (next.leaves.size() == field.grid.leaves.size()) return field;
    field = evaluate(next);
  }
}

double sigma_min_at(const MatrixC& a, cplx lambda) {
  MatrixC shifted = a;
  shifted.diagonal().array() -= lambda;
  return sigma_min(shifted);
}

ScalarField2D sigma_min_field(const MatrixC& a, const Grid2D& g, int threads) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("sigma_min_field: A must be square");
  const Index n = a.rows();
  ScalarField2D out;
  out.grid = g;
  out.values.assign(g.nodes.size(), 0.0);
  Eigen::ComplexSchur<MatrixC> schur(a);
  const MatrixC t = schur.matrixT().triangularView<Eigen::Upper>();
  Rng rng(0x5eed);
  const VectorC start = random_unit_vector(n, rng);
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());

  parallel_for(g.nodes.size(), threads, [&](std::size_t i) {
    const cplx lambda = g.nodes[i];
    MatrixC r = t;
    r.diagonal().array() -= lambda;
    double smallest_pivot = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) smallest_pivot = std::min(smallest_pivot, std::abs(r(k, k)));
    if (smallest_pivot == 0.0) {
      out.values[i] = 0.0;
      return;
    }
    double s = std::numeric_limits<double>::quiet_NaN();
    if (smallest_pivot > 1e-150 * scale) s = inverse_lanczos_sigma(r, start);
    if (!std::isfinite(s)) s = sigma_min(r);
    out.values[i] = s;
  });
  return out;
}

std::size_t Pseudospectrum::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), char{1}));
}

Pseudospectrum pseudospectrum(const MatrixC& a, double eps, const Grid2D& g, int threads) {
  if (!(eps > 0.0)) throw DomainError("pseudospectrum: eps must be > 0");
  Pseudospectrum out;
  out.eps = eps;
  out.field = sigma_min_field(a, g, threads);
  out.mask.resize(out.field.values.size());
  for (std::size_t i = 0; i < out.mask.size(); ++i) out.mask[i] = out.field.values[i] <= eps ? 1 : 0;
  return out;
}

double scan_residual(const MatrixC& a, cplx sigma, const MatrixC& u, const MatrixC& v) {
  const MatrixC uv = u * v;
  return op_norm(u * a * v - sigma * uv);
}

std::vector<ScanTriple> scan_triples(const MatrixC& a, double eps, std::span<const cplx> points,
                                     int threads) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("scan_triples: A must be square");
  Grid2D g;
  g.nodes.assign(points.begin(), points.end());
  return scan_triples(a, eps, sigma_min_field(a, g, threads), threads);
}

std::vector<ScanTriple> scan_triples(const MatrixC& a, double eps, const ScalarField2D& field, int threads) {
  if (!(eps > 0.0)) throw DomainError("scan_triples: eps must be > 0");
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("scan_triples: A must be square");
  if (field.values.size() != field.grid.nodes.size()) throw DomainError("scan_triples: field does not match grid");
  const Index n = a.rows();
  const auto& points = field.grid.nodes;

  std::vector<std::optional<ScanTriple>> slots(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    // The fast field only preselects; the SVD below decides.
    if (!(field.values[i] <= eps * (1.0 + 1e-6) + 1e-12)) return;
    MatrixC shifted = a;
    shifted.diagonal().array() -= points[i];
    Eigen::BDCSVD<MatrixC> svd(shifted, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Index k = 0;
    while (k < n && s(n - 1 - k) <= eps) ++k;
    if (k == 0) return;
    ScanTriple tr;
    tr.sigma = points[i];
    tr.v = svd.matrixV().rightCols(k);
    tr.u = svd.matrixU().rightCols(k).adjoint();
    tr.residual = scan_residual(a, tr.sigma, tr.u, tr.v);
    if (tr.residual <= eps) slots[i] = std::move(tr);
  });
  std::vector<ScanTriple> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

void write_field_csv(std::ostream& os, const ScalarField2D& field, const std::vector<char>* mask) {
  os << (mask ? "re,im,value,mask\n" : "re,im,value\n");
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    line.str("");
    line << field.grid.nodes[i].real() << ',' << field.grid.nodes[i].imag() << ',' << field.values[i];
    if (mask) line << ',' << static_cast<int>((*mask)[i]);
    os << line.str() << '\n';
  }
}

}  // namespace matword
