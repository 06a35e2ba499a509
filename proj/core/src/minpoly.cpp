#include "matword/minpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "matword/errors.hpp"
#include "matword/parallel.hpp"
#include "matword/random.hpp"

namespace matword {

namespace {

void sort_lex(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

// Monic least-squares fit of degree d over `points`, returned in z.
PolyC fit_monic(const std::vector<cplx>& points, int d) {
  const auto m = static_cast<Index>(points.size());
  cplx centre(0.0, 0.0);
  for (const auto& z : points) centre += z;
  centre /= static_cast<double>(m);
  double radius = 0.0;
  for (const auto& z : points) radius = std::max(radius, std::abs(z - centre));
  if (radius == 0.0) radius = 1.0;

  MatrixC vander(m, d);
  VectorC rhs(m);
  for (Index i = 0; i < m; ++i) {
    const cplx w = (points[static_cast<std::size_t>(i)] - centre) / radius;
    cplx pw(1.0, 0.0);
    for (int k = 0; k < d; ++k) {
      vander(i, k) = pw;
      pw *= w;
    }
    rhs(i) = -pw;
  }
  const VectorC b = vander.colPivHouseholderQr().solve(rhs);

  // p(z) = radius^d q((z - centre) / radius), expanded by Horner in z.
  std::vector<cplx> poly{cplx(1.0, 0.0)};
  for (int k = d - 1; k >= 0; --k) {
    std::vector<cplx> next(poly.size() + 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i] / radius;
      next[i] -= poly[i] * centre / radius;
    }
    next[0] += b(k);
    poly = std::move(next);
  }
  const double lead = std::pow(radius, d);
  for (auto& c : poly) c *= lead;
  poly.back() = cplx(1.0, 0.0);
  return PolyC(std::move(poly), true);
}

using EdgeKey = std::pair<Index, Index>;

EdgeKey edge_key(Index a, Index b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct Cell {
  Index c[4];  // bottom-left, bottom-right, top-right, top-left
};

std::vector<Cell> grid_cells(const Grid2D& g) {
  std::vector<Cell> cells;
  if (g.kind == Grid2D::Kind::tensor) {
    const auto nx = static_cast<Index>(g.xs.size());
    const auto ny = static_cast<Index>(g.ys.size());
    for (Index iy = 0; iy + 1 < ny; ++iy)
      for (Index ix = 0; ix + 1 < nx; ++ix)
        cells.push_back(Cell{{iy * nx + ix, iy * nx + ix + 1, (iy + 1) * nx + ix + 1, (iy + 1) * nx + ix}});
  } else {
    const Index l = g.leaf_order;
    for (const auto& leaf : g.leaves)
      for (Index iy = 0; iy + 1 < l; ++iy)
        for (Index ix = 0; ix + 1 < l; ++ix) {
          auto id = [&](Index x, Index y) { return leaf.nodes[static_cast<std::size_t>(y * l + x)]; };
          cells.push_back(Cell{{id(ix, iy), id(ix + 1, iy), id(ix + 1, iy + 1), id(ix, iy + 1)}});
        }
  }
  return cells;
}

}  // namespace

PolyC::PolyC(std::vector<cplx> c, bool is_monic) : coeffs(std::move(c)), monic(is_monic) {
  if (coeffs.empty()) throw DomainError("PolyC: no coefficients");
  for (const auto& x : coeffs)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw DomainError("PolyC: non-finite coefficient");
  if (monic && coeffs.back() != cplx(1.0, 0.0)) throw DomainError("PolyC: monic flag with leading coefficient != 1");
}

cplx PolyC::operator()(cplx z) const {
  cplx acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

PolyC PolyC::from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{cplx(1.0, 0.0)};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * r;
    }
    c = std::move(next);
  }
  return PolyC(std::move(c), true);
}

PolyC PolyC::derivative() const {
  if (coeffs.size() == 1) return PolyC({cplx(0.0, 0.0)});
  std::vector<cplx> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * static_cast<double>(i);
  return PolyC(std::move(d));
}

MatrixC poly_eval_matrix(const PolyC& p, const MatrixC& a) {
  if (a.rows() != a.cols()) throw DimensionError("poly_eval_matrix: A must be square");
  const Index n = a.rows();
  MatrixC acc = MatrixC::Zero(n, n);
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
    acc = acc * a;
    acc.diagonal().array() += *it;
  }
  return acc;
}

std::vector<cplx> poly_roots(const PolyC& p) {
  std::vector<cplx> c = p.coeffs;
  while (c.size() > 1 && c.back() == cplx(0.0, 0.0)) c.pop_back();
  const auto d = static_cast<Index>(c.size()) - 1;
  if (d <= 0) return {};
  MatrixC companion = MatrixC::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < d; ++i) companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<MatrixC> es(companion, false);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);
  sort_lex(roots);
  return roots;
}

std::vector<cplx> ritz_values(const MatrixC& a, int k, std::uint64_t seed) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("ritz_values: A must be square");
  const Index n = a.rows();
  if (k < 1 || k > n) {
    std::ostringstream os;
    os << "ritz_values: k = " << k << " outside [1, " << n << "]";
    throw DomainError(os.str());
  }
  Rng rng(seed);
  MatrixC q = MatrixC::Zero(n, k + 1);
  MatrixC h = MatrixC::Zero(k + 1, k);
  q.col(0) = random_unit_vector(n, rng);
  const double scale = a.norm();
  Index steps = k;
  for (Index j = 0; j < k; ++j) {
    VectorC w = a * q.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      const VectorC c = q.leftCols(j + 1).adjoint() * w;
      w -= q.leftCols(j + 1) * c;
      h.col(j).head(j + 1) += c;
    }
    const double beta = w.norm();
    if (beta <= 1e-12 * scale) {
      steps = j + 1;
      break;
    }
    h(j + 1, j) = beta;
    q.col(j + 1) = w / beta;
  }
  Eigen::ComplexEigenSolver<MatrixC> es(h.topLeftCorner(steps, steps), false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + steps);
  sort_lex(out);
  return out;
}

MinPolyResult approx_min_poly(const MatrixC& a, double delta, int max_deg, std::uint64_t seed,
                              int ritz_steps) {
  if (max_deg < 1) throw DomainError("approx_min_poly: max_deg must be >= 1");
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("approx_min_poly: A must be square");
  const auto n = static_cast<int>(a.rows());
  MinPolyResult out;
  out.ritz = ritz_values(a, std::min(n, std::max(1, ritz_steps)), seed);
  const int top = std::min(max_deg, static_cast<int>(out.ritz.size()));
  double best = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= top; ++d) {
    PolyC p = fit_monic(out.ritz, d);
    const double r = op_norm(poly_eval_matrix(p, a));
    out.sweep.push_back(r);
    if (r < best) {
      best = r;
      out.p = p;
      out.residual = r;
    }
    if (r <= delta) {
      out.p = std::move(p);
      out.residual = r;
      break;
    }
  }
  return out;
}

ScalarField2D lemniscate_field(const PolyC& p, const Grid2D& g, int threads) {
  ScalarField2D out;
  out.grid = g;
  out.values.assign(g.nodes.size(), 0.0);
  parallel_for(g.nodes.size(), threads, [&](std::size_t i) { out.values[i] = std::abs(p(g.nodes[i])); });
  return out;
}

std::vector<Polyline> lemniscate_contours(const ScalarField2D& field, double level) {
  if (!(level > 0.0)) throw DomainError("lemniscate_contours: level must be > 0");
  const auto& g = field.grid;
  if (field.values.size() != g.nodes.size()) throw DomainError("lemniscate_contours: field does not match grid");
  auto above = [&](Index id) { return field.values[static_cast<std::size_t>(id)] >= level; };

  std::map<EdgeKey, cplx> crossing;
  auto cross = [&](Index a, Index b) {
    const EdgeKey key = edge_key(a, b);
    if (!crossing.count(key)) {
      const double va = field.values[static_cast<std::size_t>(key.first)];
      const double vb = field.values[static_cast<std::size_t>(key.second)];
      const double t = (level - va) / (vb - va);
      const cplx za = g.nodes[static_cast<std::size_t>(key.first)];
      const cplx zb = g.nodes[static_cast<std::size_t>(key.second)];
      crossing.emplace(key, za + t * (zb - za));
    }
    return key;
  };

  std::vector<std::pair<EdgeKey, EdgeKey>> segments;
  for (const auto& cell : grid_cells(g)) {
    bool up[4];
    for (int k = 0; k < 4; ++k) up[k] = above(cell.c[k]);
    std::vector<int> edges;
    for (int e = 0; e < 4; ++e)
      if (up[e] != up[(e + 1) % 4]) edges.push_back(e);
    auto key_of = [&](int e) { return cross(cell.c[e], cell.c[(e + 1) % 4]); };
    if (edges.size() == 2) {
      segments.emplace_back(key_of(edges[0]), key_of(edges[1]));
    } else if (edges.size() == 4) {
      double centre = 0.0;
      for (int k = 0; k < 4; ++k) centre += field.values[static_cast<std::size_t>(cell.c[k])];
      const bool centre_up = centre / 4.0 >= level;
      if (centre_up == up[0]) {
        segments.emplace_back(key_of(0), key_of(1));
        segments.emplace_back(key_of(2), key_of(3));
      } else {
        segments.emplace_back(key_of(3), key_of(0));
        segments.emplace_back(key_of(1), key_of(2));
      }
    }
  }

  std::map<EdgeKey, std::vector<std::size_t>> at;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    at[segments[s].first].push_back(s);
    at[segments[s].second].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  auto walk = [&](std::size_t s, EdgeKey from) {
    std::vector<EdgeKey> keys{from};
    for (;;) {
      used[s] = 1;
      const EdgeKey next = segments[s].first == keys.back() ? segments[s].second : segments[s].first;
      keys.push_back(next);
      std::size_t follow = segments.size();
      for (std::size_t cand : at[next])
        if (!used[cand]) {
          follow = cand;
          break;
        }
      if (follow == segments.size()) break;
      s = follow;
    }
    Polyline line;
    line.closed = keys.size() > 2 && keys.front() == keys.back();
    if (line.closed) keys.pop_back();
    for (const auto& k : keys) line.points.push_back(crossing.at(k));
    return line;
  };

  std::vector<Polyline> out;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (const EdgeKey& end : {segments[s].first, segments[s].second})
      if (at[end].size() == 1 && !used[s]) out.push_back(walk(s, end));
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) out.push_back(walk(s, segments[s].first));
  return out;
}

}  // namespace matword
