#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "matword/errors.hpp"
#include "matword/pseudospectra.hpp"
#include "matword/random.hpp"
#include "oracles.hpp"

using namespace matword;

namespace {

MatrixC random_normal(Index n, Rng& rng, double radius) {
  const MatrixC u = random_unitary(n, rng);
  VectorC d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::polar(radius * std::sqrt(rng.uniform()), 2.0 * std::numbers::pi * rng.uniform());
  return u * d.asDiagonal() * u.adjoint();
}

ScalarField2D constant_field(const Grid2D& g, double v) { return {g, std::vector<double>(g.size(), v)}; }

}  // namespace

TEST(ChebyshevGrid, CornersOnly) {
  const auto g = chebyshev_grid({-1, 1, -1, 1}, 2, 2);
  ASSERT_EQ(g.size(), 4u);
  std::set<std::pair<double, double>> pts;
  for (auto z : g.nodes) pts.insert({z.real(), z.imag()});
  EXPECT_EQ(pts, (std::set<std::pair<double, double>>{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}}));
}

TEST(ChebyshevGrid, ThreePointsOnUnitInterval) {
  EXPECT_EQ(chebyshev_grid({-1, 1, -1, 1}, 3, 2).xs, (std::vector<double>{-1, 0, 1}));
}

TEST(ChebyshevGrid, AffineMap) {
  EXPECT_EQ(chebyshev_grid({0, 2, 0, 2}, 3, 3).xs, (std::vector<double>{0, 1, 2}));
}

TEST(ChebyshevGrid, PointsMatchCosineFormula) {
  const auto xs = chebyshev_points(-2.0, 3.0, 9);
  for (int k = 0; k < 9; ++k) {
    const double ref = 0.5 + 2.5 * -std::cos(k * std::numbers::pi / 8.0);
    EXPECT_NEAR(xs[static_cast<std::size_t>(k)], ref, 1e-15);
  }
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(xs[static_cast<std::size_t>(k)] - 0.5, 0.5 - xs[static_cast<std::size_t>(8 - k)], 1e-15);
}

TEST(ChebyshevGrid, RejectsBadInput) {
  EXPECT_THROW(chebyshev_grid({-1, 1, -1, 1}, 1, 3), DomainError);
  EXPECT_THROW(chebyshev_grid({1, 1, -1, 1}, 3, 3), DomainError);
}

TEST(Quadtree, LeavesPartitionBounds) {
  const Bounds b{0, 1, 0, 1};
  const auto g = quadtree_grid(b, 2, 3);
  ASSERT_EQ(g.leaves.size(), 16u);
  double area = 0.0;
  for (const auto& c : g.leaves) area += (c.x1 - c.x0) * (c.y1 - c.y0);
  EXPECT_NEAR(area, 1.0, 1e-15);
  EXPECT_EQ(g.size(), 81u);  // 9 x 9 shared Chebyshev-Lobatto nodes
  for (auto z : g.nodes) EXPECT_TRUE(b.contains(z));
}

TEST(RefineGrid, UnchangedWhenNothingQualifies) {
  const auto g = quadtree_grid({0, 1, 0, 1}, 1, 3);
  const auto r = refine_grid(g, constant_field(g, 1.0), 0.5, 5);
  EXPECT_EQ(r.leaves.size(), g.leaves.size());
  EXPECT_EQ(r.nodes, g.nodes);
}

TEST(RefineGrid, EverythingSplitsOnce) {
  const auto g = quadtree_grid({0, 1, 0, 1}, 0, 3);
  const auto r = refine_grid(g, constant_field(g, 0.0), 0.5, 1);
  EXPECT_EQ(r.leaves.size(), 4u);
  const auto again = refine_grid(r, constant_field(r, 0.0), 0.5, 1);
  EXPECT_EQ(again.leaves.size(), 4u);  // max_depth reached
}

TEST(RefineGrid, OnlyLowCornerSubtree) {
  const auto g = quadtree_grid({0, 1, 0, 1}, 1, 3);
  ScalarField2D f = constant_field(g, 1.0);
  // low value at the node (0, 0): only the lower-left leaf holds it
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.nodes[i] == cplx(0.0, 0.0)) f.values[i] = 0.0;
  const auto r = refine_grid(g, f, 0.5, 3);
  ASSERT_EQ(r.leaves.size(), 7u);
  for (const auto& c : r.leaves) {
    if (c.depth == 2) EXPECT_LE(c.x1, 0.5 + 1e-15);
    if (c.depth == 2) EXPECT_LE(c.y1, 0.5 + 1e-15);
  }
}

TEST(RefineGrid, TensorGridRejected) {
  const auto g = chebyshev_grid({0, 1, 0, 1}, 3, 3);
  EXPECT_THROW(refine_grid(g, constant_field(g, 0.0), 1.0, 2), DomainError);
}

TEST(RefineGrid, AdaptiveAroundEigenvalue) {
  MatrixC a = MatrixC::Zero(2, 2);
  a(0, 0) = cplx(0.3, 0.3);
  a(1, 1) = cplx(-0.6, -0.6);
  const auto f = refine_adaptively(
      quadtree_grid({-1, 1, -1, 1}, 1, 3), [&](const Grid2D& g) { return sigma_min_field(a, g); }, 0.3, 4);
  int deepest = 0;
  for (const auto& c : f.grid.leaves) deepest = std::max(deepest, c.depth);
  EXPECT_EQ(deepest, 4);
  for (const auto& c : f.grid.leaves)
    if (c.depth == 4) {  // split from a depth-3 parent holding a node within 0.3
      const double cx = 0.5 * (c.x0 + c.x1), cy = 0.5 * (c.y0 + c.y1);
      EXPECT_LE(std::min(std::abs(cplx(cx, cy) - a(0, 0)), std::abs(cplx(cx, cy) - a(1, 1))), 0.3 + 0.25 * std::sqrt(2.0));
    }
}

TEST(SigmaMin, Examples) {
  Rng rng(1);
  const MatrixC a = random_normal(6, rng, 1.0);
  for (auto lambda : oracle::eigenvalues(a)) EXPECT_LE(sigma_min_at(a, lambda), 1e-10);
  MatrixC d = MatrixC::Zero(2, 2);
  d(1, 1) = 2.0;
  EXPECT_NEAR(sigma_min_at(d, 1.0), 1.0, 1e-15);
  MatrixC j(2, 2);
  j << 0, 1, 0, 0;
  EXPECT_EQ(sigma_min_at(j, 0.0), 0.0);
}

TEST(SigmaMin, FieldMatchesIndependentSvd) {
  Rng rng(2);
  const Index n = 20;
  const MatrixC a = random_complex(n, rng) / std::sqrt(static_cast<double>(n));
  const auto g = chebyshev_grid({-1.5, 1.5, -1.5, 1.5}, 15, 15);
  const auto f = sigma_min_field(a, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ref = oracle::smin(a - g.nodes[i] * identity(n));
    EXPECT_NEAR(f.values[i], ref, 1e-10 * std::max(1.0, ref));
  }
}

TEST(SigmaMin, FieldOnNonNormalMatchesSvd) {
  const Index n = 12;
  MatrixC a = MatrixC::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;  // nilpotent Jordan block
  const auto g = chebyshev_grid({-1, 1, -1, 1}, 11, 11);
  const auto f = sigma_min_field(a, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ref = oracle::smin(a - g.nodes[i] * identity(n));
    EXPECT_NEAR(f.values[i], ref, 1e-9 + 1e-8 * ref);
  }
}

TEST(SigmaMin, ParallelIdenticalToSequential) {
  Rng rng(3);
  const MatrixC a = random_complex(15, rng);
  const auto g = chebyshev_grid({-3, 3, -3, 3}, 21, 21);
  EXPECT_EQ(sigma_min_field(a, g, 1).values, sigma_min_field(a, g, 4).values);
}

TEST(SigmaMin, OneLipschitzWithinCells) {
  Rng rng(4);
  const MatrixC a = random_complex(10, rng) / 3.0;
  const auto g = quadtree_grid({-2, 2, -2, 2}, 2, 4);
  const auto f = sigma_min_field(a, g);
  for (const auto& c : g.leaves)
    for (auto i : c.nodes)
      for (auto k : c.nodes) {
        const auto ii = static_cast<std::size_t>(i), kk = static_cast<std::size_t>(k);
        EXPECT_LE(std::abs(f.values[ii] - f.values[kk]), std::abs(g.nodes[ii] - g.nodes[kk]) + 1e-12);
      }
}

TEST(Pseudospectrum, NormalMaskIsUnionOfDisks) {
  Rng rng(5);
  const MatrixC a = random_normal(10, rng, 0.8);
  const auto ev = oracle::eigenvalues(a);
  const double eps = 0.15;
  const auto ps = pseudospectrum(a, eps, chebyshev_grid({-1, 1, -1, 1}, 41, 41));
  std::size_t compared = 0;
  for (std::size_t i = 0; i < ps.mask.size(); ++i) {
    const double dist = oracle::distance_to_set(ps.field.grid.nodes[i], ev);
    if (std::abs(dist - eps) <= 1e-9) continue;
    EXPECT_EQ(ps.mask[i] != 0, dist <= eps);
    ++compared;
  }
  EXPECT_GT(compared, 1600u);
  EXPECT_GT(ps.count(), 0u);
}

TEST(Pseudospectrum, EmptyBelowFieldMinimum) {
  Rng rng(6);
  const MatrixC a = random_normal(6, rng, 0.5) + 3.0 * identity(6);
  const auto ps = pseudospectrum(a, 0.1, chebyshev_grid({-1, 1, -1, 1}, 11, 11));
  EXPECT_EQ(ps.count(), 0u);
}

TEST(ScanTriples, ExactEigenpair) {
  MatrixC a = MatrixC::Zero(2, 2);
  a(1, 1) = 5.0;
  const std::vector<cplx> pts{0.0};
  const auto t = scan_triples(a, 0.1, pts);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].v.cols(), 1);
  EXPECT_EQ(t[0].u.rows(), 1);
  EXPECT_LE(t[0].residual, 1e-15);
}

TEST(ScanTriples, FarPointOmitted) {
  MatrixC a = MatrixC::Zero(2, 2);
  a(1, 1) = 5.0;
  const std::vector<cplx> pts{cplx(2.5, 0.0)};
  EXPECT_TRUE(scan_triples(a, 0.1, pts).empty());
}

TEST(ScanTriples, JordanBlockResidualIsSigmaMin) {
  MatrixC j(2, 2);
  j << 0, 1, 0, 0;
  const std::vector<cplx> pts{0.0};
  const auto t = scan_triples(j, 0.5, pts);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_NEAR(t[0].residual, oracle::smin(j), 1e-15);
  EXPECT_LE(t[0].residual, 0.5);
}

TEST(ScanTriples, ResidualsRecomputeIndependently) {
  Rng rng(7);
  const Index n = 12;
  const MatrixC a = random_complex(n, rng) / std::sqrt(static_cast<double>(n));
  const double eps = 0.2;
  const auto g = chebyshev_grid({-1.2, 1.2, -1.2, 1.2}, 25, 25);
  const auto ts = scan_triples(a, eps, g.nodes);
  ASSERT_FALSE(ts.empty());
  for (const auto& t : ts) {
    const MatrixC r = t.u * a * t.v - t.sigma * t.u * t.v;
    EXPECT_LE(oracle::norm2(r), eps);
    EXPECT_NEAR(oracle::norm2(r), t.residual, 1e-12);
    EXPECT_LE(oracle::norm2(t.v.adjoint() * t.v - identity(t.v.cols())), 1e-12);
    EXPECT_LE(oracle::norm2(t.u * t.u.adjoint() - identity(t.u.rows())), 1e-12);
  }
}

TEST(FieldCsv, HeaderAndRows) {
  const auto g = chebyshev_grid({0, 1, 0, 1}, 2, 2);
  ScalarField2D f{g, {0.5, 1, 2, 3}};
  std::vector<char> mask{1, 0, 0, 0};
  std::ostringstream os;
  write_field_csv(os, f, &mask);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "re,im,value,mask");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);
}

TEST(ScanTriples, PrecomputedFieldGivesSameTriples) {
  Rng rng(31);
  const MatrixC a = random_complex(12, rng) / std::sqrt(12.0);
  const auto g = chebyshev_grid({-1, 1, -1, 1}, 15, 15);
  const auto from_points = scan_triples(a, 0.2, g.nodes);
  const auto from_field = scan_triples(a, 0.2, sigma_min_field(a, g));
  ASSERT_EQ(from_points.size(), from_field.size());
  ASSERT_FALSE(from_points.empty());
  for (std::size_t i = 0; i < from_points.size(); ++i) {
    EXPECT_EQ(from_points[i].sigma, from_field[i].sigma);
    EXPECT_EQ(from_points[i].residual, from_field[i].residual);
  }
  ScalarField2D wrong;
  wrong.grid = g;
  EXPECT_THROW(scan_triples(a, 0.2, wrong), DomainError);
}
