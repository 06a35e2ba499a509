#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "matword/linalg.hpp"

namespace matword {

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max] in C.
struct Bounds {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;

  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

struct QuadCell {
  double x0, x1, y0, y1;
  int depth = 0;
  std::vector<Index> nodes;  // this leaf's Chebyshev nodes (corners included)
};

struct Grid2D {
  enum class Kind { tensor, quadtree };

  Kind kind = Kind::tensor;
  Bounds bounds;
  std::vector<cplx> nodes;

  // tensor: node(ix, iy) = nodes[iy * xs.size() + ix]
  std::vector<double> xs;
  std::vector<double> ys;

  // quadtree: the leaves partition the bounds; each carries a
  // leaf_order x leaf_order Chebyshev tensor grid.
  int leaf_order = 3;
  std::vector<QuadCell> leaves;

  std::size_t size() const { return nodes.size(); }
};

struct ScalarField2D {
  Grid2D grid;
  std::vector<double> values;
};

/// Second-kind Chebyshev points cos(k pi / (p - 1)) in ascending order,
/// mapped affinely onto [a, b]. Endpoints are exact and the midpoint of an
/// odd-length set is exactly (a + b) / 2.
std::vector<double> chebyshev_points(double a, double b, int p);

/// Tensor grid of p x q second-kind Chebyshev points. Throws DomainError
/// for p, q < 2 or a degenerate rectangle.
Grid2D chebyshev_grid(const Bounds& bounds, int p, int q);

/// Uniform quadtree of the given depth whose leaves carry
/// leaf_order x leaf_order Chebyshev points.
Grid2D quadtree_grid(const Bounds& bounds, int depth = 0, int leaf_order = 3);

/// Splits every leaf whose smallest field value is <= threshold into four,
/// provided its depth is below max_depth. One level per call. Throws
/// DomainError for tensor grids or a field that does not belong to g.
Grid2D refine_grid(const Grid2D& g, const ScalarField2D& field, double threshold, int max_depth);

/// Repeats evaluate/refine until nothing qualifies or max_depth is reached.
ScalarField2D refine_adaptively(const Grid2D& g,
                                const std::function<ScalarField2D(const Grid2D&)>& evaluate,
                                double threshold, int max_depth);

/// sigma_min(A - lambda) at every node. Uses one Schur form A = Q T Q* and
/// an inverse Lanczos iteration on the triangular factor per node, with a
/// dense SVD fallback when the iteration does not settle.
ScalarField2D sigma_min_field(const MatrixC& a, const Grid2D& g, int threads = 1);

/// sigma_min(A - lambda) by a full SVD; reference evaluation.
double sigma_min_at(const MatrixC& a, cplx lambda);

struct Pseudospectrum {
  ScalarField2D field;
  std::vector<char> mask;  // 1 where sigma_min <= eps
  double eps = 0.0;

  std::size_t count() const;
};

Pseudospectrum pseudospectrum(const MatrixC& a, double eps, const Grid2D& g, int threads = 1);

struct ScanTriple {
  cplx sigma;
  MatrixC u;  // k x n, adjoint of the left singular block
  MatrixC v;  // n x k, right singular block
  double residual = 0.0;  // ||U A V - sigma U V||
};

/// ||U A V - sigma U V||
double scan_residual(const MatrixC& a, cplx sigma, const MatrixC& u, const MatrixC& v);

/// One triple per point with sigma_min(A - sigma) <= eps, in input order.
std::vector<ScanTriple> scan_triples(const MatrixC& a, double eps, std::span<const cplx> points,
                                     int threads = 1);
/// Same, over the nodes of an already evaluated sigma_min field of A.
std::vector<ScanTriple> scan_triples(const MatrixC& a, double eps, const ScalarField2D& field,
                                     int threads = 1);

/// CSV with header re,im,value[,mask]. Values are printed with 17
/// significant digits.
void write_field_csv(std::ostream& os, const ScalarField2D& field,
                     const std::vector<char>* mask = nullptr);

}  // namespace matword
