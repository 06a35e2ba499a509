#pragma once

#include <cstdint>
#include <vector>

#include "matword/linalg.hpp"
#include "matword/pseudospectra.hpp"

namespace matword {

/// Complex polynomial c_0 + c_1 z + ... + c_d z^d (ascending coefficients).
struct PolyC {
  std::vector<cplx> coeffs;
  bool monic = false;

  PolyC() = default;
  explicit PolyC(std::vector<cplx> c, bool is_monic = false);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Horner evaluation.
  cplx operator()(cplx z) const;
  /// Monic polynomial with the given roots.
  static PolyC from_roots(const std::vector<cplx>& roots);
  PolyC derivative() const;
};

/// p(A) by Horner's rule.
MatrixC poly_eval_matrix(const PolyC& p, const MatrixC& a);

/// Roots as eigenvalues of the companion matrix, sorted by (re, im).
std::vector<cplx> poly_roots(const PolyC& p);

/// Eigenvalues of the Hessenberg matrix from k Arnoldi steps with full
/// reorthogonalisation, started from a seeded random unit vector. On
/// breakdown the Ritz values of the invariant subspace found so far are
/// returned. Sorted by (re, im).
std::vector<cplx> ritz_values(const MatrixC& a, int k, std::uint64_t seed = 0);

struct MinPolyResult {
  PolyC p;
  double residual = 0.0;      // ||p(A)||
  std::vector<cplx> ritz;     // the fitting set
  std::vector<double> sweep;  // residual of the fit at degree 1, 2, ...
};

/// Smallest degree d <= max_deg whose monic least-squares fit over the Ritz
/// values of A satisfies ||p(A)|| <= delta, else the lowest-residual fit.
/// Ritz values come from min(n, ritz_steps) Arnoldi steps.
MinPolyResult approx_min_poly(const MatrixC& a, double delta, int max_deg, std::uint64_t seed = 0,
                              int ritz_steps = 60);

/// |p(z)| at every node.
ScalarField2D lemniscate_field(const PolyC& p, const Grid2D& g, int threads = 1);

struct Polyline {
  std::vector<cplx> points;
  bool closed = false;
};

/// Marching squares over the grid cells (tensor cells or quadtree leaf
/// corners). Saddle cells are resolved by the cell-centre average.
std::vector<Polyline> lemniscate_contours(const ScalarField2D& field, double level);

}  // namespace matword
