#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "matword/linalg.hpp"

namespace matword {

/// A mixed matrix word c_{j1} x_{j1}^{k1} ... c_{jL} x_{jL}^{kL}.
///
/// Factor l multiplies coefficient `coeff_indices[l]` and then variable
/// `var_indices[l]` raised to `exponents[l]`. In a word function over an
/// m-tuple, variables 0..m-1 are X_1..X_m and m..2m-1 are X_1*..X_m*.
struct WordSpec {
  std::vector<std::size_t> coeff_indices;
  std::vector<std::size_t> var_indices;
  std::vector<unsigned> exponents;

  std::size_t length() const { return exponents.size(); }
  /// max_l k_l
  unsigned degree() const;

  /// The single-factor word 1 * x_var^k (coefficient slot 0).
  static WordSpec power(std::size_t var, unsigned k = 1);
  /// Concatenation: this word followed by `rhs`.
  WordSpec then(const WordSpec& rhs) const;
};

/// Strict left-to-right product; powers by repeated squaring. Throws
/// DimensionError on bad indices or mismatched sizes, DomainError when no
/// coefficient equals the identity.
MatrixC eval_word(const WordSpec& word, std::span<const MatrixC> coeffs,
                  std::span<const MatrixC> vars);

struct WordTerm {
  cplx alpha;
  WordSpec word;
};
using WordSum = std::vector<WordTerm>;

/// F(X) = (f_1(X), ..., f_m(X)), each f_k a linear combination of words in
/// (X_1..X_m, X_1*..X_m*). An empty coefficient set means {1_n}.
struct WordFunction {
  std::size_t arity = 0;
  std::vector<WordSum> components;
  std::vector<MatrixC> coefficients;
};

std::vector<MatrixC> eval_word_function(const WordFunction& f, const NormalTuple& x);

/// J noncommutative polynomials over N variables with slack eps. Words may
/// reference adjoints as variables N..2N-1.
struct NCPolySystem {
  std::size_t num_vars = 0;
  std::vector<WordSum> polys;
  double eps = 0.0;
  std::vector<MatrixC> coefficients;
};

struct MembershipResult {
  bool member = false;
  std::vector<double> residuals;  // ||p_j(X)||
};

MembershipResult variety_membership(const NormalTuple& x, const NCPolySystem& system);

/// A linear map on tuples: unitary conjugation Ad[W] on M_n, or one of
/// its dilations to M_2n precomposed with the doubling embedding.
struct TupleMap {
  enum class Kind { conjugation, standard_dilation, z2_dilation };
  Kind kind = Kind::conjugation;
  MatrixC w;

  MatrixC apply(const MatrixC& x) const;
  /// How matrix coefficients are carried into the target algebra.
  MatrixC lift_coefficient(const MatrixC& c) const;
  NormalTuple apply(const NormalTuple& x) const;
};

/// Delta(Phi(f(X)), Phi(f(Y))) / Delta(f(Phi(X)), f(Phi(Y))). Returns 0 when
/// both distances vanish; throws DomainError when only the denominator does.
double controllability_ratio(const WordFunction& f, const TupleMap& phi, const NormalTuple& x,
                             const NormalTuple& y);

}  // namespace matword
