#include "matword/words.hpp"

#include <algorithm>
#include <sstream>

#include "matword/approximants.hpp"
#include "matword/clifford.hpp"
#include "matword/errors.hpp"

namespace matword {

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kZeroDistance = 1e-13;

MatrixC matrix_power(const MatrixC& x, unsigned k) {
  MatrixC result = identity(x.rows());
  MatrixC base = x;
  bool first = true;
  while (k > 0) {
    if (k & 1u) {
      result = first ? base : MatrixC(result * base);
      first = false;
    }
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

bool has_identity(std::span<const MatrixC> coeffs) {
  for (const auto& c : coeffs) {
    if (c.rows() != c.cols()) continue;
    if ((c - identity(c.rows())).cwiseAbs().maxCoeff() <= kIdentityTol) return true;
  }
  return false;
}

std::vector<MatrixC> tuple_variables(const NormalTuple& x) {
  std::vector<MatrixC> vars = x.matrices();
  for (const auto& m : x.matrices()) vars.push_back(m.adjoint());
  return vars;
}

MatrixC eval_sum(const WordSum& sum, std::span<const MatrixC> coeffs,
                 std::span<const MatrixC> vars, Index n) {
  MatrixC out = MatrixC::Zero(n, n);
  for (const auto& term : sum) out += term.alpha * eval_word(term.word, coeffs, vars);
  return out;
}

std::vector<MatrixC> coefficient_set(const std::vector<MatrixC>& given, Index n) {
  if (given.empty()) return {identity(n)};
  return given;
}

}  // namespace

unsigned WordSpec::degree() const {
  unsigned d = 0;
  for (unsigned k : exponents) d = std::max(d, k);
  return d;
}

WordSpec WordSpec::power(std::size_t var, unsigned k) { return WordSpec{{0}, {var}, {k}}; }

WordSpec WordSpec::then(const WordSpec& rhs) const {
  WordSpec out = *this;
  out.coeff_indices.insert(out.coeff_indices.end(), rhs.coeff_indices.begin(), rhs.coeff_indices.end());
  out.var_indices.insert(out.var_indices.end(), rhs.var_indices.begin(), rhs.var_indices.end());
  out.exponents.insert(out.exponents.end(), rhs.exponents.begin(), rhs.exponents.end());
  return out;
}

MatrixC eval_word(const WordSpec& word, std::span<const MatrixC> coeffs,
                  std::span<const MatrixC> vars) {
  const std::size_t len = word.exponents.size();
  if (len == 0 || word.coeff_indices.size() != len || word.var_indices.size() != len)
    throw DimensionError("eval_word: word needs L >= 1 and three index lists of equal length");
  if (coeffs.empty() || vars.empty()) throw DimensionError("eval_word: empty coefficient or variable set");
  const Index n = coeffs.front().rows();
  for (const auto& c : coeffs)
    if (c.rows() != n || c.cols() != n) throw DimensionError("eval_word: coefficient dimension mismatch");
  for (const auto& v : vars)
    if (v.rows() != n || v.cols() != n) throw DimensionError("eval_word: variable dimension mismatch");
  if (!has_identity(coeffs)) throw DomainError("eval_word: coefficient set does not contain the identity");

  MatrixC out;
  for (std::size_t l = 0; l < len; ++l) {
    if (word.coeff_indices[l] >= coeffs.size() || word.var_indices[l] >= vars.size()) {
      std::ostringstream os;
      os << "eval_word: index out of range in factor " << l;
      throw DimensionError(os.str());
    }
    const MatrixC& c = coeffs[word.coeff_indices[l]];
    const MatrixC p = matrix_power(vars[word.var_indices[l]], word.exponents[l]);
    out = (l == 0) ? MatrixC(c * p) : MatrixC((out * c) * p);
  }
  return out;
}

std::vector<MatrixC> eval_word_function(const WordFunction& f, const NormalTuple& x) {
  if (f.arity != x.size()) {
    std::ostringstream os;
    os << "eval_word_function: arity " << f.arity << " does not match tuple size " << x.size();
    throw DimensionError(os.str());
  }
  const auto vars = tuple_variables(x);
  const auto coeffs = coefficient_set(f.coefficients, x.dim());
  std::vector<MatrixC> out;
  out.reserve(f.components.size());
  for (const auto& sum : f.components) out.push_back(eval_sum(sum, coeffs, vars, x.dim()));
  return out;
}

MembershipResult variety_membership(const NormalTuple& x, const NCPolySystem& system) {
  if (system.num_vars != x.size()) throw DimensionError("variety_membership: arity mismatch");
  const auto vars = tuple_variables(x);
  const auto coeffs = coefficient_set(system.coefficients, x.dim());
  MembershipResult out;
  out.member = true;
  for (const auto& p : system.polys) {
    const double r = op_norm(eval_sum(p, coeffs, vars, x.dim()));
    out.residuals.push_back(r);
    if (!(r <= system.eps)) out.member = false;
  }
  return out;
}

MatrixC TupleMap::apply(const MatrixC& x) const {
  switch (kind) {
    case Kind::conjugation:
      return adjoint_action(w, x);
    case Kind::standard_dilation: {
      const MatrixC u = dilation_unitary(w, DilationKind::standard);
      return u * embed_iota2(x) * u.adjoint();
    }
    case Kind::z2_dilation: {
      const MatrixC u = dilation_unitary(w, DilationKind::z2);
      return u * embed_iota2(x) * u.adjoint();
    }
  }
  throw DomainError("TupleMap: unknown kind");
}

MatrixC TupleMap::lift_coefficient(const MatrixC& c) const {
  return kind == Kind::conjugation ? c : embed_iota2(c);
}

NormalTuple TupleMap::apply(const NormalTuple& x) const {
  std::vector<MatrixC> out;
  out.reserve(x.size());
  for (const auto& m : x.matrices()) out.push_back(apply(m));
  return NormalTuple(std::move(out));
}

double controllability_ratio(const WordFunction& f, const TupleMap& phi, const NormalTuple& x,
                             const NormalTuple& y) {
  const auto fx = eval_word_function(f, x);
  const auto fy = eval_word_function(f, y);
  std::vector<MatrixC> phi_fx, phi_fy;
  for (const auto& m : fx) phi_fx.push_back(phi.apply(m));
  for (const auto& m : fy) phi_fy.push_back(phi.apply(m));
  const double numerator = delta_metric(phi_fx, phi_fy);

  WordFunction lifted = f;
  lifted.coefficients.clear();
  for (const auto& c : coefficient_set(f.coefficients, x.dim()))
    lifted.coefficients.push_back(phi.lift_coefficient(c));
  const auto fpx = eval_word_function(lifted, phi.apply(x));
  const auto fpy = eval_word_function(lifted, phi.apply(y));
  const double denominator = delta_metric(fpx, fpy);

  if (denominator <= kZeroDistance) {
    if (numerator <= kZeroDistance) return 0.0;
    std::ostringstream os;
    os << "controllability_ratio: undefined (numerator " << numerator << ", denominator "
       << denominator << ")";
    throw DomainError(os.str());
  }
  return numerator / denominator;
}

}  // namespace matword
