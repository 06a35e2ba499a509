#include <gtest/gtest.h>

#include <algorithm>

#include "matword/clifford.hpp"
#include "matword/errors.hpp"
#include "matword/random.hpp"
#include "matword/words.hpp"
#include "oracles.hpp"

using namespace matword;

namespace {

NormalTuple commuting_pair(Index n, Rng& rng) {
  const MatrixC u = random_unitary(n, rng);
  VectorC a(n), b(n);
  for (Index i = 0; i < n; ++i) {
    a(i) = rng.uniform(-1, 1);
    b(i) = rng.uniform(-1, 1);
  }
  return NormalTuple(oracle::diagonal_in_basis(u, {a, b}));
}

WordSum commutator_word() {
  return {{1.0, WordSpec::power(0).then(WordSpec::power(1))}, {-1.0, WordSpec::power(1).then(WordSpec::power(0))}};
}

}  // namespace

TEST(EvalWord, ZeroExponentIsIdentity) {
  Rng rng(1);
  const std::vector<MatrixC> coeffs{identity(3)}, vars{random_complex(3, rng)};
  EXPECT_EQ(eval_word(WordSpec::power(0, 0), coeffs, vars), identity(3));
}

TEST(EvalWord, CubeMatchesRepeatedProduct) {
  Rng rng(2);
  const std::vector<MatrixC> coeffs{identity(4)}, vars{random_complex(4, rng)};
  EXPECT_LE(oracle::norm2(eval_word(WordSpec::power(0, 3), coeffs, vars) - oracle::power(vars[0], 3)), 1e-13);
}

TEST(EvalWord, MixedWordMatchesFourFactorProduct) {
  Rng rng(3);
  const std::vector<MatrixC> coeffs{identity(2), random_complex(2, rng), random_complex(2, rng)};
  const std::vector<MatrixC> vars{random_complex(2, rng), random_complex(2, rng)};
  const WordSpec w{{1, 2}, {0, 1}, {1, 1}};
  const MatrixC want = oracle::product({coeffs[1], vars[0], coeffs[2], vars[1]});
  EXPECT_LE(oracle::norm2(eval_word(w, coeffs, vars) - want), 1e-14);
}

TEST(EvalWord, HighPowerMatchesNaive) {
  Rng rng(4);
  const std::vector<MatrixC> coeffs{identity(5)}, vars{0.3 * random_complex(5, rng)};
  EXPECT_LE(oracle::norm2(eval_word(WordSpec::power(0, 13), coeffs, vars) - oracle::power(vars[0], 13)), 1e-13);
}

TEST(EvalWord, AllTrivialFactorsGiveIdentity) {
  Rng rng(5);
  const std::vector<MatrixC> coeffs{identity(3)}, vars{random_complex(3, rng), random_complex(3, rng)};
  const WordSpec w{{0, 0, 0}, {0, 1, 0}, {0, 0, 0}};
  EXPECT_EQ(eval_word(w, coeffs, vars), identity(3));
}

TEST(EvalWord, Errors) {
  const std::vector<MatrixC> ok{identity(2)}, vars{identity(2)};
  EXPECT_THROW(eval_word(WordSpec::power(3), ok, vars), DimensionError);
  EXPECT_THROW(eval_word(WordSpec::power(0), ok, std::vector<MatrixC>{identity(3)}), DimensionError);
  EXPECT_THROW(eval_word(WordSpec::power(0), std::vector<MatrixC>{2.0 * identity(2)}, vars), DomainError);
}

TEST(WordFunction, IdentityFunction) {
  Rng rng(6);
  const NormalTuple x = commuting_pair(4, rng);
  const WordFunction f{2, {{{1.0, WordSpec::power(0)}}}, {}};
  EXPECT_EQ(eval_word_function(f, x).front(), x[0]);
}

TEST(WordFunction, AdjointVariablesOnNormalInput) {
  Rng rng(7);
  const MatrixC u = random_unitary(5, rng);
  VectorC d(5);
  for (Index i = 0; i < 5; ++i) d(i) = rng.complex_normal();
  const NormalTuple x({u * d.asDiagonal() * u.adjoint()});
  const WordFunction f{1, {{{1.0, WordSpec::power(0).then(WordSpec::power(1))}}}, {}};
  EXPECT_LE(oracle::norm2(eval_word_function(f, x)[0] - x[0].adjoint() * x[0]), 1e-10);
}

TEST(WordFunction, CommutatorVanishesOnCommutingPair) {
  Rng rng(8);
  const WordFunction f{2, {commutator_word()}, {}};
  EXPECT_LE(oracle::norm2(eval_word_function(f, commuting_pair(6, rng))[0]), 1e-12);
}

TEST(WordFunction, LinearInCoefficients) {
  Rng rng(9);
  const NormalTuple x({random_complex(4, rng), random_complex(4, rng)});
  WordSum s{{cplx(0.5, -1.0), WordSpec::power(0, 2)}, {cplx(2.0, 0.0), WordSpec::power(1).then(WordSpec::power(2))}};
  WordSum s2 = s;
  for (auto& t : s2) t.alpha *= 2.0;
  const auto a = eval_word_function(WordFunction{2, {s}, {}}, x)[0];
  const auto b = eval_word_function(WordFunction{2, {s2}, {}}, x)[0];
  EXPECT_LE(oracle::norm2(b - 2.0 * a), 1e-14 * oracle::norm2(a));
}

TEST(WordFunction, ArityMismatchThrows) {
  const WordFunction f{2, {{{1.0, WordSpec::power(0)}}}, {}};
  EXPECT_THROW(eval_word_function(f, NormalTuple({identity(2)})), DimensionError);
}

TEST(Membership, ZNExampleWithDiagonalInput) {
  const Index n = 5;
  VectorC nd(n), xd(n);
  for (Index i = 0; i < n; ++i) {
    nd(i) = static_cast<double>(n - i);
    xd(i) = 0.1 * static_cast<double>(i);
  }
  // [N, x] = N x - x N with N as coefficient slot 1
  NCPolySystem sys;
  sys.num_vars = 1;
  sys.coefficients = {identity(n), nd.asDiagonal()};
  sys.polys = {{{1.0, WordSpec{{1}, {0}, {1}}}, {-1.0, WordSpec{{0, 1}, {0, 0}, {1, 0}}}}};
  sys.eps = 0.0;
  const auto r = variety_membership(NormalTuple({xd.asDiagonal()}), sys);
  EXPECT_TRUE(r.member);
  EXPECT_EQ(r.residuals.front(), 0.0);
}

TEST(Membership, CommutingPairIsMember) {
  Rng rng(10);
  NCPolySystem sys{2, {commutator_word()}, 1e-6, {}};
  EXPECT_TRUE(variety_membership(commuting_pair(6, rng), sys).member);
}

TEST(Membership, NonCommutingPairResidual) {
  MatrixC x(2, 2), y(2, 2);
  x << 0.5, 0, 0, 0;
  y << 0, 0.5, 0.5, 0;
  // [X, Y] = [[0, 0.25], [-0.25, 0]], norm 0.25; scale Y to reach 0.5
  y *= 2.0;
  NCPolySystem sys{2, {commutator_word()}, 0.1, {}};
  const auto r = variety_membership(NormalTuple({x, y}), sys);
  EXPECT_FALSE(r.member);
  EXPECT_NEAR(r.residuals.front(), 0.5, 1e-15);
}

TEST(Membership, MonotoneInEps) {
  Rng rng(11);
  const NormalTuple x({random_hermitian(4, rng), random_hermitian(4, rng)});
  for (double eps : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0}) {
    const bool at = variety_membership(x, NCPolySystem{2, {commutator_word()}, eps, {}}).member;
    for (double bigger : {eps, eps * 1.5, eps * 10})
      if (at) EXPECT_TRUE(variety_membership(x, NCPolySystem{2, {commutator_word()}, bigger, {}}).member);
  }
}

TEST(Controllability, EqualTuplesGiveZero) {
  Rng rng(12);
  const NormalTuple x = commuting_pair(4, rng);
  const WordFunction f{2, {{{1.0, WordSpec::power(0)}}, {{1.0, WordSpec::power(1)}}}, {}};
  EXPECT_EQ(controllability_ratio(f, TupleMap{TupleMap::Kind::standard_dilation, random_unitary(4, rng)}, x, x), 0.0);
}

TEST(Controllability, IdentityUnderStandardDilationIsOne) {
  Rng rng(13);
  const WordFunction f{2, {{{1.0, WordSpec::power(0)}}, {{1.0, WordSpec::power(1)}}}, {}};
  for (int t = 0; t < 10; ++t) {
    const NormalTuple x = commuting_pair(4, rng), y = commuting_pair(4, rng);
    const TupleMap phi{TupleMap::Kind::standard_dilation, random_unitary(4, rng)};
    EXPECT_NEAR(controllability_ratio(f, phi, x, y), 1.0, 1e-8);
  }
}

TEST(Controllability, SquareUnderStandardDilationAtMostOne) {
  Rng rng(14);
  const WordFunction f{2, {{{1.0, WordSpec::power(0, 2)}}}, {}};
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const NormalTuple x = commuting_pair(4, rng), y = commuting_pair(4, rng);
    const TupleMap phi{TupleMap::Kind::standard_dilation, random_unitary(4, rng)};
    worst = std::max(worst, controllability_ratio(f, phi, x, y));
  }
  EXPECT_LE(worst, 1.0 + 1e-8);
}

TEST(Controllability, UndefinedRatioThrows) {
  // f(X) = C X with C = diag(1, 0) and Phi = Ad[swap]: f(X) != f(Y) but
  // f(Phi(X)) = f(Phi(Y)) = 0
  MatrixC c(2, 2), swap(2, 2), x(2, 2);
  c << 1, 0, 0, 0;
  swap << 0, 1, 1, 0;
  x << 1, 0, 0, 0;
  const WordFunction f{1, {{{1.0, WordSpec{{1}, {0}, {1}}}}}, {identity(2), c}};
  const TupleMap phi{TupleMap::Kind::conjugation, swap};
  EXPECT_THROW(controllability_ratio(f, phi, NormalTuple({x}), NormalTuple({MatrixC(MatrixC::Zero(2, 2))})),
               DomainError);
}

TEST(Controllability, StandardDilationConjugationInvariance) {
  Rng rng(15);
  for (int t = 0; t < 10; ++t) {
    const NormalTuple s({random_hermitian(3, rng), random_hermitian(3, rng)});
    const NormalTuple u({random_hermitian(3, rng), random_hermitian(3, rng)});
    const TupleMap phi{TupleMap::Kind::standard_dilation, random_unitary(3, rng)};
    const TupleMap plain{TupleMap::Kind::standard_dilation, identity(3)};
    EXPECT_NEAR(delta_metric(phi.apply(s), phi.apply(u)), delta_metric(plain.apply(s), plain.apply(u)), 1e-8);
  }
}
