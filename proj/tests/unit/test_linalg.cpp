#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "matword/errors.hpp"
#include "matword/linalg.hpp"
#include "matword/random.hpp"
#include "oracles.hpp"

using namespace matword;

namespace {

MatrixC diag(std::initializer_list<cplx> v) {
  VectorC d(static_cast<Index>(v.size()));
  Index i = 0;
  for (auto z : v) d(i++) = z;
  return d.asDiagonal();
}

const cplx I(0.0, 1.0);

}  // namespace

TEST(Commutator, SelfAndIdentityVanish) {
  Rng rng(1);
  const MatrixC a = random_complex(5, rng);
  EXPECT_EQ(commutator(a, a).norm(), 0.0);
  EXPECT_EQ(commutator(identity(5), a).norm(), 0.0);
}

TEST(Commutator, HandComputedTwoByTwo) {
  MatrixC e(2, 2);
  e << 0, 1, 0, 0;
  MatrixC expected(2, 2);
  expected << 0, -1, 0, 0;
  EXPECT_EQ(commutator(diag({1, 2}), e), expected);
}

TEST(Commutator, Antisymmetric) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const MatrixC a = random_complex(6, rng), b = random_complex(6, rng);
    EXPECT_LE((commutator(a, b) + commutator(b, a)).norm(), 1e-13);
  }
}

TEST(Commutator, DimensionMismatchThrows) {
  EXPECT_THROW(commutator(identity(2), identity(3)), DimensionError);
}

TEST(AdjointAction, Identities) {
  Rng rng(3);
  const MatrixC x = random_complex(4, rng);
  const MatrixC w = random_unitary(4, rng);
  EXPECT_LE((adjoint_action(identity(4), x) - x).norm(), 0.0);
  EXPECT_LE((adjoint_action(w, identity(4)) - identity(4)).norm(), 1e-14);
}

TEST(AdjointAction, SwapReversesDiagonal) {
  MatrixC swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_EQ(adjoint_action(swap, diag({3.0, -7.0})), diag({-7.0, 3.0}));
}

TEST(AdjointAction, RejectsNonUnitary) {
  EXPECT_THROW(adjoint_action(2.0 * identity(3), identity(3)), ToleranceError);
}

TEST(AdjointAction, PreservesNormAndSpectrum) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const MatrixC w = random_unitary(6, rng);
    const MatrixC x = random_complex(6, rng);
    const MatrixC y = adjoint_action(w, x);
    EXPECT_NEAR(oracle::norm2(y), oracle::norm2(x), 1e-10 * oracle::norm2(x));
    EXPECT_LE(oracle::spectrum_distance(x, y), 1e-10 * oracle::norm2(x));
  }
}

TEST(Cartesian, HermitianAndScalarCases) {
  Rng rng(5);
  const MatrixC h = random_hermitian(4, rng);
  auto p = cartesian_decomposition(h);
  EXPECT_LE((p.real - h).norm(), 1e-15);
  EXPECT_LE(p.imag.norm(), 1e-15);
  p = cartesian_decomposition(I * identity(3));
  EXPECT_LE(p.real.norm(), 0.0);
  EXPECT_LE((p.imag - identity(3)).norm(), 0.0);
}

TEST(Cartesian, Reconstructs) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const MatrixC a = random_complex(7, rng);
    const auto p = cartesian_decomposition(a);
    EXPECT_LE(oracle::norm2(a - (p.real + I * p.imag)), 1e-14);
    EXPECT_LE(hermiticity_defect(p.real), 0.0);
    EXPECT_LE(hermiticity_defect(p.imag), 0.0);
  }
}

TEST(SpectralDecomposition, ExactDegeneracy) {
  const auto sd = spectral_decomposition(diag({1, 1, -1}), 0.1);
  ASSERT_EQ(sd.size(), 2u);
  std::vector<int> ranks;
  for (const auto& p : sd.projections) ranks.push_back(static_cast<int>(std::lround(p.trace().real())));
  std::sort(ranks.begin(), ranks.end());
  EXPECT_EQ(ranks, (std::vector<int>{1, 2}));
}

TEST(SpectralDecomposition, MergesBelowTolerance) {
  EXPECT_EQ(spectral_decomposition(diag({0, 1e-9}), 1e-6).size(), 1u);
}

TEST(SpectralDecomposition, SeparatesAboveTolerance) {
  const auto sd = spectral_decomposition(diag({0, 0.5, 1}), 0.1);
  EXPECT_EQ(sd.size(), 3u);
  EXPECT_NEAR(sd.min_gap(), 0.5, 1e-15);
}

TEST(SpectralDecomposition, ResolutionAndReconstruction) {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const Index n = 12;
    const MatrixC u = random_unitary(n, rng);
    VectorC d(n);
    for (Index i = 0; i < n; ++i) d(i) = std::polar(0.9, 2.0 * std::numbers::pi * static_cast<double>(i % 4) / 4.0);
    const MatrixC x = u * d.asDiagonal() * u.adjoint();
    const auto sd = spectral_decomposition(x, 1e-6);
    ASSERT_EQ(sd.size(), 4u);
    MatrixC sum = MatrixC::Zero(n, n), recon = MatrixC::Zero(n, n);
    for (std::size_t k = 0; k < sd.size(); ++k) {
      sum += sd.projections[k];
      recon += sd.values[k] * sd.projections[k];
      EXPECT_LE(oracle::norm2(sd.projections[k] * sd.projections[k] - sd.projections[k]), 1e-10);
      for (std::size_t l = k + 1; l < sd.size(); ++l)
        EXPECT_LE(oracle::norm2(sd.projections[k] * sd.projections[l]), 1e-10);
    }
    EXPECT_LE(oracle::norm2(sum - identity(n)), 1e-10 * static_cast<double>(n));
    EXPECT_LE(oracle::norm2(recon - x), 1e-6);
  }
}

TEST(SpectralDecomposition, RejectsNonNormal) {
  MatrixC j(2, 2);
  j << 0, 1, 0, 0;
  EXPECT_THROW(spectral_decomposition(j, 0.1), ToleranceError);
}

TEST(SpectralDecomposition, ReportsAmbiguousClustering) {
  // gaps of 0.1 chained across a tolerance of 0.1: single linkage would
  // merge a cluster wider than the tolerance
  EXPECT_THROW(spectral_decomposition(diag({0, 0.1, 0.2}), 0.1), ClusteringError);
}

TEST(JointDiagonalize, AlreadyDiagonal) {
  const NormalTuple t({diag({1, 2, 3}), diag({-1, 0, 1})});
  const auto jd = joint_diagonalize(t, 1e-8);
  EXPECT_LE(jd.residual, 1e-14);
  for (std::size_t j = 0; j < 2; ++j)
    EXPECT_LE(oracle::norm2(jd.unitary * jd.diagonals[j].asDiagonal() * jd.unitary.adjoint() - t[j]), 1e-13);
}

TEST(JointDiagonalize, RecoversKnownDiagonalsUpToJointPermutation) {
  Rng rng(8);
  const Index n = 6;
  const MatrixC w = random_unitary(n, rng);
  VectorC d(n), e(n);
  d << 1, 1, 1, -1, -1, 0.5;
  e << 0.2, 0.4, 0.6, 0.2, 0.4, 0.6;
  const NormalTuple t(oracle::diagonal_in_basis(w, {d, e}));
  const auto jd = joint_diagonalize(t, 1e-8);
  EXPECT_LE(jd.residual, 1e-8 * n);
  std::vector<std::pair<double, double>> got, want;
  for (Index i = 0; i < n; ++i) {
    got.emplace_back(std::round(jd.diagonals[0](i).real() * 1e9) / 1e9, std::round(jd.diagonals[1](i).real() * 1e9) / 1e9);
    want.emplace_back(d(i).real(), e(i).real());
  }
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (Index i = 0; i < n; ++i) {
    EXPECT_NEAR(got[static_cast<std::size_t>(i)].first, want[static_cast<std::size_t>(i)].first, 1e-10);
    EXPECT_NEAR(got[static_cast<std::size_t>(i)].second, want[static_cast<std::size_t>(i)].second, 1e-10);
  }
  EXPECT_LE(unitarity_defect(jd.unitary), 1e-12);
}

TEST(JointDiagonalize, SingleMatrixIsEigendecomposition) {
  Rng rng(9);
  const MatrixC h = random_hermitian(8, rng);
  const auto jd = joint_diagonalize(NormalTuple({h}), 1e-8);
  EXPECT_LE(oracle::spectrum_distance(jd.diagonals[0].asDiagonal().toDenseMatrix(), h), 1e-12);
}

TEST(JointDiagonalize, ExactlyCommutingResidual) {
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const Index n = 16;
    const MatrixC u = random_unitary(n, rng);
    std::vector<VectorC> vals(3, VectorC(n));
    for (auto& v : vals)
      for (Index i = 0; i < n; ++i) v(i) = std::round(rng.uniform(-2, 2)) / 2.0;
    const NormalTuple tup(oracle::diagonal_in_basis(u, vals));
    EXPECT_LE(joint_diagonalize(tup, 1e-8 * n).residual, 1e-8 * n);
  }
}

TEST(JointDiagonalize, RejectsNonCommuting) {
  MatrixC a(2, 2), b(2, 2);
  a << 1, 0, 0, -1;
  b << 0, 1, 1, 0;
  EXPECT_THROW(joint_diagonalize(NormalTuple({a, b}), 1e-8), ToleranceError);
}

TEST(PrincipalLog, ScalarCases) {
  EXPECT_LE(principal_unitary_log(identity(3)).norm(), 1e-15);
  EXPECT_LE((principal_unitary_log(I * identity(3)) - 0.5 * identity(3)).norm(), 1e-14);
}

TEST(PrincipalLog, RecoversSmallGenerator) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const MatrixC h0 = random_hermitian(6, rng, 0.3);
    const MatrixC z = oracle::expm_taylor(I * std::numbers::pi * h0);
    EXPECT_LE(oracle::norm2(principal_unitary_log(z) - h0), 1e-10);
  }
}

TEST(PrincipalLog, RoundTripNearBranchCut) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Index n = 5;
    const MatrixC u = random_unitary(n, rng);
    VectorC phases(n);
    for (Index i = 0; i < n; ++i) phases(i) = std::exp(I * rng.uniform(-1.0, 1.0) * 2.0 * std::asin(0.95));
    const MatrixC z = u * phases.asDiagonal() * u.adjoint();
    ASSERT_LE(oracle::norm2(identity(n) - z), 1.9 + 1e-12);
    const MatrixC h = principal_unitary_log(z);
    EXPECT_LE(hermiticity_defect(h), 1e-12);
    EXPECT_LE(oracle::norm2(h), 1.0 + 1e-12);
    EXPECT_LE(oracle::norm2(oracle::expm_taylor(I * std::numbers::pi * h) - z), 1e-9);
  }
}

TEST(PrincipalLog, BranchCutThrows) {
  EXPECT_THROW(principal_unitary_log(diag({1, -1})), DomainError);
}

TEST(ExpIPi, MatchesTaylor) {
  Rng rng(13);
  const MatrixC h = random_hermitian(7, rng, 0.8);
  EXPECT_LE(oracle::norm2(exp_i_pi(h, 0.7) - oracle::expm_taylor(I * std::numbers::pi * 0.7 * h)), 1e-12);
}

TEST(Polar, UnitaryAndScalar) {
  Rng rng(14);
  const MatrixC w = random_unitary(4, rng);
  auto p = polar_decomposition(w);
  EXPECT_LE(oracle::norm2(p.isometry - w), 1e-12);
  EXPECT_LE(oracle::norm2(p.positive - identity(4)), 1e-12);
  p = polar_decomposition(2.0 * identity(3));
  EXPECT_LE(oracle::norm2(p.isometry - identity(3)), 1e-14);
  EXPECT_LE(oracle::norm2(p.positive - 2.0 * identity(3)), 1e-14);
}

TEST(Polar, RankDeficientDiagonal) {
  const auto p = polar_decomposition(diag({-3, 0}));
  EXPECT_NEAR(std::abs(p.isometry(0, 0) - cplx(-1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.isometry(1, 1)), 1.0, 1e-14);
  EXPECT_LE(oracle::norm2(p.positive - diag({3, 0})), 1e-14);
  EXPECT_TRUE(p.completed);
}

TEST(Polar, ReconstructsRandom) {
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const Index n = 6;
    const MatrixC a = random_complex(n, rng);
    const auto p = polar_decomposition(a);
    EXPECT_LE(oracle::norm2(p.isometry * p.positive - a), 1e-12 * n);
    EXPECT_LE(unitarity_defect(p.isometry), 1e-12);
    EXPECT_LE(hermiticity_defect(p.positive), 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixC> es(hermitian_part(p.positive));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(Polar, OnRangeOfCompression) {
  Rng rng(16);
  const Index n = 6;
  const MatrixC u = random_unitary(n, rng);
  const MatrixC basis = u.leftCols(2);
  const MatrixC a = random_complex(n, rng);
  const auto p = polar_on_range(a, basis);
  const MatrixC proj = basis * basis.adjoint();
  EXPECT_LE(oracle::norm2(p.isometry * p.positive - proj * a * proj), 1e-12 * n);
  EXPECT_LE(oracle::norm2(p.isometry.adjoint() * p.isometry - proj), 1e-12);
}
