#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "matword/approximants.hpp"
#include "matword/errors.hpp"
#include "matword/random.hpp"
#include "oracles.hpp"

using namespace matword;

namespace {

MatrixC diag_real(std::vector<double> v) {
  VectorC d(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) d(static_cast<Index>(i)) = v[i];
  return d.asDiagonal();
}

MatrixC unitary_near(const MatrixC& w, double size, Rng& rng) {
  return w * exp_i_pi(random_hermitian(w.rows(), rng, size / std::numbers::pi));
}

}  // namespace

TEST(RefineProjections, TrivialAndIdempotent) {
  const auto p = ProjectionFamily::from({diag_real({1, 1, 0}), diag_real({0, 0, 1})});
  const auto one = ProjectionFamily::from({identity(3)});
  const auto r = refine_projections(p, one);
  ASSERT_EQ(r.projections.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_LE(oracle::norm2(r.projections[k] - p.projections[k]), 0.0);
  const auto s = refine_projections(p, p);
  ASSERT_EQ(s.projections.size(), 2u);
}

TEST(RefineProjections, DiagonalSplitsIntoRankOne) {
  const auto p = ProjectionFamily::from({diag_real({1, 1, 0, 0}), diag_real({0, 0, 1, 1})});
  const auto q = ProjectionFamily::from({diag_real({1, 0, 1, 0}), diag_real({0, 1, 0, 1})});
  const auto r = refine_projections(p, q);
  ASSERT_EQ(r.projections.size(), 4u);
  for (const auto& x : r.projections) EXPECT_NEAR(x.trace().real(), 1.0, 1e-15);
  EXPECT_LE(r.completeness_residual, 1e-15);
}

TEST(RefineProjections, SpanContainsInputs) {
  Rng rng(1);
  const Index n = 8;
  const MatrixC u = random_unitary(n, rng);
  auto block = [&](std::vector<int> mask) {
    VectorC d(n);
    for (Index i = 0; i < n; ++i) d(i) = mask[static_cast<std::size_t>(i)];
    return MatrixC(u * d.asDiagonal() * u.adjoint());
  };
  const auto p = ProjectionFamily::from({block({1, 1, 1, 0, 0, 0, 0, 0}), block({0, 0, 0, 1, 1, 1, 1, 1})});
  const auto q = ProjectionFamily::from(
      {block({1, 0, 0, 1, 0, 0, 0, 0}), block({0, 1, 1, 0, 1, 0, 0, 0}), block({0, 0, 0, 0, 0, 1, 1, 1})});
  const auto r = refine_projections(p, q);
  EXPECT_LE(r.projections.size(), 6u);
  for (const auto& target : {p.projections, q.projections})
    for (const auto& x : target) {
      MatrixC s = MatrixC::Zero(n, n);
      for (const auto& y : r.projections)
        if (oracle::norm2(x * y - y) <= 1e-10) s += y;
      EXPECT_LE(oracle::norm2(s - x), 1e-10);
    }
}

TEST(RefineProjections, NonCommutingRejected) {
  MatrixC h(2, 2);
  h << 0.5, 0.5, 0.5, 0.5;
  const auto p = ProjectionFamily::from({diag_real({1, 0}), diag_real({0, 1})});
  const auto q = ProjectionFamily::from({h, identity(2) - h});
  EXPECT_THROW(refine_projections(p, q), ToleranceError);
}

TEST(NearbyCommutingUnitary, CommutingWGivesAdjoint) {
  Rng rng(2);
  const MatrixC d = diag_real({1, 1, -1, -1});
  MatrixC w = MatrixC::Zero(4, 4);
  w.topLeftCorner(2, 2) = random_unitary(2, rng);
  w.bottomRightCorner(2, 2) = random_unitary(2, rng);
  const auto cu = nearby_commuting_unitary(w, d);
  EXPECT_LE(oracle::norm2(cu.z - w.adjoint()), 1e-12);
  EXPECT_LE(cu.distance, 1e-12);
}

TEST(NearbyCommutingUnitary, IdentityW) {
  const auto cu = nearby_commuting_unitary(identity(3), diag_real({0, 0.5, 1}));
  EXPECT_LE(oracle::norm2(cu.z - identity(3)), 1e-14);
}

TEST(NearbyCommutingUnitary, ConstantBoundOnRandomTrials) {
  Rng rng(3);
  const Index n = 8;
  const std::vector<double> levels{0.0, 0.5, 1.0, 1.5};
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v;
    for (Index i = 0; i < n; ++i) v.push_back(levels[static_cast<std::size_t>(i % 4)]);
    const MatrixC d = diag_real(v);
    MatrixC w0 = MatrixC::Zero(n, n);
    for (int k = 0; k < 4; ++k) {
      const MatrixC blk = random_unitary(2, rng);
      for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b) w0(k + 4 * a, k + 4 * b) = blk(a, b);
    }
    const MatrixC w = unitary_near(w0, rng.uniform(1e-4, 0.2), rng);
    const auto cu = nearby_commuting_unitary(w, d);
    EXPECT_EQ(cu.clusters, 4u);
    EXPECT_NEAR(cu.gap, 0.5, 1e-12);
    EXPECT_NEAR(cu.constant, 72.0, 1e-9);
    EXPECT_LE(oracle::norm2(commutator(cu.z, d)), 1e-9 * n);
    const double defect = oracle::norm2(w * d * w.adjoint() - d);
    EXPECT_LE(oracle::norm2(identity(n) - w * cu.z), cu.constant * defect + 64 * 2.2e-16 * n);
    EXPECT_LE(unitarity_defect(cu.z), 1e-12);
  }
}

TEST(NearbyCommutingUnitary, ZeroBlockIsCompleted) {
  // W swaps the two eigenspaces of D: both compressed blocks vanish
  MatrixC w(2, 2);
  w << 0, 1, 1, 0;
  const auto cu = nearby_commuting_unitary(w, diag_real({1, -1}));
  EXPECT_TRUE(cu.completed);
  EXPECT_LE(unitarity_defect(cu.z), 1e-14);
  EXPECT_LE(oracle::norm2(commutator(cu.z, diag_real({1, -1}))), 1e-14);
}

TEST(Assignment, MatchesBruteForce) {
  Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    const Index n = 1 + static_cast<Index>(t % 6);
    Eigen::MatrixXd c(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) c(i, j) = std::round(rng.uniform(0, 10));
    const auto ref = oracle::brute_force_assignment(c);
    const auto sum_perm = solve_assignment(c);
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += c(i, sum_perm[static_cast<std::size_t>(i)]);
    double best_sum = std::numeric_limits<double>::infinity();
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    do {
      double x = 0.0;
      for (Index i = 0; i < n; ++i) x += c(i, perm[static_cast<std::size_t>(i)]);
      best_sum = std::min(best_sum, x);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(s, best_sum);

    const auto b = bottleneck_assignment(c);
    double bb = 0.0, bs = 0.0;
    for (Index i = 0; i < n; ++i) {
      bb = std::max(bb, c(i, b[static_cast<std::size_t>(i)]));
      bs += c(i, b[static_cast<std::size_t>(i)]);
    }
    EXPECT_EQ(bb, ref.bottleneck);
    EXPECT_EQ(bs, ref.sum);
  }
}

TEST(JointIsospectral, EqualDiagonalTuplesGiveIdentity) {
  const NormalTuple x({diag_real({1, 0.5, -1}), diag_real({0, 0.2, 0.4})});
  const auto psi = joint_isospectral_approximant(x, x, 0.0);
  EXPECT_LE(oracle::norm2(psi.w - identity(3)), 1e-14);
  EXPECT_LE(psi.distance_to_target, 1e-14);
}

TEST(JointIsospectral, EqualDegenerateTuplesGiveIdentity) {
  Rng rng(5);
  const MatrixC u = random_unitary(6, rng);
  VectorC a(6), b(6);
  a << 1, 1, 1, -1, -1, -1;
  b << 0.5, 0.5, -0.5, 0.5, 0.5, -0.5;
  const NormalTuple x(oracle::diagonal_in_basis(u, {a, b}));
  const auto psi = joint_isospectral_approximant(x, x, 0.0);
  EXPECT_LE(oracle::norm2(psi.w - identity(6)), 1e-10);
}

TEST(JointIsospectral, RecoversKnownRotation) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const Index n = 6;
    const MatrixC u = random_unitary(n, rng);
    VectorC a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = rng.uniform(-1, 1);
      b(i) = rng.uniform(-1, 1);
    }
    const NormalTuple x(oracle::diagonal_in_basis(u, {a, b}));
    const MatrixC v = unitary_near(identity(n), 0.01, rng);
    const NormalTuple y({v * x[0] * v.adjoint(), v * x[1] * v.adjoint()});
    const double delta = std::max(oracle::norm2(x[0] - y[0]), oracle::norm2(x[1] - y[1]));
    const auto psi = joint_isospectral_approximant(x, y, delta);
    const double dv = oracle::norm2(identity(n) - v);
    EXPECT_LE(psi.distance_to_target, 1e-10);
    EXPECT_LE(psi.distance_to_source, 2.0 * dv + 1e-10);
    EXPECT_LE(unitarity_defect(psi.w), 1e-8 * n);
  }
}

TEST(JointIsospectral, PreservesSpectraAndCommutesWithTarget) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const Index n = 5;
    const double delta = 0.05;
    const MatrixC u = random_unitary(n, rng), u2 = random_unitary(n, rng);
    VectorC a(n), b(n), c(n), d(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = rng.uniform(-1, 1);
      b(i) = rng.uniform(-1, 1);
    }
    // Y shares X's eigenbasis up to a small rotation, joint eigenvalues
    // moved by at most delta / 2 per coordinate
    for (Index i = 0; i < n; ++i) {
      c(i) = a(i) + rng.uniform(-delta / 2, delta / 2);
      d(i) = b(i) + rng.uniform(-delta / 2, delta / 2);
    }
    (void)u2;
    const MatrixC v = unitary_near(u, 0.2 * delta / 2, rng);
    const NormalTuple x(oracle::diagonal_in_basis(u, {a, b}));
    const NormalTuple y(oracle::diagonal_in_basis(v, {c, d}));
    const double dist = std::max(oracle::norm2(x[0] - y[0]), oracle::norm2(x[1] - y[1]));
    const auto psi = joint_isospectral_approximant(x, y, dist);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_LE(oracle::spectrum_distance(psi.apply(x[j]), x[j]), 1e-12);
      EXPECT_LE(oracle::norm2(commutator(psi.apply(x[j]), y[j])), 1e-8 * n);
    }
    // matched within delta * N
    EXPECT_LE(psi.matching_cost, 2.0 * dist + 1e-12);
    // brute-force bottleneck over joint eigenvalues agrees
    Eigen::MatrixXd cost(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < n; ++k) cost(i, k) = std::max(std::abs(a(i) - c(k)), std::abs(b(i) - d(k)));
    EXPECT_NEAR(psi.matching_cost, oracle::brute_force_assignment(cost).bottleneck, 1e-10);
  }
}

TEST(JointIsospectral, FarTuplesRejected) {
  const NormalTuple x({diag_real({1, -1})}), y({diag_real({-1, -1})});
  EXPECT_THROW(joint_isospectral_approximant(x, y, 0.1), ToleranceError);
}

TEST(NearbyGenerator, DistinctSpectrumReturnsInput) {
  const NormalTuple x({diag_real({0.1, 0.5, 0.9})});
  EXPECT_EQ(nearby_generator(x, 0, 0.1), x[0]);
}

TEST(NearbyGenerator, ZeroMatrixSeparated) {
  const NormalTuple x({MatrixC(MatrixC::Zero(3, 3))});
  const MatrixC g = nearby_generator(x, 0, 0.1);
  const auto ev = oracle::eigenvalues(g);
  ASSERT_EQ(ev.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_LE(std::abs(ev[a]), 0.1 + 1e-15);
    for (std::size_t b = a + 1; b < 3; ++b) EXPECT_GE(std::abs(ev[a] - ev[b]), 0.1 / 3 - 1e-15);
  }
  EXPECT_LE(normality_defect(g), 1e-15);
}

TEST(NearbyGenerator, GeneratesWholeTupleByInterpolation) {
  Rng rng(8);
  const Index n = 6;
  const MatrixC u = random_unitary(n, rng);
  VectorC a(n), b(n);
  a << 1, 1, 1, -1, -1, -1;
  b << 0.3, -0.3, 0.3, 0.2, 0.2, 0.7;
  const NormalTuple x(oracle::diagonal_in_basis(u, {a, b}));
  const double delta = 0.05;
  const MatrixC g = nearby_generator(x, 0, delta);
  EXPECT_LE(oracle::norm2(g - x[0]), delta + 1e-12);
  EXPECT_LE(oracle::norm2(commutator(g, x[0])), 1e-8 * n);
  EXPECT_LE(oracle::norm2(commutator(g, x[1])), 1e-8 * n);
  // X_k = q_k(g) with q_k the Lagrange interpolant through g's eigenpairs
  Eigen::ComplexEigenSolver<MatrixC> es(g);
  const VectorC lam = es.eigenvalues();
  for (std::size_t k = 0; k < 2; ++k) {
    MatrixC q = MatrixC::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      const VectorC vi = es.eigenvectors().col(i).normalized();
      const cplx target = vi.dot(x[k] * vi);
      MatrixC li = identity(n);
      for (Index m = 0; m < n; ++m)
        if (m != i) li = li * (g - lam(m) * identity(n)) / (lam(i) - lam(m));
      q += target * li;
    }
    EXPECT_LE(oracle::norm2(q - x[k]), 1e-8);
  }
}

TEST(NearbyGenerator, TooSmallDeltaRejected) {
  const NormalTuple x({MatrixC(MatrixC::Zero(4, 4))});
  EXPECT_THROW(nearby_generator(x, 0, 1e-12), DomainError);
}

TEST(CompressionDilation, KappaIotaIdentities) {
  Rng rng(9);
  const MatrixC x = random_complex(4, rng);
  EXPECT_EQ(compress_kappa(embed_iota2(x)), x);
  EXPECT_EQ(compress_kappa(MatrixC::Zero(6, 6)), MatrixC::Zero(3, 3));
  EXPECT_EQ(embed_iota2(identity(3)), identity(6));
  EXPECT_NEAR(oracle::norm2(embed_iota2(x)), oracle::norm2(x), 1e-13);
  MatrixC m(4, 4);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16;
  MatrixC want(2, 2);
  want << 1, 2, 5, 6;
  EXPECT_EQ(compress_kappa(m), want);
  EXPECT_THROW(compress_kappa(MatrixC::Zero(3, 3)), DimensionError);
}

TEST(CompressionDilation, StandardOfIdentity) {
  EXPECT_EQ(dilation_unitary(identity(3), DilationKind::standard), identity(6));
}

TEST(CompressionDilation, DilationsAgreeUnderCompression) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const Index n = 5;
    const MatrixC x = random_complex(n, rng), w = random_unitary(n, rng);
    const MatrixC z2 = dilation_unitary(w.adjoint(), DilationKind::z2);
    const MatrixC st = dilation_unitary(w, DilationKind::standard);
    const MatrixC lhs = compress_kappa(z2 * embed_iota2(x) * z2.adjoint());
    const MatrixC rhs = compress_kappa(st * embed_iota2(x) * st.adjoint());
    EXPECT_LE(oracle::norm2(lhs - rhs), 1e-10);
    EXPECT_LE(unitarity_defect(z2), 1e-13);
    // standard dilation commutes with iota2
    EXPECT_LE(oracle::norm2(st * embed_iota2(x) * st.adjoint() - embed_iota2(w * x * w.adjoint())), 1e-12);
  }
}

TEST(CompressionDilation, CoveringVarietyProperty) {
  // commuting pairs stay commuting after Psi^[s] and compress back into the
  // commuting variety
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Index n = 4;
    const MatrixC u = random_unitary(n, rng), w = random_unitary(n, rng);
    VectorC a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = rng.uniform(-1, 1);
      b(i) = rng.uniform(-1, 1);
    }
    const auto xs = oracle::diagonal_in_basis(u, {a, b});
    const MatrixC st = dilation_unitary(w, DilationKind::standard);
    const MatrixC y0 = compress_kappa(st * embed_iota2(xs[0]) * st.adjoint());
    const MatrixC y1 = compress_kappa(st * embed_iota2(xs[1]) * st.adjoint());
    EXPECT_LE(oracle::norm2(commutator(y0, y1)), 1e-12);
  }
}

TEST(CompressionDilation, DilateKeepsPermutationShape) {
  Rng rng(12);
  const NormalTuple x({diag_real({1, -1, 0.5})});
  const auto psi = joint_isospectral_approximant(x, x, 0.0);
  const auto s = dilate(psi, DilationKind::standard);
  EXPECT_EQ(s.w.rows(), 6);
  EXPECT_EQ(s.permutation.size(), 6u);
  const auto z = dilate(psi, DilationKind::z2);
  EXPECT_LE(unitarity_defect(z.w), 1e-14);
}
