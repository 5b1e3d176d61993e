#include "support.hpp"

#include <coevo/errors.hpp>
#include <coevo/spectral.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace coevo {
namespace {

using testing::random_symmetric;
using testing::reference_eigenvalues;

TEST(SymmetricMatrix, RejectsNonSquareAndEmpty) {
  EXPECT_THROW(SymmetricMatrix(Matrix(2, 3)), DimensionMismatch);
  EXPECT_THROW(SymmetricMatrix(Matrix(0, 0)), DimensionMismatch);
}

TEST(SymmetricMatrix, MirrorsAverage) {
  Matrix m(2, 2);
  m << 1, 2, 4, 3;
  const SymmetricMatrix s(m);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(Eigh, MatchesReferenceOnRandomMatrices) {
  Pcg32 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.bounded(12));
    const Matrix a = random_symmetric(n, rng, 3.0);
    const SpectralDecomposition d = eigh(SymmetricMatrix(a));
    const Vector ref = reference_eigenvalues(a);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    EXPECT_LT((d.eigenvalues - ref).cwiseAbs().maxCoeff(), 1e-12 * scale * n);
    EXPECT_LT((d.u.transpose() * d.u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((d.u * d.eigenvalues.asDiagonal() * d.u.transpose() - a).cwiseAbs().maxCoeff(), 1e-12 * scale * n);
    for (Index k = 1; k < n; ++k) EXPECT_GE(d.eigenvalues(k - 1), d.eigenvalues(k));
    for (Index k = 0; k < n; ++k) {
      Index arg = 0;
      d.u.col(k).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(d.u(arg, k), 0.0);
    }
  }
}

TEST(Eigh, IsDeterministic) {
  Pcg32 rng(3);
  const SymmetricMatrix a(random_symmetric(7, rng));
  const SpectralDecomposition x = eigh(a);
  const SpectralDecomposition y = eigh(a);
  EXPECT_EQ(x.u, y.u);
  EXPECT_EQ(x.eigenvalues, y.eigenvalues);
}

TEST(Eigh, DiagonalInputIsSortedOnly) {
  const SpectralDecomposition d = eigh(SymmetricMatrix::diagonal(Vector::LinSpaced(4, -1.0, 2.0)));
  EXPECT_DOUBLE_EQ(d.eigenvalues(0), 2.0);
  EXPECT_DOUBLE_EQ(d.eigenvalues(3), -1.0);
  EXPECT_DOUBLE_EQ(d.u(3, 0), 1.0);
}

TEST(EigGap, IdentityIsNotUnique) {
  const SpectralDecomposition d = eigh(SymmetricMatrix::identity(4));
  EXPECT_FALSE(eig_gap(d, 1e-12).unique);
  EXPECT_TRUE(eig_gap(eigh(SymmetricMatrix::identity(1)), 1e-12).unique);
}

TEST(SimultaneousDiagonalize, RankOnePair) {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const SymmetricMatrix b = SymmetricMatrix::outer(v);
  const SymmetricMatrix c(2.0 * v * v.transpose());
  const SimultaneousDiagonalization sd = simultaneous_diagonalize(b, c, default_commute_tolerance(b, c));
  EXPECT_NEAR(sd.diag_b(0), 1.0, 1e-12);
  EXPECT_NEAR(sd.diag_b(1), 0.0, 1e-12);
  EXPECT_NEAR(sd.diag_c(0), 2.0, 1e-12);
  EXPECT_NEAR(sd.diag_c(1), 0.0, 1e-12);
  const Matrix tb = sd.u.transpose() * b.matrix() * sd.u;
  const Matrix tc = sd.u.transpose() * c.matrix() * sd.u;
  EXPECT_LT(std::abs(tb(0, 1)), 1e-10);
  EXPECT_LT(std::abs(tc(0, 1)), 1e-10);
}

TEST(SimultaneousDiagonalize, SharedBasisWithDegenerateC) {
  // C has a repeated eigenvalue; B splits the cluster.
  Pcg32 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix q = testing::random_orthogonal(5, rng);
    Vector db = testing::random_vector(5, rng, -2.0, 2.0);
    Vector dc(5);
    dc << 1.5, 1.5, -0.5, 0.0, 0.0;
    const SymmetricMatrix b(q * db.asDiagonal() * q.transpose());
    const SymmetricMatrix c(q * dc.asDiagonal() * q.transpose());
    const SimultaneousDiagonalization sd = simultaneous_diagonalize(b, c, default_commute_tolerance(b, c));
    const Matrix tb = sd.u.transpose() * b.matrix() * sd.u;
    const Matrix tc = sd.u.transpose() * c.matrix() * sd.u;
    EXPECT_LT((tb - Matrix(sd.diag_b.asDiagonal())).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((tc - Matrix(sd.diag_c.asDiagonal())).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GT(sd.diag_c(0), 0.0);
    EXPECT_LT(sd.diag_c(2), 0.0);
    EXPECT_NEAR(sd.diag_c(4), 0.0, 1e-12);
  }
}

TEST(SimultaneousDiagonalize, RejectsNonCommuting) {
  Matrix a(2, 2), b(2, 2);
  a << 1, 0, 0, 2;
  b << 0, 1, 1, 0;
  EXPECT_THROW(simultaneous_diagonalize(SymmetricMatrix(a), SymmetricMatrix(b), 1e-9), NotCommuting);
}

TEST(IsEigenvector, DetectsAndReportsRayleighQuotient) {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  Vector v(2);
  v << 1, 1;
  const EigenvectorCheck yes = is_eigenvector(SymmetricMatrix(a), v, 1e-12);
  EXPECT_TRUE(yes.yes);
  EXPECT_DOUBLE_EQ(yes.alpha, 3.0);
  v << 1, 0;
  EXPECT_FALSE(is_eigenvector(SymmetricMatrix(a), v, 1e-6).yes);
  EXPECT_THROW(is_eigenvector(SymmetricMatrix(a), Vector::Zero(2), 1e-6), ZeroVector);
}

TEST(SolveLinear, SolvesAndFlagsSingular) {
  Pcg32 rng(8);
  const Matrix a = testing::random_matrix(6, 6, rng) + 6.0 * Matrix::Identity(6, 6);
  const Matrix x = testing::random_matrix(6, 2, rng);
  EXPECT_LT((solve_linear(a, a * x) - x).cwiseAbs().maxCoeff(), 1e-12);
  Matrix s(2, 2);
  s << 1, 2, 2, 4;
  EXPECT_THROW(solve_linear(s, Matrix::Identity(2, 2)), Singular);
}

}  // namespace
}  // namespace coevo
