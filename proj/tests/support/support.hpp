#pragma once

// Generators and independent reference computations shared by the suites.
// The references deliberately avoid the library's own algorithms: Eigen's
// self-adjoint solver stands in for the Jacobi code, and the Riccati flow is
// recomputed from the matrix exponential of the linearised 2n×2n system.

#include <coevo/rng.hpp>
#include <coevo/spectral.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace coevo::testing {

inline Vector random_vector(Index n, Pcg32& rng, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline Matrix random_matrix(Index r, Index c, Pcg32& rng, double range = 1.0) {
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rng.uniform(-range, range);
  return m;
}

inline Matrix random_symmetric(Index n, Pcg32& rng, double range = 1.0) {
  Matrix m = random_matrix(n, n, rng, range);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) m(i, j) = m(j, i);
  return m;
}

inline Matrix random_orthogonal(Index n, Pcg32& rng) {
  const Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ();
}

/// Eigenvalues in descending order from Eigen's solver.
inline Vector reference_eigenvalues(const Matrix& a) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvalues().reverse();
}

struct ReferenceFlow {
  Matrix y;
  Matrix z;
  Matrix w;
};

/// (Y, Z) = exp(t·[[0, I], [−C, 0]]) · [I; −B], W = −Z Y⁻¹.
inline ReferenceFlow reference_riccati(const Matrix& b, const Matrix& c, double t) {
  const Index n = b.rows();
  Matrix gen = Matrix::Zero(2 * n, 2 * n);
  gen.topRightCorner(n, n) = Matrix::Identity(n, n);
  gen.bottomLeftCorner(n, n) = -c;
  const Matrix e = (t * gen).exp();
  Matrix start(2 * n, n);
  start.topRows(n) = Matrix::Identity(n, n);
  start.bottomRows(n) = -b;
  const Matrix yz = e * start;
  ReferenceFlow out;
  out.y = yz.topRows(n);
  out.z = yz.bottomRows(n);
  out.w = -out.z * out.y.inverse();
  return out;
}

/// Relative max-abs distance with a unit floor on the scale.
inline double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace coevo::testing
