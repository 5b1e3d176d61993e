#pragma once

// Dense symmetric linear algebra: Jacobi eigensolver, simultaneous
// diagonalisation of commuting pairs, and the pivoted solve used to form
// W = -Z Y^{-1}.

#include <Eigen/Dense>

#include <cstddef>

namespace coevo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Square real matrix with exactly equal mirrored entries. Construction
/// replaces the input by (m + mᵀ)/2.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const Matrix& m);

  static SymmetricMatrix identity(Index n);
  static SymmetricMatrix zero(Index n);
  /// v·vᵀ
  static SymmetricMatrix outer(const Vector& v);
  static SymmetricMatrix diagonal(const Vector& d);

  Index size() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  struct Trusted {};
  SymmetricMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

struct SpectralDecomposition {
  Matrix u;            ///< columns are orthonormal eigenvectors
  Vector eigenvalues;  ///< descending
};

struct EigGap {
  double gap = 0.0;  ///< largest minus second-largest eigenvalue
  bool unique = false;
};

struct SimultaneousDiagonalization {
  Matrix u;
  Vector diag_b;
  Vector diag_c;  ///< ordered: positive, then negative, then zero
};

struct EigenvectorCheck {
  bool yes = false;
  double alpha = 0.0;  ///< Rayleigh quotient vᵀAv / ‖v‖²
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kDefaultEighTol = 1e-14;

/// Cyclic Jacobi eigendecomposition. Stops once the off-diagonal Frobenius
/// norm is below tol·‖m‖_F. Eigenvalues are sorted descending (stable, so
/// ties keep their original index order) and each eigenvector has its
/// largest-magnitude component positive, first such index on ties.
/// Throws NonConvergence after kJacobiMaxSweeps sweeps.
SpectralDecomposition eigh(const SymmetricMatrix& m, double tol = kDefaultEighTol);

/// Gap between the two largest eigenvalues; unique iff gap > tol.
EigGap eig_gap(const SpectralDecomposition& d, double tol);

double max_abs(const Matrix& m);

/// ‖ab − ba‖_max
double commute_defect(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// 1e-9 · n · ‖b‖_max · ‖c‖_max, floored at 1e-300 so that exact zero
/// matrices still pass a `defect <= tol` test.
double default_commute_tolerance(const SymmetricMatrix& b, const SymmetricMatrix& c);

/// Shared orthogonal eigenbasis of two commuting symmetric matrices.
/// Slots are ordered by the sign class of c's eigenvalue: positive
/// (descending), negative (descending), then zero; zero means
/// |λ| <= 1e-10·‖c‖_max. Throws NotCommuting when commute_defect > tol.
SimultaneousDiagonalization simultaneous_diagonalize(const SymmetricMatrix& b, const SymmetricMatrix& c,
                                                     double tol);

EigenvectorCheck is_eigenvector(const SymmetricMatrix& a, const Vector& v, double tol);

/// Solves a·X = rhs with partial (row) pivoting. Throws Singular if a pivot
/// magnitude is below 1e-14·‖a‖_max.
Matrix solve_linear(const Matrix& a, const Matrix& rhs);

/// Relative singularity floor applied by solve_linear.
inline constexpr double kSingularPivotFloor = 1e-14;

}  // namespace coevo
