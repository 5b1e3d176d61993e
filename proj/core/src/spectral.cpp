#include "coevo/spectral.hpp"

#include "coevo/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace coevo {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const Index n = a.rows();
  for (Index q = 1; q < n; ++q)
    for (Index p = 0; p < q; ++p) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

// Largest-magnitude component positive; the lowest index wins ties.
void canonicalize_signs(Matrix& u) {
  for (Index k = 0; k < u.cols(); ++k) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
      const double a = std::abs(u(i, k));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (u(best, k) < 0.0) u.col(k) = -u.col(k);
  }
}

// One rotation annihilating a(p, q); also applied to the eigenvector basis v.
void rotate(Matrix& a, Matrix& v, Index p, Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  if (!std::isfinite(theta)) t = apq / (a(q, q) - a(p, p));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Index n = a.rows();

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Index r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double arp = a(r, p);
    const double arq = a(r, q);
    a(r, p) = c * arp - s * arq;
    a(p, r) = a(r, p);
    a(r, q) = s * arp + c * arq;
    a(q, r) = a(r, q);
  }
  for (Index r = 0; r < n; ++r) {
    const double vrp = v(r, p);
    const double vrq = v(r, q);
    v(r, p) = c * vrp - s * vrq;
    v(r, q) = s * vrp + c * vrq;
  }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Matrix& m) {
  require_square(m, "SymmetricMatrix");
  m_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Index n) { return SymmetricMatrix(Matrix::Identity(n, n), Trusted{}); }

SymmetricMatrix SymmetricMatrix::zero(Index n) { return SymmetricMatrix(Matrix::Zero(n, n), Trusted{}); }

SymmetricMatrix SymmetricMatrix::outer(const Vector& v) {
  if (v.size() == 0) throw DimensionMismatch("SymmetricMatrix::outer: empty vector");
  return SymmetricMatrix(v * v.transpose(), Trusted{});
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& d) {
  if (d.size() == 0) throw DimensionMismatch("SymmetricMatrix::diagonal: empty vector");
  return SymmetricMatrix(Matrix(d.asDiagonal()), Trusted{});
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

SpectralDecomposition eigh(const SymmetricMatrix& m, double tol) {
  if (!(tol > 0.0)) throw PreconditionFailed("eigh: tol must be positive");
  const Index n = m.size();
  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();

  int sweep = 0;
  for (;; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= tol * scale) break;
    if (sweep >= kJacobiMaxSweeps) {
      throw NonConvergence("eigh: Jacobi sweeps exhausted", sweep, off);
    }
    double upper_sum = 0.0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) upper_sum += std::abs(a(p, q));
    const double threshold = sweep < 3 ? 0.2 * upper_sum / static_cast<double>(n * n) : 0.0;

    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
        } else if (std::abs(a(p, q)) > threshold && a(p, q) != 0.0) {
          rotate(a, v, p, q);
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) > a(j, j); });

  SpectralDecomposition out;
  out.u.resize(n, n);
  out.eigenvalues.resize(n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.u.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  canonicalize_signs(out.u);
  return out;
}

EigGap eig_gap(const SpectralDecomposition& d, double tol) {
  if (d.eigenvalues.size() < 2) return {std::numeric_limits<double>::infinity(), true};
  const double gap = std::max(0.0, d.eigenvalues(0) - d.eigenvalues(1));
  return {gap, gap > tol};
}

double commute_defect(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("commute_defect: sizes " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  return max_abs(am * bm - bm * am);
}

double default_commute_tolerance(const SymmetricMatrix& b, const SymmetricMatrix& c) {
  const double tol = 1e-9 * static_cast<double>(b.size()) * max_abs(b.matrix()) * max_abs(c.matrix());
  return std::max(tol, 1e-300);
}

SimultaneousDiagonalization simultaneous_diagonalize(const SymmetricMatrix& b, const SymmetricMatrix& c,
                                                     double tol) {
  const double defect = commute_defect(b, c);
  if (defect > tol) throw NotCommuting(defect, tol);

  const Index n = c.size();
  const double scale_c = max_abs(c.matrix());
  const double zero_threshold = 1e-10 * scale_c;
  const SpectralDecomposition dc = eigh(c);
  const double off_target = std::max(tol, 1e-12 * std::max(1.0, max_abs(b.matrix())));

  Matrix best_u;
  double best_off = std::numeric_limits<double>::infinity();

  // Eigenvalues of c closer than the cluster width are treated as one
  // eigenspace; b is then diagonalised inside each cluster. Widen until the
  // result is diagonal at the requested tolerance.
  for (const double rel : std::array{1e-10, 1e-8, 1e-6, 1e-4}) {
    const double width = rel * std::max(scale_c, std::numeric_limits<double>::min());
    Matrix u(n, n);
    Index start = 0;
    while (start < n) {
      Index end = start + 1;
      while (end < n && dc.eigenvalues(end - 1) - dc.eigenvalues(end) <= width) ++end;
      const Index len = end - start;
      const Matrix basis = dc.u.middleCols(start, len);
      if (len == 1) {
        u.col(start) = basis.col(0);
      } else {
        const SymmetricMatrix restricted(basis.transpose() * b.matrix() * basis);
        const SpectralDecomposition inner = eigh(restricted);
        u.middleCols(start, len) = basis * inner.u;
      }
      start = end;
    }
    const Matrix tb = u.transpose() * b.matrix() * u;
    const double off = max_abs(tb - Matrix(tb.diagonal().asDiagonal()));
    if (off < best_off) {
      best_off = off;
      best_u = u;
    }
    if (off <= off_target) break;
  }

  const Matrix tc = best_u.transpose() * c.matrix() * best_u;
  auto sign_class = [&](Index k) {
    const double lam = tc(k, k);
    if (lam > zero_threshold) return 0;
    if (lam < -zero_threshold) return 1;
    return 2;
  };
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    const int ci = sign_class(i);
    const int cj = sign_class(j);
    if (ci != cj) return ci < cj;
    if (ci == 2) return false;
    return tc(i, i) > tc(j, j);
  });

  SimultaneousDiagonalization out;
  out.u.resize(n, n);
  for (Index k = 0; k < n; ++k) out.u.col(k) = best_u.col(order[static_cast<std::size_t>(k)]);
  canonicalize_signs(out.u);
  out.diag_b = (out.u.transpose() * b.matrix() * out.u).diagonal();
  out.diag_c = (out.u.transpose() * c.matrix() * out.u).diagonal();
  return out;
}

EigenvectorCheck is_eigenvector(const SymmetricMatrix& a, const Vector& v, double tol) {
  if (v.size() != a.size()) {
    throw DimensionMismatch("is_eigenvector: vector length " + std::to_string(v.size()) +
                            " vs matrix size " + std::to_string(a.size()));
  }
  const double norm_sq = v.squaredNorm();
  if (!(norm_sq > 0.0)) throw ZeroVector("is_eigenvector: zero vector");
  const Vector av = a.matrix() * v;
  const double alpha = v.dot(av) / norm_sq;
  const double residual = (av - alpha * v).norm();
  return {residual <= tol * std::sqrt(norm_sq), alpha};
}

Matrix solve_linear(const Matrix& a, const Matrix& rhs) {
  require_square(a, "solve_linear");
  if (rhs.rows() != a.rows()) {
    throw DimensionMismatch("solve_linear: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                            std::to_string(a.rows()));
  }
  const Eigen::PartialPivLU<Matrix> lu(a);
  const double floor = kSingularPivotFloor * max_abs(a);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > floor) || !std::isfinite(min_pivot)) {
    throw Singular("solve_linear: pivot below singularity floor", min_pivot);
  }
  return lu.solve(rhs);
}

}  // namespace coevo
