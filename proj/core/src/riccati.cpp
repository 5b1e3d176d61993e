#include "coevo/riccati.hpp"

#include "coevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coevo {

namespace {

double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff(); }

// X = −Z Y⁻¹, solved as Yᵀ Xᵀ = −Zᵀ.
Matrix minus_z_y_inverse(const Matrix& y, const Matrix& z, double t) {
  try {
    return solve_linear(y.transpose(), -z.transpose()).transpose();
  } catch (const Singular& e) {
    throw SingularY(t, e.pivot());
  }
}

double trig_denominator(double lambda, double a, double t) { return std::cos(a * t) - (lambda / a) * std::sin(a * t); }

}  // namespace

std::string_view to_string(BlowupCase c) noexcept {
  switch (c) {
    case BlowupCase::trig:
      return "trig";
    case BlowupCase::hyperbolic:
      return "hyperbolic";
    case BlowupCase::rational:
      return "rational";
    case BlowupCase::none:
      return "none";
  }
  return "unknown";
}

SeriesSolution series_solve(const Matrix& b, const Matrix& c, double t, double tol) {
  if (b.rows() != b.cols() || c.rows() != c.cols() || b.rows() != c.rows() || b.rows() == 0) {
    throw DimensionMismatch("series_solve: B and C must be square of the same size");
  }
  if (!(t >= 0.0)) throw PreconditionFailed("series_solve: t must be non-negative");
  if (!(tol > 0.0)) throw PreconditionFailed("series_solve: tol must be positive");

  const Index n = b.rows();
  const double norm_c = inf_norm(c);
  const double norm_b = inf_norm(b);
  const double x2 = norm_c * t * t;
  if (x2 > kSeriesMaxArgument) {
    throw SeriesRangeExceeded("series_solve: ‖C‖·t² = " + std::to_string(x2) + " exceeds " +
                              std::to_string(kSeriesMaxArgument));
  }

  // cos-like series P = Σ (−1)^k t^{2k} C^k/(2k)!, sin-like Q = Σ (−1)^k t^{2k+1} C^k/(2k+1)!
  Matrix p_term = Matrix::Identity(n, n);
  Matrix q_term = t * Matrix::Identity(n, n);
  Matrix p_sum = p_term;
  Matrix q_sum = q_term;
  // Scalar majorants of the k-th terms: x^{2k}/(2k)! and t·x^{2k}/(2k+1)!.
  double p_major = 1.0;
  double q_major = t;
  const double t2 = t * t;

  std::size_t k = 0;
  double bound = 0.0;
  for (;; ++k) {
    const double kd = static_cast<double>(k);
    // Majorants of the next terms and geometric ratios beyond them.
    const double p_next = p_major * x2 / ((2 * kd + 1) * (2 * kd + 2));
    const double q_next = q_major * x2 / ((2 * kd + 2) * (2 * kd + 3));
    const double rp = x2 / ((2 * kd + 3) * (2 * kd + 4));
    const double rq = x2 / ((2 * kd + 4) * (2 * kd + 5));
    const double tail_p = rp < 1.0 ? p_next / (1.0 - rp) : std::numeric_limits<double>::infinity();
    const double tail_q = rq < 1.0 ? q_next / (1.0 - rq) : std::numeric_limits<double>::infinity();
    bound = std::max(tail_p + tail_q * norm_b, tail_p * norm_b + norm_c * tail_q);

    const double scale = 1.0 + std::max(max_abs(p_sum), max_abs(q_sum));
    const double last = std::max(max_abs(p_term), max_abs(q_term));
    if ((k > 0 || t == 0.0) && last <= tol * scale && bound <= tol * scale) break;
    if (k + 1 >= kSeriesMaxTerms) break;

    p_term = (-t2 / ((2 * kd + 1) * (2 * kd + 2))) * (p_term * c);
    q_term = (-t2 / ((2 * kd + 2) * (2 * kd + 3))) * (q_term * c);
    p_sum += p_term;
    q_sum += q_term;
    p_major = p_next;
    q_major = q_next;
  }

  SeriesSolution out;
  out.terms_used = k + 1;
  out.truncation_error_bound = bound;
  out.y = p_sum - q_sum * b;
  out.z = -p_sum * b - c * q_sum;
  out.w = minus_z_y_inverse(out.y, out.z, t);
  return out;
}

CSpectrum c_spectrum(const SymmetricMatrix& c) {
  const SpectralDecomposition d = eigh(c);
  const double threshold = kZeroEigenvalueRel * max_abs(c.matrix());
  const Index n = c.size();
  std::vector<Index> pos, neg, zero;
  for (Index k = 0; k < n; ++k) {
    const double lam = d.eigenvalues(k);
    if (lam > threshold) {
      pos.push_back(k);
    } else if (lam < -threshold) {
      neg.push_back(k);
    } else {
      zero.push_back(k);
    }
  }
  CSpectrum out;
  out.u.resize(n, n);
  Index col = 0;
  for (const Index k : pos) {
    out.pos.push_back(std::sqrt(d.eigenvalues(k)));
    out.u.col(col++) = d.u.col(k);
  }
  for (const Index k : neg) {
    out.neg.push_back(std::sqrt(-d.eigenvalues(k)));
    out.u.col(col++) = d.u.col(k);
  }
  for (const Index k : zero) out.u.col(col++) = d.u.col(k);
  out.zero_count = zero.size();
  return out;
}

Matrix symmetric_closed_form(const SymmetricMatrix& b, const CSpectrum& cs, double t) {
  const Index n = b.size();
  if (cs.u.rows() != n || static_cast<Index>(cs.pos.size() + cs.neg.size() + cs.zero_count) != n) {
    throw DimensionMismatch("symmetric_closed_form: spectrum does not match B");
  }
  if (t == 0.0) return b.matrix();

  Vector d1(n), d2(n), d3(n);
  Index k = 0;
  for (const double a : cs.pos) {
    d1(k) = std::cos(a * t);
    d2(k) = std::sin(a * t) / a;
    d3(k) = -a * std::sin(a * t);
    ++k;
  }
  for (const double d : cs.neg) {
    d1(k) = std::cosh(d * t);
    d2(k) = std::sinh(d * t) / d;
    d3(k) = d * std::sinh(d * t);
    ++k;
  }
  // Zero eigenvalues: Y_kk = 1 − t·β_kk, so the D2 entry is t.
  for (std::size_t z = 0; z < cs.zero_count; ++z) {
    d1(k) = 1.0;
    d2(k) = t;
    d3(k) = 0.0;
    ++k;
  }

  const Matrix bt = cs.u.transpose() * b.matrix() * cs.u;
  const Matrix y = Matrix(d1.asDiagonal()) - d2.asDiagonal() * bt;
  const Matrix z = Matrix(d3.asDiagonal()) - d1.asDiagonal() * bt;
  const Matrix wt = minus_z_y_inverse(y, z, t);
  return cs.u * wt * cs.u.transpose();
}

double mode_value(double b_k, double c_k, double t, double zero_threshold) {
  if (c_k > zero_threshold) {
    const double a = std::sqrt(c_k);
    return (a * std::sin(a * t) + b_k * std::cos(a * t)) / trig_denominator(b_k, a, t);
  }
  if (c_k < -zero_threshold) {
    const double d = std::sqrt(-c_k);
    const double mu = b_k;
    // (μ cosh dt − d sinh dt)/(cosh dt − (μ/d) sinh dt), scaled by 2e^{−dt}.
    const double e = std::exp(-2.0 * d * t);
    return ((mu - d) + (mu + d) * e) / ((1.0 - mu / d) + (1.0 + mu / d) * e);
  }
  return b_k / (1.0 - t * b_k);
}

ModePrediction predict_mode(double b_k, double c_k, double zero_threshold) {
  ModePrediction out;
  if (c_k > zero_threshold) {
    out.kind = BlowupCase::trig;
    const double a = std::sqrt(c_k);
    // Denominator is +1 at t = 0 and −1 at t = π/a; bisect on its sign.
    double lo = 0.0;
    double hi = std::numbers::pi / a;
    for (int it = 0; it < kBisectionIterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (trig_denominator(b_k, a, mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.blows_up = true;
    out.t_star = 0.5 * (lo + hi);
    return out;
  }
  if (c_k < -zero_threshold) {
    out.kind = BlowupCase::hyperbolic;
    const double d = std::sqrt(-c_k);
    const double mu = b_k;
    if (mu > d) {
      out.blows_up = true;
      out.t_star = std::atanh(d / mu) / d;
    } else {
      out.finite_limit = mode_value(b_k, c_k, 30.0 / d, zero_threshold);
    }
    return out;
  }
  out.kind = BlowupCase::rational;
  if (b_k > 0.0) {
    out.blows_up = true;
    out.t_star = 1.0 / b_k;
  } else {
    out.finite_limit = 0.0;
  }
  return out;
}

double zero_eigenvalue_threshold(const Vector& diag_c) {
  return diag_c.size() == 0 ? 0.0 : kZeroEigenvalueRel * diag_c.cwiseAbs().maxCoeff();
}

Matrix commuting_closed_form(const Vector& diag_b, const Vector& diag_c, const Matrix& u, double t) {
  const Index n = diag_b.size();
  if (diag_c.size() != n || u.rows() != n || u.cols() != n) {
    throw DimensionMismatch("commuting_closed_form: inconsistent sizes");
  }
  if (t == 0.0) return u * diag_b.asDiagonal() * u.transpose();
  const double threshold = zero_eigenvalue_threshold(diag_c);
  Vector values(n);
  for (Index k = 0; k < n; ++k) {
    const ModePrediction pm = predict_mode(diag_b(k), diag_c(k), threshold);
    if (pm.blows_up && t >= pm.t_star) throw ModeSingular(static_cast<std::size_t>(k), t, pm.t_star);
    values(k) = mode_value(diag_b(k), diag_c(k), t, threshold);
  }
  return u * values.asDiagonal() * u.transpose();
}

BlowupPrediction predict_blowup(const Vector& diag_b, const Vector& diag_c) {
  if (diag_b.size() != diag_c.size()) throw DimensionMismatch("predict_blowup: diag sizes differ");
  const double threshold = zero_eigenvalue_threshold(diag_c);
  BlowupPrediction out;
  double largest_limit = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < diag_b.size(); ++k) {
    ModePrediction pm = predict_mode(diag_b(k), diag_c(k), threshold);
    if (pm.blows_up && pm.t_star < out.t_star) {
      out.blows_up = true;
      out.t_star = pm.t_star;
      out.kind = pm.kind;
      out.mode_index = static_cast<std::size_t>(k);
    }
    if (!pm.blows_up) largest_limit = std::max(largest_limit, pm.finite_limit);
    out.modes.push_back(pm);
  }
  if (!out.blows_up && !out.modes.empty()) out.finite_limit = largest_limit;
  return out;
}

ModelC model_c(const Vector& v0, const SymmetricMatrix& w0) {
  if (v0.size() != w0.size()) throw DimensionMismatch("model_c: v0 and W0 sizes differ");
  const Matrix w2 = w0.matrix() * w0.matrix();
  ModelC out{SymmetricMatrix(v0 * v0.transpose() - w2)};

  Matrix m = out.c.matrix() + w2;
  const double v_sq = v0.squaredNorm();
  if (v_sq > 0.0) {
    const Vector vh = v0 / std::sqrt(v_sq);
    m -= (vh.dot(m * vh)) * (vh * vh.transpose());
  }
  const SpectralDecomposition rest = eigh(SymmetricMatrix(m));
  out.rank_one_defect = rest.eigenvalues.cwiseAbs().maxCoeff();
  out.rank_one = out.rank_one_defect <= 1e-10 * v_sq + 1e-13 * max_abs(w2);
  return out;
}

}  // namespace coevo
