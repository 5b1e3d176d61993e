#pragma once

// Closed-form solutions of the matrix Riccati problem
//
//   W' = W² + C,   W(0) = B,
//
// via the linearisation W = −Z Y⁻¹ with Y' = Z, Z' = −C Y, Y(0) = I,
// Z(0) = −B.

#include "coevo/spectral.hpp"

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace coevo {

struct SeriesSolution {
  Matrix y;
  Matrix z;
  Matrix w;
  std::size_t terms_used = 0;
  double truncation_error_bound = 0.0;
};

/// Eigen-split of a symmetric C: columns of u are ordered positive
/// eigenvalues (a_i² descending), negative (−d_j², descending), then zero.
struct CSpectrum {
  Matrix u;
  std::vector<double> pos;  ///< a_i > 0
  std::vector<double> neg;  ///< d_j > 0
  std::size_t zero_count = 0;
};

enum class BlowupCase { trig, hyperbolic, rational, none };
std::string_view to_string(BlowupCase c) noexcept;

struct ModePrediction {
  BlowupCase kind = BlowupCase::none;  ///< trig / hyperbolic / rational by C-eigenvalue class
  bool blows_up = false;
  double t_star = std::numeric_limits<double>::infinity();
  /// t → ∞ value of the mode when it stays bounded.
  double finite_limit = std::numeric_limits<double>::quiet_NaN();
};

struct BlowupPrediction {
  bool blows_up = false;
  double t_star = std::numeric_limits<double>::infinity();
  BlowupCase kind = BlowupCase::none;  ///< case of the triggering mode; none when bounded
  std::size_t mode_index = 0;
  double finite_limit = std::numeric_limits<double>::quiet_NaN();  ///< set when nothing blows up
  std::vector<ModePrediction> modes;
};

struct ModelC {
  SymmetricMatrix c;
  /// Largest |eigenvalue| of C + W0² after removing the V0 direction.
  double rank_one_defect = 0.0;
  bool rank_one = true;
};

inline constexpr std::size_t kSeriesMaxTerms = 500;
inline constexpr double kSeriesMaxArgument = 400.0;  ///< refuse when ‖C‖ t² exceeds this
inline constexpr double kZeroEigenvalueRel = 1e-10;
inline constexpr int kBisectionIterations = 200;

/// Power-series evaluation of Y(t), Z(t) and W(t) = −Z Y⁻¹ for general square
/// B, C. Terms are added until the last term is below tol·(1 + |sum|) and a
/// factorial tail bound certifies the remainder below the same level.
/// Throws SeriesRangeExceeded when ‖C‖_∞ t² > 400 and SingularY when Y(t) is
/// numerically singular (t is then a blow-up time).
SeriesSolution series_solve(const Matrix& b, const Matrix& c, double t, double tol = 1e-16);

CSpectrum c_spectrum(const SymmetricMatrix& c);

/// W(t) assembled from the diagonal factors D1, D2, D3 in C's eigenbasis.
/// B need not commute with C. Throws SingularY at a blow-up time.
Matrix symmetric_closed_form(const SymmetricMatrix& b, const CSpectrum& cs, double t);

/// Scalar mode value at time t for C-eigenvalue c_k and B-eigenvalue b_k.
/// `zero_threshold` decides the rational class (|c_k| <= zero_threshold).
double mode_value(double b_k, double c_k, double t, double zero_threshold);

/// Per-mode blow-up analysis of the commuting case.
ModePrediction predict_mode(double b_k, double c_k, double zero_threshold);

/// W(t) = u · diag(mode values) · uᵀ. Throws ModeSingular for the first mode
/// (lowest index) whose blow-up time is <= t.
Matrix commuting_closed_form(const Vector& diag_b, const Vector& diag_c, const Matrix& u, double t);

/// Overall blow-up time: minimum over modes, lowest index on ties.
BlowupPrediction predict_blowup(const Vector& diag_b, const Vector& diag_c);

/// C = v0·v0ᵀ − W0² together with the rank-one consistency check.
ModelC model_c(const Vector& v0, const SymmetricMatrix& w0);

/// Zero-class threshold used for a C spectrum: 1e-10·‖C‖_max.
double zero_eigenvalue_threshold(const Vector& diag_c);

}  // namespace coevo
