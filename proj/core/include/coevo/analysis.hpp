#pragma once

#include "coevo/dynamics.hpp"
#include "coevo/spectral.hpp"

#include <cstddef>
#include <vector>

namespace coevo {

/// Opinions expressed in the eigenbasis of C: λ(t) = uᵀ V(t), with
/// λ_k'' = (2|V|² − a_k) λ_k along continuous trajectories.
struct LambdaTrack {
  Matrix u;          ///< columns: eigenvectors of C, eigenvalues descending
  Vector eigvals_c;  ///< a_1 >= a_2 >= ...
  std::vector<double> times;
  std::vector<Vector> lambda;
  /// max over samples of |Σλ_k² − |V|²| / max(|V|², tiny)
  double parseval_residual = 0.0;
  /// max over interior samples of |λ_k''(fd) − (2|V|² − a_k)λ_k| / (1 + |V|³)
  double ode_residual = 0.0;
};

inline constexpr double kTrailingFraction = 0.1;
inline constexpr double kDirectionTolerance = 1e-3;
inline constexpr double kGenericMargin = 1.05;

/// Projects every sample onto C's eigenbasis (m = 1).
LambdaTrack lambda_coordinates(const Trajectory& traj, const SymmetricMatrix& c);

struct DominantMode {
  std::size_t index = 0;
  double margin = 0.0;  ///< trailing mean |λ_h| over the runner-up
  bool generic = false;  ///< margin >= 1.05
};

/// Mode with the largest mean |λ_k| over the trailing 10% of samples.
/// Requires at least 10 samples.
DominantMode dominant_mode(const LambdaTrack& lt);

struct LimitDirection {
  Vector direction;
  bool converged = false;
  double residual = 0.0;  ///< max |V/|V| − mean|_∞ over the window
};

/// Mean of V/|V| over the trailing 10% of samples. Throws ZeroOpinion when
/// |V| < 1e-12 anywhere in that window.
LimitDirection limit_direction(const Trajectory& traj);

struct LimitEigenCheck {
  double residual = 0.0;    ///< ‖(W²/|V|²) x − x‖, x = V/|V|
  double c_residual = 0.0;  ///< ‖C x‖ / |V|²
  double norm_v = 0.0;
};

/// Tests that V/|V| is an eigenvalue-one eigenvector of W²/|V|² at the last
/// sample. Throws ZeroOpinion when |V| < 1e-12.
LimitEigenCheck limit_eigen_check(const Trajectory& traj, const SymmetricMatrix& c);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace coevo
