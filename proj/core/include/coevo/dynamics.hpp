#pragma once

// Time-steppers for the coupled opinion / tie system
//
//   V' = W V,   W' = V Vᵀ        (masked to the graph's edges)
//
// and its discrete counterpart with gains a, b. Opinions may be m-dimensional;
// the tie tensor is then stored as an (n·m)×(n·m) block matrix whose (i, j)
// block is the m×m tie W_ij, so "W symmetric" means W_ij = W_jiᵀ.

#include "coevo/errors.hpp"
#include "coevo/graph.hpp"
#include "coevo/spectral.hpp"

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace coevo {

struct SystemState {
  double t = 0.0;
  Matrix v;  ///< n×m opinions
  Matrix w;  ///< (n·m)×(n·m) block tie matrix

  SystemState() = default;
  SystemState(double t0, Matrix opinions, Matrix ties);
  /// Scalar opinions (m = 1).
  static SystemState scalar(const Vector& v, const Matrix& w, double t0 = 0.0);

  Index n() const noexcept { return v.rows(); }
  Index m() const noexcept { return v.cols(); }
  /// Opinions flattened node-major: entry i·m + a is v(i, a).
  Vector stacked() const;
  void set_stacked(const Vector& x);
  bool finite() const;
  double max_abs_entry() const;
};

enum class Mode { discrete, continuous };
enum class StopReason { blowup, max_steps, opinion_collapse, time_limit };

std::string_view to_string(Mode m) noexcept;
std::string_view to_string(StopReason r) noexcept;

struct SimConfig {
  Mode mode = Mode::continuous;
  double a = 0.01;  ///< discrete opinion gain
  double b = 0.01;  ///< discrete tie gain
  double dt = 1e-3;
  double blowup_threshold = 1e20;
  std::size_t max_steps = 10'000'000;
  std::size_t sample_every = 1;
  /// Largest accepted per-step increment of log(1 + |V|² + ‖W‖_F²).
  double tol = 0.1;
  /// Optional time horizon; reaching it stops with StopReason::time_limit.
  double t_end = std::numeric_limits<double>::infinity();
  /// Per-sample diagnostics (triangle minimum skipped above 200 nodes).
  bool diagnostics = true;

  /// Throws PreconditionFailed for a, b, dt <= 0, threshold <= 1,
  /// sample_every == 0 or tol <= 0.
  void validate() const;
};

struct SampleDiagnostics {
  double norm_v_sq = 0.0;     ///< |V|²
  double norm_vdot_sq = 0.0;  ///< |V'|² (continuous) or |masked W·V|² (discrete)
  double min_triangle_product = std::numeric_limits<double>::quiet_NaN();
  double leading_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<SystemState> samples;
  std::vector<SampleDiagnostics> diagnostics;
  /// Only filled by opinion_ode_integrate: V' at each sample.
  std::vector<Vector> velocities;
  StopReason stop_reason = StopReason::max_steps;
  double stop_time = 0.0;
  std::size_t steps = 0;
  /// Steps taken at the minimum step size with the growth bound exceeded.
  std::size_t forced_steps = 0;

  const SystemState& final_state() const { return samples.back(); }
};

/// Raised when the integrator sits at dt_min for more than
/// kForcedStepBudget steps without crossing the blow-up threshold. The
/// partial trajectory ends at the last valid state; its time is the blow-up
/// estimate.
class StepUnderflow : public Error {
 public:
  explicit StepUnderflow(Trajectory partial);
  const Trajectory& trajectory() const noexcept { return partial_; }
  double time() const noexcept { return partial_.stop_time; }

 private:
  Trajectory partial_;
};

inline constexpr double kCollapseFloor = 1e-12;
inline constexpr int kStepHalvings = 20;
inline constexpr std::size_t kForcedStepBudget = 100'000;
inline constexpr Index kTriangleDiagnosticMaxN = 200;

struct StateDerivative {
  Matrix dv;
  Matrix dw;
};

/// Right-hand side (masked W·V, masked V·Vᵀ). On a self-loop-free graph with
/// symmetric W this is the gradient of dissonance().
StateDerivative coupled_rhs(const SystemState& s, const GraphTopology& g);

/// One step of v += a·(W v), w += b·(v vᵀ), both from the old state; entries
/// outside the graph never change.
SystemState discrete_step(const SystemState& s, const GraphTopology& g, double a, double b);

/// Explicit RK4 for the continuous system. The step halves whenever the
/// per-step log-growth exceeds cfg.tol, down to dt·2⁻²⁰; at that floor steps
/// are forced until the state crosses cfg.blowup_threshold (or turns
/// non-finite), which stops with StopReason::blowup at the crossing time.
/// The last sample is always the last state within the threshold.
Trajectory integrate(const SystemState& s0, const GraphTopology& g, const SimConfig& cfg);

/// Iterates discrete_step until threshold, collapse, max_steps or t_end.
/// Time counts iterations.
Trajectory run_discrete(const SystemState& s0, const GraphTopology& g, const SimConfig& cfg);

/// Dispatches on cfg.mode.
Trajectory simulate(const SystemState& s0, const GraphTopology& g, const SimConfig& cfg);

/// Second-order opinion equation V'' = 2|V|² V − C V, integrated as a first
/// order system in (V, V') with the same step policy as integrate(). Samples
/// carry V in `v` and an empty `w`; V' is in `velocities`.
Trajectory opinion_ode_integrate(const Vector& v0, const Vector& v0dot, const SymmetricMatrix& c, double dt,
                                 double t_end, double threshold, std::size_t sample_every = 1);

/// F(V, W) = ½ Σ over ordered adjacent pairs of V_iᵀ W_ij V_j.
/// Throws SelfLoopPresent when g has self-loops.
double dissonance(const SystemState& s, const GraphTopology& g);

/// ‖V Vᵀ − W² − C‖_max (m = 1).
double riccati_residual(const SystemState& s, const SymmetricMatrix& c);

}  // namespace coevo
