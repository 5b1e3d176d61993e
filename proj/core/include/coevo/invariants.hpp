#pragma once

// Runtime checks of the identities the continuous system must satisfy on a
// complete graph with self-loops and symmetric W(0):
//
//   symmetry         W(t) = W(t)ᵀ
//   conjugation      (QV, QWQᵀ) solves the system when (V, W) does
//   energy           |V'|² = |V|⁴ − Vᵀ C V
//   convexity        φ = |V|², φ'' = 2(2|V'|² + |V|⁴) >= 0
//   riccati          V Vᵀ − W² = C for all t
//   parseval         Σ λ_k² = |V|² in C's eigenbasis
//   eigenvector      V(0) eigenvector of W(0) ⇒ V(t) eigenvector of W(t)

#include "coevo/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace coevo {

struct InvariantCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool skipped = false;
  std::string note;
};

struct BatteryConfig {
  double dt = 1e-3;
  double threshold = 1e3;
  double t_end = 20.0;
  std::uint64_t seed = 1;  ///< draws the orthogonal Q of the conjugation check
  /// Negative control: halfway through, nudge W(0,1) and W(1,0) by
  /// `perturbation` and continue, so the Riccati check must fail.
  bool perturb_midstream = false;
  double perturbation = 1e-3;
};

struct BatteryTolerances {
  static constexpr double symmetry = 1e-9;
  static constexpr double conjugation = 1e-7;
  static constexpr double energy = 1e-6;
  static constexpr double convexity = 0.05;
  static constexpr double riccati = 1e-6;
  static constexpr double parseval = 1e-9;
  static constexpr double eigenvector = 1e-6;
};

struct BatteryReport {
  std::vector<InvariantCheck> checks;
  Trajectory trajectory;
  bool passed() const;
  const InvariantCheck& check(const std::string& name) const;
};

/// Integrates (v0, w0) on the complete graph with self-loops and evaluates
/// every invariant over all samples. Checks that need a symmetric W(0) are
/// skipped with a note when w0 is not symmetric.
BatteryReport run_invariant_battery(const Vector& v0, const Matrix& w0, const BatteryConfig& cfg = {});

/// Central-difference gradient of dissonance() against coupled_rhs() over
/// every opinion entry and every edge-tie entry (W_ij and W_jiᵀ moved
/// together). Returns max |fd − rhs| / max |rhs|.
double dissonance_gradient_error(const SystemState& s, const GraphTopology& g, double h = 1e-4);

nlohmann::json to_json(const InvariantCheck& c);
nlohmann::json to_json(const BatteryReport& r);

}  // namespace coevo
