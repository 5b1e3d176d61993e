#pragma once

#include "coevo/dynamics.hpp"
#include "coevo/graph.hpp"
#include "coevo/spectral.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace coevo {

using Triangle = std::array<std::size_t, 3>;
using NodeSet = std::vector<std::size_t>;

struct BalanceReport {
  double min_product = std::numeric_limits<double>::infinity();
  std::vector<Triangle> violating_triangles;  ///< product < −eps³
  bool strict = true;                         ///< every product > eps³
  bool weak = true;                           ///< every product >= −eps³
  std::size_t triangle_count = 0;
  std::size_t near_zero_count = 0;  ///< |product| <= eps³
};

/// Scale-aware dead zone: 1e-9·max|w| (1e-300 for an all-zero matrix).
double default_balance_eps(const Matrix& w);

/// Triangle sign statistics of the scalar tie matrix w over g's triangles.
/// A product counts as near-zero when |w_ij w_jk w_ki| <= eps³.
BalanceReport check_balance(const Matrix& w, const GraphTopology& g, double eps);

/// Early-exit variant that only answers "weakly balanced?".
bool is_weakly_balanced(const Matrix& w, const GraphTopology& g, double eps);

inline constexpr double kPartitionDeadZone = 1e-9;

struct Partition {
  NodeSet plus;
  NodeSet minus;
  NodeSet zero;  ///< |u_i| <= eps
  EigGap gap;
  Vector u;  ///< leading eigenvector
  double leading_eigenvalue = 0.0;
  /// Unique leading eigenvalue and no near-zero components.
  bool reliable() const noexcept { return gap.unique && zero.empty(); }
};

/// Two-camp split by the sign of the leading eigenvector of w.
Partition partition(const SymmetricMatrix& w, double eps = kPartitionDeadZone);

/// Fraction of ordered entries (i, j), i != j, with sign(w_ij) = sign(u_i u_j).
double partition_sign_agreement(const Partition& p, const Matrix& w, const GraphTopology& g);

enum class Outcome { harmony, polarization, multi_community, neutral_collapse, undecided };
std::string_view to_string(Outcome o) noexcept;

struct OutcomeClass {
  Outcome kind = Outcome::undecided;
  std::vector<NodeSet> communities;
  StopReason stop_reason = StopReason::max_steps;
  double final_norm_v = 0.0;
  BalanceReport balance;
};

/// Outcome of a finished run, read off its last sample (m = 1).
OutcomeClass classify(const Trajectory& traj, const GraphTopology& g, double eps);

/// Connected components of the graph restricted to edges with w_ij > eps.
std::vector<NodeSet> positive_components(const Matrix& w, const GraphTopology& g, double eps);

struct SignStability {
  Matrix time;                                           ///< stabilisation time per entry of W
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> neutral;  ///< final |w| <= eps
  double latest = 0.0;                                   ///< max over entries
};

/// Earliest sample time after which the sign of each W entry stays fixed.
SignStability sign_stability(const Trajectory& traj, double eps);

nlohmann::json to_json(const BalanceReport& r);
nlohmann::json to_json(const Partition& p);
nlohmann::json to_json(const OutcomeClass& o);

}  // namespace coevo
