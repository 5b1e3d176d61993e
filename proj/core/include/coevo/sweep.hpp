#pragma once

#include "coevo/balance.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/graphio.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace coevo {

/// Runs body(i) for i in [0, count) on `workers` threads (0: hardware
/// concurrency). Exceptions are rethrown on the calling thread after all
/// workers finish; the lowest failing index wins.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

enum class InitialTies { identity, zero, scaled_identity, rank_one };

/// Family of complete-graph initial states for convergence sweeps. Row r
/// uses Pcg32(base_seed + r): V(0) entries are U(v_low, v_high), optionally
/// rescaled to |V(0)|² = norm_sq.
struct SweepFamily {
  std::vector<std::size_t> sizes{16};
  std::size_t samples_per_size = 30;
  std::uint64_t base_seed = 1;
  InitialTies w0 = InitialTies::identity;
  double w0_scale = 1.0;  ///< scaled_identity factor
  double v_low = -1.0;
  double v_high = 1.0;
  std::optional<double> norm_sq;
};

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double pos_eig = 0.0;  ///< |V(0)|², the only positive eigenvalue of V(0)V(0)ᵀ
  std::size_t iterations = 0;
  StopReason stop_reason = StopReason::max_steps;
  bool failed = false;
  std::string error;
};

/// Initial state of row `row` of the family (exposed for tests and the CLI).
SystemState sweep_initial_state(const SweepFamily& family, std::size_t n, std::uint64_t seed);

/// Discrete-mode iterations until any entry exceeds cfg.blowup_threshold,
/// one row per (size, sample); cfg.mode is forced to discrete. Rows are
/// independent and run on `workers` threads; a row whose run throws is
/// marked failed instead of aborting the sweep.
std::vector<SweepRow> convergence_sweep(const SweepFamily& family, const SimConfig& cfg, std::size_t workers = 0);

/// Columns: seed,n,pos_eig,iterations,stop_reason.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct CommunityConfig {
  double edge_weight = 0.01;  ///< initial weight of every edge
  double a = 0.01;
  double b = 0.01;
  double threshold = 1e20;
  std::size_t max_steps = 1'000'000;
};

struct CommunityRun {
  Vector final_v;
  std::vector<NodeSet> components;  ///< after removing non-positive edges
  StopReason stop_reason = StopReason::max_steps;
  std::size_t iterations = 0;
  std::optional<Accuracy> score;
};

/// Seeded discrete dynamics on g with uniform positive initial ties; the
/// final opinions and the positive-edge components are read at stop.
CommunityRun run_communities(const LabeledGraph& g, const Vector& v0, const CommunityConfig& cfg);

}  // namespace coevo
