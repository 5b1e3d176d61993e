#include "coevo/sweep.hpp"

#include "coevo/rng.hpp"
#include "coevo/trajectory_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace coevo {

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  std::size_t failure_index = count;

  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failure_index) {
          failure_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

SystemState sweep_initial_state(const SweepFamily& family, std::size_t n, std::uint64_t seed) {
  Pcg32 rng(seed);
  const auto nn = static_cast<Index>(n);
  Vector v(nn);
  for (Index i = 0; i < nn; ++i) v(i) = family.v_low == family.v_high ? family.v_low : rng.uniform(family.v_low, family.v_high);
  if (family.norm_sq) {
    const double norm = v.norm();
    if (norm == 0.0) throw PreconditionFailed("sweep_initial_state: cannot rescale a zero opinion vector");
    v *= std::sqrt(*family.norm_sq) / norm;
  }
  Matrix w;
  switch (family.w0) {
    case InitialTies::identity:
      w = Matrix::Identity(nn, nn);
      break;
    case InitialTies::zero:
      w = Matrix::Zero(nn, nn);
      break;
    case InitialTies::scaled_identity:
      w = family.w0_scale * Matrix::Identity(nn, nn);
      break;
    case InitialTies::rank_one:
      w = v * v.transpose();
      break;
  }
  return SystemState::scalar(v, w);
}

std::vector<SweepRow> convergence_sweep(const SweepFamily& family, const SimConfig& cfg, std::size_t workers) {
  SimConfig run_cfg = cfg;
  run_cfg.mode = Mode::discrete;
  run_cfg.diagnostics = false;
  run_cfg.sample_every = std::max<std::size_t>(run_cfg.max_steps, 1);
  run_cfg.validate();

  std::vector<SweepRow> rows;
  for (const std::size_t n : family.sizes) {
    for (std::size_t s = 0; s < family.samples_per_size; ++s) {
      SweepRow r;
      r.seed = family.base_seed + rows.size();
      r.n = n;
      rows.push_back(r);
    }
  }
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    SweepRow& r = rows[i];
    try {
      const SystemState s0 = sweep_initial_state(family, r.n, r.seed);
      r.pos_eig = s0.v.squaredNorm();
      const Trajectory traj = run_discrete(s0, GraphTopology::complete(r.n), run_cfg);
      r.stop_reason = traj.stop_reason;
      r.iterations = static_cast<std::size_t>(traj.stop_time - s0.t);
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "seed,n,pos_eig,iterations,stop_reason\n";
  for (const SweepRow& r : rows) {
    os << r.seed << ',' << r.n << ',' << format_double(r.pos_eig) << ',' << r.iterations << ','
       << (r.failed ? std::string("failed") : std::string(to_string(r.stop_reason))) << '\n';
  }
}

CommunityRun run_communities(const LabeledGraph& g, const Vector& v0, const CommunityConfig& cfg) {
  const GraphTopology& topo = g.topology;
  const auto n = static_cast<Index>(topo.n());
  if (v0.size() != n) throw DimensionMismatch("run_communities: seed vector length differs from node count");
  if (topo.self_loops()) throw PreconditionFailed("run_communities: graph must not carry self-loops");

  Matrix w0 = Matrix::Zero(n, n);
  for (const auto& [i, j] : topo.edges()) {
    w0(static_cast<Index>(i), static_cast<Index>(j)) = cfg.edge_weight;
    w0(static_cast<Index>(j), static_cast<Index>(i)) = cfg.edge_weight;
  }
  SimConfig sim;
  sim.mode = Mode::discrete;
  sim.a = cfg.a;
  sim.b = cfg.b;
  sim.blowup_threshold = cfg.threshold;
  sim.max_steps = cfg.max_steps;
  sim.sample_every = std::max<std::size_t>(cfg.max_steps, 1);
  sim.diagnostics = false;
  const Trajectory traj = run_discrete(SystemState::scalar(v0, w0), topo, sim);

  CommunityRun out;
  const SystemState& last = traj.final_state();
  out.final_v = last.v.col(0);
  out.stop_reason = traj.stop_reason;
  out.iterations = static_cast<std::size_t>(traj.stop_time);
  out.components = positive_components(last.w, topo, 0.0);
  if (g.has_labels()) out.score = accuracy(out.final_v, g.labels);
  return out;
}

}  // namespace coevo
