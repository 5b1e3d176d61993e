#include "support.hpp"

#include <coevo/analysis.hpp>
#include <coevo/invariants.hpp>
#include <coevo/sweep.hpp>

#include <gtest/gtest.h>

#include <atomic>
#include <sstream>

namespace coevo {
namespace {

TEST(Battery, DefaultRandomRunPasses) {
  Pcg32 rng(1);
  const Vector v0 = testing::random_vector(4, rng);
  const Matrix w0 = testing::random_symmetric(4, rng);
  const BatteryReport r = run_invariant_battery(v0, w0);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " residual " << c.residual;
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.check("eigenvector").skipped);
}

TEST(Battery, EigenvectorStartIsChecked) {
  Vector v0(3);
  v0 << 0.6, -0.3, 0.2;
  const Matrix w0 = 0.5 * Matrix::Identity(3, 3) + v0 * v0.transpose();
  const BatteryReport r = run_invariant_battery(v0, w0);
  EXPECT_FALSE(r.check("eigenvector").skipped);
  EXPECT_TRUE(r.check("eigenvector").passed);
  EXPECT_TRUE(r.passed());
}

TEST(Battery, AsymmetricStartSkipsSymmetricOnlyChecks) {
  Pcg32 rng(2);
  const Vector v0 = testing::random_vector(3, rng);
  const Matrix w0 = testing::random_matrix(3, 3, rng);
  const BatteryReport r = run_invariant_battery(v0, w0);
  EXPECT_TRUE(r.check("symmetry").skipped);
  EXPECT_FALSE(r.check("symmetry").note.empty());
  EXPECT_TRUE(r.check("riccati").skipped);
}

TEST(Battery, MidstreamPerturbationBreaksRiccati) {
  Pcg32 rng(3);
  const Vector v0 = testing::random_vector(4, rng);
  const Matrix w0 = testing::random_symmetric(4, rng);
  BatteryConfig cfg;
  cfg.perturb_midstream = true;
  const BatteryReport r = run_invariant_battery(v0, w0, cfg);
  EXPECT_FALSE(r.check("riccati").passed);
  EXPECT_FALSE(r.passed());
}

TEST(DissonanceGradient, MatchesRhsOnSparseGraphs) {
  Pcg32 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const GraphTopology g = GraphTopology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
    Matrix v = testing::random_matrix(4, 2, rng);
    Matrix w = testing::random_matrix(8, 8, rng);
    w = 0.5 * (w + w.transpose()).eval();
    EXPECT_LT(dissonance_gradient_error(SystemState(0.0, v, w), g), 1e-6);
  }
}

TEST(DissonanceGradient, RejectsSelfLoops) {
  const SystemState s = SystemState::scalar(Vector::Ones(2), Matrix::Identity(2, 2));
  EXPECT_THROW(dissonance_gradient_error(s, GraphTopology::complete(2, true)), SelfLoopPresent);
}

TEST(ParallelFor, VisitsEveryIndexAndRethrowsLowestFailure) {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](std::size_t i) { sum += static_cast<int>(i); });
  EXPECT_EQ(sum.load(), 4950);
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL() << "expected rethrow";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(ConvergenceSweep, LargerOpinionsConvergeFaster) {
  SweepFamily small, large;
  small.sizes = large.sizes = {8};
  small.samples_per_size = large.samples_per_size = 1;
  small.norm_sq = 1.0;
  large.norm_sq = 4.0;
  SimConfig cfg;
  const auto slow = convergence_sweep(small, cfg, 1);
  const auto fast = convergence_sweep(large, cfg, 1);
  ASSERT_EQ(slow[0].stop_reason, StopReason::blowup);
  EXPECT_LT(fast[0].iterations, slow[0].iterations);
  EXPECT_NEAR(fast[0].pos_eig, 4.0, 1e-12);
}

TEST(ConvergenceSweep, ZeroOpinionRowNeverConverges) {
  SweepFamily f;
  f.sizes = {4};
  f.samples_per_size = 2;
  f.v_low = f.v_high = 0.0;
  SimConfig cfg;
  cfg.max_steps = 100;
  for (const SweepRow& r : convergence_sweep(f, cfg)) {
    EXPECT_EQ(r.stop_reason, StopReason::max_steps);
    EXPECT_EQ(r.iterations, 100u);
  }
}

TEST(ConvergenceSweep, SizeBarelyMattersAtFixedNorm) {
  SweepFamily f;
  f.sizes = {8, 16, 32};
  f.samples_per_size = 5;
  f.norm_sq = 2.0;
  const auto rows = convergence_sweep(f, SimConfig{});
  std::size_t lo = rows[0].iterations, hi = rows[0].iterations;
  for (const auto& r : rows) {
    lo = std::min(lo, r.iterations);
    hi = std::max(hi, r.iterations);
  }
  EXPECT_LE(hi, 2 * lo);
}

TEST(ConvergenceSweep, RankCorrelationAndCsv) {
  SweepFamily f;
  f.sizes = {16};
  f.samples_per_size = 20;
  f.base_seed = 100;
  const auto rows = convergence_sweep(f, SimConfig{});
  std::vector<double> eig, its;
  for (const auto& r : rows) {
    eig.push_back(r.pos_eig);
    its.push_back(static_cast<double>(r.iterations));
  }
  EXPECT_LT(spearman(eig, its), -0.9);
  EXPECT_EQ(rows[3].seed, 103u);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "seed,n,pos_eig,iterations,stop_reason");
  // Rows are reproducible regardless of worker count.
  const auto serial = convergence_sweep(f, SimConfig{}, 1);
  for (std::size_t k = 0; k < rows.size(); ++k) EXPECT_EQ(serial[k].iterations, rows[k].iterations);
}

}  // namespace
}  // namespace coevo
