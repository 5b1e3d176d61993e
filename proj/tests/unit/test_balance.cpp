#include "support.hpp"

#include <coevo/balance.hpp>
#include <coevo/dynamics.hpp>

#include <gtest/gtest.h>

#include <algorithm>

namespace coevo {
namespace {

Matrix triangle(double ab, double bc, double ca) {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = ab;
  w(1, 2) = w(2, 1) = bc;
  w(2, 0) = w(0, 2) = ca;
  return w;
}

Trajectory single_sample(const Vector& v, const Matrix& w, StopReason reason) {
  Trajectory t;
  t.samples.push_back(SystemState::scalar(v, w));
  t.diagnostics.emplace_back();
  t.stop_reason = reason;
  return t;
}

// A ±1 pattern on K_n is balanced iff some s ∈ {±1}ⁿ has w_ij = s_i s_j.
bool brute_force_balanced(const Matrix& w) {
  const Index n = w.rows();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (Index i = 0; i < n && ok; ++i)
      for (Index j = i + 1; j < n && ok; ++j) {
        const double si = (mask >> i) & 1u ? -1.0 : 1.0;
        const double sj = (mask >> j) & 1u ? -1.0 : 1.0;
        ok = w(i, j) == si * sj;
      }
    if (ok) return true;
  }
  return false;
}

TEST(CheckBalance, AllPositiveTriangle) {
  const BalanceReport r = check_balance(triangle(1, 1, 1), GraphTopology::complete(3), 1e-9);
  EXPECT_TRUE(r.strict);
  EXPECT_TRUE(r.weak);
  EXPECT_EQ(r.min_product, 1.0);
  EXPECT_EQ(r.triangle_count, 1u);
}

TEST(CheckBalance, EnemyOfEnemyIsBalanced) {
  const BalanceReport r = check_balance(triangle(1, -1, -1), GraphTopology::complete(3), 1e-9);
  EXPECT_TRUE(r.strict);
  EXPECT_EQ(r.min_product, 1.0);
}

TEST(CheckBalance, SingleNegativeEdgeViolates) {
  const BalanceReport r = check_balance(triangle(1, 1, -1), GraphTopology::complete(3), 1e-9);
  EXPECT_FALSE(r.weak);
  EXPECT_FALSE(r.strict);
  EXPECT_EQ(r.min_product, -1.0);
  ASSERT_EQ(r.violating_triangles.size(), 1u);
  EXPECT_EQ(r.violating_triangles[0], (Triangle{0, 1, 2}));
  EXPECT_FALSE(is_weakly_balanced(triangle(1, 1, -1), GraphTopology::complete(3), 1e-9));
}

TEST(CheckBalance, NearZeroProductsAreNeutral) {
  const BalanceReport r = check_balance(triangle(1, 1, -1e-12), GraphTopology::complete(3), 1e-3);
  EXPECT_TRUE(r.weak);
  EXPECT_FALSE(r.strict);
  EXPECT_EQ(r.near_zero_count, 1u);
}

TEST(CheckBalance, MatchesBruteForceOnAllSignPatterns) {
  for (Index n = 3; n <= 5; ++n) {
    const Index pairs = n * (n - 1) / 2;
    for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
      Matrix w = Matrix::Zero(n, n);
      unsigned bit = 0;
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = (mask >> bit++) & 1u ? -1.0 : 1.0;
      const GraphTopology g = GraphTopology::complete(static_cast<std::size_t>(n));
      const bool balanced = brute_force_balanced(w);
      const BalanceReport r = check_balance(w, g, 1e-9);
      ASSERT_EQ(r.strict, balanced);
      ASSERT_EQ(r.weak, balanced);
      ASSERT_EQ(r.violating_triangles.empty(), r.weak);
      ASSERT_EQ(is_weakly_balanced(w, g, 1e-9), balanced);
      if (balanced) {
        ASSERT_LE(positive_components(w, g, 1e-9).size(), 2u);
      }
    }
  }
}

TEST(CheckBalance, SparseGraphOnlySeesItsTriangles) {
  // Square 0-1-2-3 with diagonal 0-2: triangles {0,1,2} and {0,2,3}.
  const GraphTopology g = GraphTopology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
  Matrix w = Matrix::Constant(4, 4, 1.0);
  w(1, 3) = w(3, 1) = -1.0;  // not an edge
  EXPECT_EQ(check_balance(w, g, 1e-9).triangle_count, 2u);
  EXPECT_TRUE(check_balance(w, g, 1e-9).strict);
}

TEST(Partition, RankOneSignSplit) {
  Vector v(3);
  v << 1.0, -1.0, 1.0;
  const Partition p = partition(SymmetricMatrix::outer(v));
  EXPECT_EQ(p.plus, (NodeSet{0, 2}));
  EXPECT_EQ(p.minus, (NodeSet{1}));
  EXPECT_TRUE(p.zero.empty());
  EXPECT_TRUE(p.reliable());
}

TEST(Partition, IdentityIsUnreliable) {
  const Partition p = partition(SymmetricMatrix::identity(4));
  EXPECT_FALSE(p.gap.unique);
  EXPECT_FALSE(p.reliable());
}

TEST(Partition, ScaleInvariantAndCoversAllNodes) {
  Pcg32 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.bounded(8));
    const SymmetricMatrix w(testing::random_symmetric(n, rng));
    const Partition p = partition(w);
    const Partition q = partition(SymmetricMatrix(rng.uniform(0.1, 50.0) * w.matrix()));
    EXPECT_EQ(p.plus, q.plus);
    EXPECT_EQ(p.minus, q.minus);
    EXPECT_EQ(p.plus.size() + p.minus.size() + p.zero.size(), static_cast<std::size_t>(n));
  }
}

TEST(Partition, SignAgreementOnRankOne) {
  Vector v(4);
  v << 2.0, -1.0, 0.5, -3.0;
  const Matrix w = v * v.transpose();
  const Partition p = partition(SymmetricMatrix(w));
  EXPECT_EQ(partition_sign_agreement(p, w, GraphTopology::complete(4, false)), 1.0);
  Matrix flipped = w;
  flipped(0, 1) = flipped(1, 0) = 1.0;
  EXPECT_NEAR(partition_sign_agreement(p, flipped, GraphTopology::complete(4, false)), 10.0 / 12.0, 1e-15);
}

TEST(Classify, Harmony) {
  const Trajectory t = single_sample(Vector::Ones(3), Matrix::Constant(3, 3, 5.0), StopReason::blowup);
  const OutcomeClass o = classify(t, GraphTopology::complete(3), 1e-9);
  EXPECT_EQ(o.kind, Outcome::harmony);
  ASSERT_EQ(o.communities.size(), 1u);
  EXPECT_EQ(o.communities[0].size(), 3u);
}

TEST(Classify, PolarizationOnCompleteGraph) {
  Vector v(4);
  v << 1.0, 2.0, -1.0, -0.5;
  const Trajectory t = single_sample(v, v * v.transpose(), StopReason::blowup);
  const OutcomeClass o = classify(t, GraphTopology::complete(4), 1e-9);
  EXPECT_EQ(o.kind, Outcome::polarization);
  ASSERT_EQ(o.communities.size(), 2u);
  EXPECT_EQ(o.communities[0], (NodeSet{0, 1}));
  EXPECT_EQ(o.communities[1], (NodeSet{2, 3}));
}

TEST(Classify, MultiCommunityAcrossNegativeBridges) {
  // Three positive pairs joined in a path by negative bridges.
  const GraphTopology g = GraphTopology::from_edges(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  Matrix w = Matrix::Zero(6, 6);
  const double vals[] = {1.0, -1.0, 1.0, -1.0, 1.0};
  for (Index k = 0; k < 5; ++k) w(k, k + 1) = w(k + 1, k) = vals[k];
  const OutcomeClass o = classify(single_sample(Vector::Ones(6), w, StopReason::blowup), g, 1e-9);
  EXPECT_EQ(o.kind, Outcome::multi_community);
  EXPECT_EQ(o.communities.size(), 3u);
}

TEST(Classify, NeutralAndUndecided) {
  const Trajectory collapsed = single_sample(Vector::Zero(3), Matrix::Identity(3, 3), StopReason::max_steps);
  EXPECT_EQ(classify(collapsed, GraphTopology::complete(3), 1e-9).kind, Outcome::neutral_collapse);
  const Trajectory unbalanced = single_sample(Vector::Ones(3), triangle(1, 1, -1), StopReason::blowup);
  EXPECT_EQ(classify(unbalanced, GraphTopology::complete(3), 1e-9).kind, Outcome::undecided);
  const Trajectory unfinished = single_sample(Vector::Ones(3), triangle(1, 1, 1), StopReason::max_steps);
  EXPECT_EQ(classify(unfinished, GraphTopology::complete(3), 1e-9).kind, Outcome::undecided);
}

TEST(Classify, DiscreteRunFromIdentityPolarizes) {
  Pcg32 rng(77);
  SimConfig cfg;
  cfg.mode = Mode::discrete;
  const GraphTopology g = GraphTopology::complete(10);
  const Trajectory t = run_discrete(SystemState::scalar(testing::random_vector(10, rng), Matrix::Identity(10, 10)), g, cfg);
  ASSERT_EQ(t.stop_reason, StopReason::blowup);
  const OutcomeClass o = classify(t, g, default_balance_eps(t.final_state().w));
  EXPECT_EQ(o.kind, Outcome::polarization);
  // Camps follow the sign of the final opinions.
  for (const std::size_t i : o.communities[0])
    for (const std::size_t j : o.communities[1])
      EXPECT_LT(t.final_state().v(static_cast<Index>(i), 0) * t.final_state().v(static_cast<Index>(j), 0), 0.0);
}

TEST(SignStability, ConstantTrajectory) {
  Trajectory t = single_sample(Vector::Ones(2), Matrix::Identity(2, 2), StopReason::max_steps);
  t.samples.push_back(t.samples[0]);
  t.samples.back().t = 3.0;
  const SignStability s = sign_stability(t, 1e-9);
  EXPECT_EQ(s.latest, 0.0);
  EXPECT_TRUE(s.neutral(0, 1));
  EXPECT_FALSE(s.neutral(0, 0));
}

TEST(SignStability, ReportsLastSignChange) {
  Trajectory t;
  const double values[] = {1.0, -1.0, 2.0, 3.0};
  for (int k = 0; k < 4; ++k) {
    Matrix w = Matrix::Constant(1, 1, values[k]);
    t.samples.push_back(SystemState::scalar(Vector::Ones(1), w, k));
  }
  const SignStability s = sign_stability(t, 1e-9);
  EXPECT_EQ(s.time(0, 0), 2.0);
  EXPECT_EQ(s.latest, 2.0);
  EXPECT_THROW(sign_stability(single_sample(Vector::Ones(1), Matrix::Ones(1, 1), StopReason::blowup), 1e-9),
               PreconditionFailed);
}

}  // namespace
}  // namespace coevo
