#include "coevo/balance.hpp"

#include "coevo/trajectory_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coevo {

namespace {

void require_scalar_ties(const Matrix& w, const GraphTopology& g, const char* who) {
  const auto n = static_cast<Index>(g.n());
  if (w.rows() != n || w.cols() != n) {
    throw DimensionMismatch(std::string(who) + ": tie matrix is " + std::to_string(w.rows()) + "x" +
                            std::to_string(w.cols()) + " but the graph has " + std::to_string(n) + " nodes");
  }
}

int sign_with_dead_zone(double x, double eps) {
  if (x > eps) return 1;
  if (x < -eps) return -1;
  return 0;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

nlohmann::json node_set_json(const NodeSet& s) { return nlohmann::json(s); }

}  // namespace

double default_balance_eps(const Matrix& w) {
  const double scale = w.size() == 0 ? 0.0 : w.cwiseAbs().maxCoeff();
  return scale > 0.0 ? 1e-9 * scale : 1e-300;
}

BalanceReport check_balance(const Matrix& w, const GraphTopology& g, double eps) {
  require_scalar_ties(w, g, "check_balance");
  const double cut = eps * eps * eps;
  BalanceReport r;
  g.for_each_triangle([&](std::size_t i, std::size_t j, std::size_t k) {
    const auto a = static_cast<Index>(i), b = static_cast<Index>(j), c = static_cast<Index>(k);
    const double p = w(a, b) * w(b, c) * w(c, a);
    ++r.triangle_count;
    r.min_product = std::min(r.min_product, p);
    if (std::abs(p) <= cut) {
      ++r.near_zero_count;
      r.strict = false;
    } else if (p < 0.0) {
      r.violating_triangles.push_back({i, j, k});
      r.strict = false;
      r.weak = false;
    }
    return true;
  });
  return r;
}

bool is_weakly_balanced(const Matrix& w, const GraphTopology& g, double eps) {
  require_scalar_ties(w, g, "is_weakly_balanced");
  const double cut = eps * eps * eps;
  bool weak = true;
  g.for_each_triangle([&](std::size_t i, std::size_t j, std::size_t k) {
    const auto a = static_cast<Index>(i), b = static_cast<Index>(j), c = static_cast<Index>(k);
    weak = w(a, b) * w(b, c) * w(c, a) >= -cut;
    return weak;
  });
  return weak;
}

Partition partition(const SymmetricMatrix& w, double eps) {
  const SpectralDecomposition d = eigh(w);
  Partition p;
  p.u = d.u.col(0);
  p.leading_eigenvalue = d.eigenvalues(0);
  // Gap tolerance relative to the spectrum scale.
  const double scale = d.eigenvalues.cwiseAbs().maxCoeff();
  p.gap = eig_gap(d, 1e-10 * std::max(scale, 1e-300));
  for (Index i = 0; i < p.u.size(); ++i) {
    const auto node = static_cast<std::size_t>(i);
    switch (sign_with_dead_zone(p.u(i), eps)) {
      case 1:
        p.plus.push_back(node);
        break;
      case -1:
        p.minus.push_back(node);
        break;
      default:
        p.zero.push_back(node);
    }
  }
  return p;
}

double partition_sign_agreement(const Partition& p, const Matrix& w, const GraphTopology& g) {
  require_scalar_ties(w, g, "partition_sign_agreement");
  std::size_t total = 0;
  std::size_t agree = 0;
  auto score = [&](Index i, Index j) {
    ++total;
    const int expected = sign_with_dead_zone(p.u(i), kPartitionDeadZone) * sign_with_dead_zone(p.u(j), kPartitionDeadZone);
    const int actual = w(i, j) > 0.0 ? 1 : (w(i, j) < 0.0 ? -1 : 0);
    if (expected != 0 && expected == actual) ++agree;
  };
  for (const auto& [i, j] : g.edges()) {
    score(static_cast<Index>(i), static_cast<Index>(j));
    score(static_cast<Index>(j), static_cast<Index>(i));
  }
  if (g.self_loops()) {
    for (Index i = 0; i < w.rows(); ++i) score(i, i);
  }
  return total == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(total);
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::harmony:
      return "harmony";
    case Outcome::polarization:
      return "polarization";
    case Outcome::multi_community:
      return "multi_community";
    case Outcome::neutral_collapse:
      return "neutral_collapse";
    case Outcome::undecided:
      return "undecided";
  }
  return "unknown";
}

std::vector<NodeSet> positive_components(const Matrix& w, const GraphTopology& g, double eps) {
  require_scalar_ties(w, g, "positive_components");
  DisjointSets sets(g.n());
  for (const auto& [i, j] : g.edges()) {
    if (w(static_cast<Index>(i), static_cast<Index>(j)) > eps) sets.unite(i, j);
  }
  std::vector<NodeSet> out;
  std::vector<std::size_t> slot(g.n(), g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == g.n()) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(i);
  }
  return out;
}

OutcomeClass classify(const Trajectory& traj, const GraphTopology& g, double eps) {
  if (traj.samples.empty()) throw PreconditionFailed("classify: empty trajectory");
  const SystemState& last = traj.final_state();
  OutcomeClass o;
  o.stop_reason = traj.stop_reason;
  o.final_norm_v = std::sqrt(last.v.squaredNorm());

  if (traj.stop_reason == StopReason::opinion_collapse || o.final_norm_v < kCollapseFloor) {
    o.kind = Outcome::neutral_collapse;
    return o;
  }
  if (last.m() != 1) throw DimensionMismatch("classify: scalar opinions required");
  o.balance = check_balance(last.w, g, eps);
  if (traj.stop_reason != StopReason::blowup || !o.balance.weak) return o;

  bool all_nonnegative = true;
  for (const auto& [i, j] : g.edges()) {
    if (last.w(static_cast<Index>(i), static_cast<Index>(j)) < -eps) {
      all_nonnegative = false;
      break;
    }
  }
  if (all_nonnegative) {
    NodeSet everyone(g.n());
    std::iota(everyone.begin(), everyone.end(), 0);
    o.communities.push_back(std::move(everyone));
    o.kind = Outcome::harmony;
    return o;
  }
  o.communities = positive_components(last.w, g, eps);
  if (o.communities.size() == 2) {
    o.kind = Outcome::polarization;
  } else if (o.communities.size() > 2 && !g.is_complete()) {
    o.kind = Outcome::multi_community;
  } else {
    o.communities.clear();
  }
  return o;
}

SignStability sign_stability(const Trajectory& traj, double eps) {
  if (traj.samples.size() < 2) throw PreconditionFailed("sign_stability: need at least two samples");
  const Matrix& final_w = traj.final_state().w;
  const Index rows = final_w.rows();
  const Index cols = final_w.cols();
  SignStability s;
  s.time = Matrix::Constant(rows, cols, traj.samples.front().t);
  s.neutral.resize(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const int final_sign = sign_with_dead_zone(final_w(r, c), eps);
      s.neutral(r, c) = final_sign == 0;
      // Walk back until the sign differs; the next sample starts the final run.
      for (std::size_t k = traj.samples.size() - 1; k-- > 0;) {
        if (sign_with_dead_zone(traj.samples[k].w(r, c), eps) != final_sign) {
          s.time(r, c) = traj.samples[k + 1].t;
          break;
        }
      }
    }
  }
  s.latest = s.time.size() == 0 ? traj.samples.front().t : s.time.maxCoeff();
  return s;
}

nlohmann::json to_json(const BalanceReport& r) {
  nlohmann::json tri = nlohmann::json::array();
  for (const auto& t : r.violating_triangles) tri.push_back({t[0], t[1], t[2]});
  return {{"min_product", number_json(r.min_product)},
          {"triangle_count", r.triangle_count},
          {"near_zero_count", r.near_zero_count},
          {"strict", r.strict},
          {"weak", r.weak},
          {"violating_triangles", std::move(tri)}};
}

nlohmann::json to_json(const Partition& p) {
  return {{"plus", node_set_json(p.plus)},
          {"minus", node_set_json(p.minus)},
          {"zero", node_set_json(p.zero)},
          {"gap", number_json(p.gap.gap)},
          {"unique_leading_eigenvalue", p.gap.unique},
          {"leading_eigenvalue", number_json(p.leading_eigenvalue)},
          {"reliable", p.reliable()}};
}

nlohmann::json to_json(const OutcomeClass& o) {
  nlohmann::json comms = nlohmann::json::array();
  for (const auto& c : o.communities) comms.push_back(node_set_json(c));
  return {{"class", std::string(to_string(o.kind))},
          {"communities", std::move(comms)},
          {"stop_reason", std::string(to_string(o.stop_reason))},
          {"final_norm_v", number_json(o.final_norm_v)},
          {"balance", to_json(o.balance)}};
}

}  // namespace coevo
