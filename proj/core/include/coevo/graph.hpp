#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace coevo {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected interaction graph. Edges are stored once with i < j, sorted.
/// A complete topology carries no explicit edge list.
class GraphTopology {
 public:
  GraphTopology() = default;

  /// Every pair i != j is an edge; self-loop terms follow `self_loops`.
  static GraphTopology complete(std::size_t n, bool self_loops = true);

  /// Explicit edge list. Pairs are normalised to i < j. Throws
  /// PreconditionFailed on duplicates, on i == j, or on indices >= n.
  static GraphTopology from_edges(std::size_t n, std::vector<Edge> edges, bool self_loops = false);

  std::size_t n() const noexcept { return n_; }
  bool is_complete() const noexcept { return complete_; }
  bool self_loops() const noexcept { return self_loops_; }

  /// Edge count excluding self-loops.
  std::size_t edge_count() const noexcept;
  bool has_edge(std::size_t i, std::size_t j) const;

  /// Sorted neighbours of i (excluding i). Materialised for complete graphs too.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }

  /// All edges with i < j. For complete graphs this enumerates every pair.
  std::vector<Edge> edges() const;

  GraphTopology with_self_loops(bool on) const;

  /// Calls fn(i, j, k) for every triangle i < j < k whose three edges are
  /// in the graph. Stops early when fn returns false.
  template <class Fn>
  void for_each_triangle(Fn&& fn) const;

 private:
  std::size_t n_ = 0;
  bool complete_ = false;
  bool self_loops_ = false;
  std::vector<std::vector<std::size_t>> adjacency_;
};

template <class Fn>
void GraphTopology::for_each_triangle(Fn&& fn) const {
  if (complete_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        for (std::size_t k = j + 1; k < n_; ++k)
          if (!fn(i, j, k)) return;
    return;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const auto& ai = adjacency_[i];
    for (const std::size_t j : ai) {
      if (j <= i) continue;
      const auto& aj = adjacency_[j];
      // Sorted-list intersection restricted to k > j.
      auto pi = ai.begin();
      auto pj = aj.begin();
      while (pi != ai.end() && pj != aj.end()) {
        if (*pi < *pj) {
          ++pi;
        } else if (*pj < *pi) {
          ++pj;
        } else {
          if (*pi > j && !fn(i, j, *pi)) return;
          ++pi;
          ++pj;
        }
      }
    }
  }
}

}  // namespace coevo
