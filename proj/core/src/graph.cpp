#include "coevo/graph.hpp"

#include "coevo/errors.hpp"

#include <algorithm>
#include <string>

namespace coevo {

GraphTopology GraphTopology::complete(std::size_t n, bool self_loops) {
  GraphTopology g;
  g.n_ = n;
  g.complete_ = true;
  g.self_loops_ = self_loops;
  g.adjacency_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.adjacency_[i].reserve(n > 0 ? n - 1 : 0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) g.adjacency_[i].push_back(j);
  }
  return g;
}

GraphTopology GraphTopology::from_edges(std::size_t n, std::vector<Edge> edges, bool self_loops) {
  for (auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      throw PreconditionFailed("GraphTopology: edge (" + std::to_string(i) + "," + std::to_string(j) +
                               ") out of range for n=" + std::to_string(n));
    }
    if (i == j) throw PreconditionFailed("GraphTopology: self-loop edge " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (const auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw PreconditionFailed("GraphTopology: duplicate edge (" + std::to_string(dup->first) + "," +
                             std::to_string(dup->second) + ")");
  }
  GraphTopology g;
  g.n_ = n;
  g.complete_ = n > 0 && edges.size() == n * (n - 1) / 2;
  g.self_loops_ = self_loops;
  g.adjacency_.resize(n);
  for (const auto& [i, j] : edges) {
    g.adjacency_[i].push_back(j);
    g.adjacency_[j].push_back(i);
  }
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

std::size_t GraphTopology::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

bool GraphTopology::has_edge(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) return false;
  if (i == j) return self_loops_;
  if (complete_) return true;
  const auto& adj = adjacency_[i];
  return std::binary_search(adj.begin(), adj.end(), j);
}

std::vector<Edge> GraphTopology::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < n_; ++i)
    for (const std::size_t j : adjacency_[i])
      if (j > i) out.emplace_back(i, j);
  return out;
}

GraphTopology GraphTopology::with_self_loops(bool on) const {
  GraphTopology g = *this;
  g.self_loops_ = on;
  return g;
}

}  // namespace coevo
