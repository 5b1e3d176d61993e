#pragma once

#include "coevo/graph.hpp"
#include "coevo/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coevo {

/// G(n, p): pairs i < j visited in lexicographic order, each kept when a
/// uniform draw falls below p.
GraphTopology erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Ring lattice with k nearest neighbours (k even, k < n), then for each
/// offset 1..k/2 and each node u in order, edge (u, u+offset) is rewired with
/// probability p to (u, w) for a uniform non-neighbour w != u. Throws InvalidK.
GraphTopology watts_strogatz(std::size_t n, std::size_t k, double p, std::uint64_t seed);

enum class EdgeFormat { whitespace_pairs, csv };
enum class DirectedPolicy { symmetrize, reject };

struct LabeledGraph {
  GraphTopology topology;
  /// Per node: +1, −1, or 0 for unknown. Empty when no label file was read.
  std::vector<int> labels;
  /// Original identifier of each dense index.
  std::vector<std::string> names;
  bool directed_input = false;
  std::size_t input_edges = 0;       ///< edge lines read
  std::size_t duplicates_dropped = 0;  ///< repeated or reciprocal pairs
  std::size_t self_loops_dropped = 0;

  bool has_labels() const noexcept { return !labels.empty(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
};

/// Parses an edge list. Blank lines and '#' comments are skipped; a comment
/// line reading "# directed" marks the input as directed, as does any pair
/// listed in both orientations. Identifiers are remapped densely: numeric
/// order when every id is an integer, lexicographic otherwise. Columns past
/// the second (weights, timestamps) are ignored.
/// Throws ParseError and, under DirectedPolicy::reject, RejectedDirected.
LabeledGraph parse_edge_list(std::istream& in, EdgeFormat format, DirectedPolicy policy,
                             const std::string& source = "<stream>");
LabeledGraph load_edge_list(const std::filesystem::path& path, EdgeFormat format, DirectedPolicy policy,
                            const std::optional<std::filesystem::path>& labels_path = std::nullopt);

/// Reads "node,label" rows (optional header) with labels in {−1, 1}.
/// Unknown node names raise ParseError.
void parse_labels(LabeledGraph& g, std::istream& in, const std::string& source = "<stream>");
void load_labels(LabeledGraph& g, const std::filesystem::path& path);

/// {"original id": dense index, ...}
nlohmann::json id_mapping_json(const LabeledGraph& g);

struct SeedAssignment {
  Vector v0;
  std::vector<std::size_t> seeded;  ///< sorted
  double fraction = 0.0;
  std::uint64_t rng_seed = 0;
};

/// Seeds ⌈fraction·n⌉ labelled nodes (capped at the labelled count), drawn
/// uniformly without replacement by a partial Fisher-Yates shuffle, at their
/// label values; all others start at 0. With `explicit_values` (original id →
/// value) exactly those nodes are seeded instead. Throws NoLabels.
SeedAssignment seed_opinions(const LabeledGraph& g, double fraction, std::uint64_t rng_seed,
                             const std::optional<std::map<std::string, double>>& explicit_values = std::nullopt);

struct Accuracy {
  double accuracy = 0.0;
  std::size_t scored = 0;
  std::size_t correct = 0;
  bool flipped = false;  ///< the global sign flip scored better
  /// confusion[truth][prediction], truth ∈ {−1, +1} → {0, 1},
  /// prediction ∈ {−, 0, +} → {0, 1, 2}, after the chosen flip.
  std::size_t confusion[2][3] = {{0, 0, 0}, {0, 0, 0}};
};

/// Sign agreement of final opinions with known labels, maximised over a
/// global flip. Zero opinions count as wrong. Throws NoLabels.
Accuracy accuracy(const Vector& final_v, const std::vector<int>& labels);

nlohmann::json to_json(const Accuracy& a);

}  // namespace coevo
