#pragma once

#include <coevo/dynamics.hpp>
#include <coevo/graphio.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace coevo::cli {

/// Everything a command needs, as typed on the command line or read from a
/// config file. Init specs:
///   --w0  identity | zero | scaled:C | rank_one | random_symmetric[:R] |
///         random[:R] | edge:VALUE | file:PATH
///   --v0  random[:R] | random:LO:HI | zeros | ones | file:PATH
/// --graph complete | er | ws | file (with --graph-file, optional --labels).
struct RunConfig {
  std::string mode = "continuous";
  std::size_t n = 4;
  std::string graph = "complete";
  double p = 0.3;
  std::size_t k = 4;
  std::string graph_file;
  std::string labels_file;
  std::string edge_format = "whitespace";
  std::string directed = "symmetrize";
  bool self_loops = true;  ///< complete graphs only
  std::string w0 = "identity";
  std::string v0 = "random";
  double a = 0.01;
  double b = 0.01;
  double dt = 1e-3;
  double threshold = 1e20;
  std::size_t max_steps = 10'000'000;
  std::size_t sample_every = 1;
  double tol = 0.1;
  double t_end = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  std::string out = ".";
  std::size_t workers = 0;
  double eps = 0.0;  ///< 0 selects the scale-aware default

  /// Throws PreconditionFailed on any inconsistent field.
  void validate() const;
  SimConfig sim() const;
};

struct ResolvedRun {
  GraphTopology graph;
  std::optional<LabeledGraph> labeled;
  SystemState initial;
};

/// Builds the graph and the initial state. Graph draws use Pcg32(seed);
/// opinions use its stream 1 and random ties its stream 2.
ResolvedRun resolve(const RunConfig& cfg);

Matrix read_matrix(const std::string& path);
Vector read_vector(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace coevo::cli
