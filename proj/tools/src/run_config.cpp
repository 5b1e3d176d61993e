#include "run_config.hpp"

#include <coevo/errors.hpp>
#include <coevo/rng.hpp>
#include <coevo/trajectory_io.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace coevo::cli {

namespace {

struct Spec {
  std::string kind;
  std::string rest;  ///< everything after the first ':'
};

Spec split_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, {}};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw PreconditionFailed(what + ": '" + s + "' is not a number");
  }
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r,") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ParseError(path, line_no, "'" + tok + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector draw_opinions(const std::string& text, Index n, Pcg32 rng) {
  const Spec s = split_spec(text);
  if (s.kind == "zeros") return Vector::Zero(n);
  if (s.kind == "ones") return Vector::Ones(n);
  if (s.kind == "file") {
    Vector v = read_vector(s.rest);
    if (v.size() != n) throw PreconditionFailed("--v0 file has " + std::to_string(v.size()) + " entries, need " + std::to_string(n));
    return v;
  }
  if (s.kind == "random") {
    double lo = -1.0, hi = 1.0;
    if (!s.rest.empty()) {
      const Spec range = split_spec(s.rest);
      if (range.rest.empty()) {
        hi = parse_number(range.kind, "--v0 range");
        lo = -hi;
      } else {
        lo = parse_number(range.kind, "--v0 low");
        hi = parse_number(range.rest, "--v0 high");
      }
    }
    if (!(lo < hi)) throw PreconditionFailed("--v0 range must satisfy low < high");
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
    return v;
  }
  throw PreconditionFailed("--v0: unknown spec '" + text + "'");
}

Matrix build_ties(const std::string& text, const Vector& v0, const GraphTopology& g, Pcg32 rng) {
  const Index n = v0.size();
  const Spec s = split_spec(text);
  if (s.kind == "identity") return Matrix::Identity(n, n);
  if (s.kind == "zero") return Matrix::Zero(n, n);
  if (s.kind == "scaled") return parse_number(s.rest, "--w0 scaled") * Matrix::Identity(n, n);
  if (s.kind == "rank_one") return v0 * v0.transpose();
  if (s.kind == "edge") {
    const double value = parse_number(s.rest, "--w0 edge");
    Matrix w = Matrix::Zero(n, n);
    for (const auto& [i, j] : g.edges()) {
      w(static_cast<Index>(i), static_cast<Index>(j)) = value;
      w(static_cast<Index>(j), static_cast<Index>(i)) = value;
    }
    return w;
  }
  if (s.kind == "random_symmetric" || s.kind == "random") {
    const double r = s.rest.empty() ? 1.0 : parse_number(s.rest, "--w0 range");
    Matrix w(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) w(i, j) = rng.uniform(-r, r);
    if (s.kind == "random_symmetric") {
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < i; ++j) w(i, j) = w(j, i);
    }
    return w;
  }
  if (s.kind == "file") {
    Matrix w = read_matrix(s.rest);
    if (w.rows() != n || w.cols() != n) throw PreconditionFailed("--w0 file must hold an n×n matrix");
    return w;
  }
  throw PreconditionFailed("--w0: unknown spec '" + text + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (mode != "continuous" && mode != "discrete") throw PreconditionFailed("--mode must be continuous or discrete");
  if (graph != "complete" && graph != "er" && graph != "ws" && graph != "file") {
    throw PreconditionFailed("--graph must be complete, er, ws or file");
  }
  if (graph == "file" && graph_file.empty()) throw PreconditionFailed("--graph file needs --graph-file");
  if (graph != "file" && n == 0) throw PreconditionFailed("--n must be positive");
  if (edge_format != "whitespace" && edge_format != "csv") throw PreconditionFailed("--edge-format must be whitespace or csv");
  if (directed != "symmetrize" && directed != "reject") throw PreconditionFailed("--directed must be symmetrize or reject");
  if (!(eps >= 0.0)) throw PreconditionFailed("--eps must be non-negative");
  sim().validate();
}

SimConfig RunConfig::sim() const {
  SimConfig s;
  s.mode = mode == "discrete" ? Mode::discrete : Mode::continuous;
  s.a = a;
  s.b = b;
  s.dt = dt;
  s.blowup_threshold = threshold;
  s.max_steps = max_steps;
  s.sample_every = sample_every;
  s.tol = tol;
  s.t_end = t_end;
  return s;
}

ResolvedRun resolve(const RunConfig& cfg) {
  cfg.validate();
  ResolvedRun run;
  if (cfg.graph == "complete") {
    run.graph = GraphTopology::complete(cfg.n, cfg.self_loops);
  } else if (cfg.graph == "er") {
    run.graph = erdos_renyi(cfg.n, cfg.p, cfg.seed);
  } else if (cfg.graph == "ws") {
    run.graph = watts_strogatz(cfg.n, cfg.k, cfg.p, cfg.seed);
  } else {
    const EdgeFormat fmt = cfg.edge_format == "csv" ? EdgeFormat::csv : EdgeFormat::whitespace_pairs;
    const DirectedPolicy policy = cfg.directed == "reject" ? DirectedPolicy::reject : DirectedPolicy::symmetrize;
    std::optional<std::filesystem::path> labels;
    if (!cfg.labels_file.empty()) labels = cfg.labels_file;
    run.labeled = load_edge_list(cfg.graph_file, fmt, policy, labels);
    run.graph = run.labeled->topology;
  }
  const Pcg32 root(cfg.seed);
  const auto n = static_cast<Index>(run.graph.n());
  const Vector v0 = draw_opinions(cfg.v0, n, root.split(1));
  const Matrix w0 = build_ties(cfg.w0, v0, run.graph, root.split(2));
  run.initial = SystemState::scalar(v0, w0);
  return run;
}

Matrix read_matrix(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw ParseError(path, 0, "empty matrix file");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ParseError(path, i + 1, "ragged matrix row");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

Vector read_vector(const std::string& path) {
  std::vector<double> all;
  for (const auto& row : read_rows(path)) all.insert(all.end(), row.begin(), row.end());
  return Eigen::Map<const Vector>(all.data(), static_cast<Index>(all.size()));
}

nlohmann::json to_json(const RunConfig& cfg) {
  return {{"mode", cfg.mode},
          {"n", cfg.n},
          {"graph", cfg.graph},
          {"p", cfg.p},
          {"k", cfg.k},
          {"graph_file", cfg.graph_file},
          {"labels_file", cfg.labels_file},
          {"edge_format", cfg.edge_format},
          {"directed", cfg.directed},
          {"self_loops", cfg.self_loops},
          {"w0", cfg.w0},
          {"v0", cfg.v0},
          {"a", cfg.a},
          {"b", cfg.b},
          {"dt", cfg.dt},
          {"threshold", cfg.threshold},
          {"max_steps", cfg.max_steps},
          {"sample_every", cfg.sample_every},
          {"tol", cfg.tol},
          {"t_end", number_json(cfg.t_end)},
          {"seed", cfg.seed},
          {"out", cfg.out},
          {"workers", cfg.workers},
          {"eps", cfg.eps}};
}

}  // namespace coevo::cli
