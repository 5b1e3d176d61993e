#include "coevo/graphio.hpp"

#include "coevo/errors.hpp"
#include "coevo/rng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace coevo {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<long long> parse_integer(const std::string& s) {
  long long value = 0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionFailed(std::string(who) + ": p must lie in [0, 1]");
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

}  // namespace

GraphTopology erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p, "erdos_renyi");
  Pcg32 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) edges.emplace_back(i, j);
  return GraphTopology::from_edges(n, std::move(edges));
}

GraphTopology watts_strogatz(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  if (k % 2 != 0 || k >= n) {
    throw InvalidK("watts_strogatz: k must be even and below n (k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                   ")");
  }
  check_probability(p, "watts_strogatz");
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t off = 1; off <= k / 2; ++off) {
      const std::size_t v = (u + off) % n;
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }
  Pcg32 rng(seed);
  for (std::size_t off = 1; off <= k / 2; ++off) {
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t v = (u + off) % n;
      if (!(rng.uniform() < p)) continue;
      if (adj[u].size() >= n - 1) continue;
      std::size_t w = 0;
      do {
        w = rng.bounded(static_cast<std::uint32_t>(n));
      } while (w == u || adj[u].count(w) != 0);
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  }
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (const std::size_t v : adj[u])
      if (u < v) edges.emplace_back(u, v);
  return GraphTopology::from_edges(n, std::move(edges));
}

std::optional<std::size_t> LabeledGraph::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

LabeledGraph parse_edge_list(std::istream& in, EdgeFormat format, DirectedPolicy policy, const std::string& source) {
  LabeledGraph out;
  std::vector<std::pair<std::string, std::string>> raw;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = format == EdgeFormat::csv;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::string body = trim(text.substr(1));
      std::transform(body.begin(), body.end(), body.begin(), [](unsigned char c) { return std::tolower(c); });
      if (body == "directed") out.directed_input = true;
      continue;
    }
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = format == EdgeFormat::csv ? split_csv(text) : split_ws(text);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(source, line_no, "expected two node identifiers");
    }
    raw.emplace_back(fields[0], fields[1]);
  }
  out.input_edges = raw.size();

  std::vector<std::string> ids;
  for (const auto& [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  const bool numeric = std::all_of(ids.begin(), ids.end(), [](const std::string& s) { return parse_integer(s).has_value(); });
  if (numeric) {
    std::sort(ids.begin(), ids.end(),
              [](const std::string& a, const std::string& b) { return *parse_integer(a) < *parse_integer(b); });
    ids.erase(std::unique(ids.begin(), ids.end(),
                          [](const std::string& a, const std::string& b) { return *parse_integer(a) == *parse_integer(b); }),
              ids.end());
  } else {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  // Numeric ids such as "07" and "7" name the same node.
  auto lookup = [&](const std::string& s) {
    const auto it = index.find(s);
    if (it != index.end()) return it->second;
    const long long v = *parse_integer(s);
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (*parse_integer(ids[i]) == v) return i;
    return ids.size();
  };

  std::set<Edge> arcs;
  std::set<Edge> undirected;
  for (const auto& [a, b] : raw) {
    const std::size_t i = lookup(a);
    const std::size_t j = lookup(b);
    if (i == j) {
      ++out.self_loops_dropped;
      continue;
    }
    if (arcs.count({j, i}) != 0 && arcs.count({i, j}) == 0) out.directed_input = true;
    arcs.insert({i, j});
    if (!undirected.insert({std::min(i, j), std::max(i, j)}).second) ++out.duplicates_dropped;
  }
  if (out.directed_input && policy == DirectedPolicy::reject) {
    throw RejectedDirected(source + ": input is directed and the reject policy is active");
  }
  out.names = std::move(ids);
  out.topology = GraphTopology::from_edges(out.names.size(), std::vector<Edge>(undirected.begin(), undirected.end()));
  return out;
}

LabeledGraph load_edge_list(const std::filesystem::path& path, EdgeFormat format, DirectedPolicy policy,
                            const std::optional<std::filesystem::path>& labels_path) {
  std::ifstream in = open_or_throw(path);
  LabeledGraph g = parse_edge_list(in, format, policy, path.string());
  if (labels_path) load_labels(g, *labels_path);
  return g;
}

void parse_labels(LabeledGraph& g, std::istream& in, const std::string& source) {
  std::vector<int> labels(g.names.size(), 0);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split_csv(text);
    if (fields.size() < 2) throw ParseError(source, line_no, "expected node,label");
    const auto label = parse_integer(fields[1]);
    if (first && !label) {
      first = false;
      continue;
    }
    first = false;
    if (!label || (*label != 1 && *label != -1)) throw ParseError(source, line_no, "label must be -1 or 1");
    const auto idx = g.index_of(fields[0]);
    if (!idx) throw ParseError(source, line_no, "unknown node '" + fields[0] + "'");
    labels[*idx] = static_cast<int>(*label);
  }
  g.labels = std::move(labels);
}

void load_labels(LabeledGraph& g, const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  parse_labels(g, in, path.string());
}

nlohmann::json id_mapping_json(const LabeledGraph& g) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < g.names.size(); ++i) out[g.names[i]] = i;
  return out;
}

SeedAssignment seed_opinions(const LabeledGraph& g, double fraction, std::uint64_t rng_seed,
                             const std::optional<std::map<std::string, double>>& explicit_values) {
  const std::size_t n = g.topology.n();
  SeedAssignment out;
  out.v0 = Vector::Zero(static_cast<Index>(n));
  out.rng_seed = rng_seed;
  if (explicit_values) {
    for (const auto& [name, value] : *explicit_values) {
      const auto idx = g.index_of(name);
      if (!idx) throw PreconditionFailed("seed_opinions: unknown node '" + name + "'");
      out.v0(static_cast<Index>(*idx)) = value;
      out.seeded.push_back(*idx);
    }
    std::sort(out.seeded.begin(), out.seeded.end());
    out.fraction = n == 0 ? 0.0 : static_cast<double>(out.seeded.size()) / static_cast<double>(n);
    return out;
  }
  if (!g.has_labels()) throw NoLabels("seed_opinions: graph has no labels");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw PreconditionFailed("seed_opinions: fraction must lie in [0, 1]");

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i)
    if (g.labels[i] != 0) pool.push_back(i);
  const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  const std::size_t count = std::min(wanted, pool.size());
  Pcg32 rng(rng_seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.bounded(static_cast<std::uint32_t>(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  out.seeded.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(out.seeded.begin(), out.seeded.end());
  for (const std::size_t i : out.seeded) out.v0(static_cast<Index>(i)) = g.labels[i];
  out.fraction = fraction;
  return out;
}

Accuracy accuracy(const Vector& final_v, const std::vector<int>& labels) {
  if (labels.empty()) throw NoLabels("accuracy: no labels");
  if (static_cast<std::size_t>(final_v.size()) != labels.size()) {
    throw DimensionMismatch("accuracy: opinion and label counts differ");
  }
  Accuracy a;
  std::size_t plain = 0;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) continue;
    ++a.scored;
    const double v = final_v(static_cast<Index>(i));
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == labels[i]) ++plain;
    if (-s == labels[i] && s != 0) ++flipped;
  }
  if (a.scored == 0) throw NoLabels("accuracy: no labelled nodes");
  a.flipped = flipped > plain;
  a.correct = std::max(plain, flipped);
  a.accuracy = static_cast<double>(a.correct) / static_cast<double>(a.scored);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) continue;
    double v = final_v(static_cast<Index>(i));
    if (a.flipped) v = -v;
    const int pred = v > 0.0 ? 2 : (v < 0.0 ? 0 : 1);
    ++a.confusion[labels[i] > 0 ? 1 : 0][pred];
  }
  return a;
}

nlohmann::json to_json(const Accuracy& a) {
  return {{"accuracy", a.accuracy},
          {"scored", a.scored},
          {"correct", a.correct},
          {"flipped", a.flipped},
          {"confusion",
           {{"truth_minus", {{"pred_minus", a.confusion[0][0]}, {"pred_zero", a.confusion[0][1]}, {"pred_plus", a.confusion[0][2]}}},
            {"truth_plus", {{"pred_minus", a.confusion[1][0]}, {"pred_zero", a.confusion[1][1]}, {"pred_plus", a.confusion[1][2]}}}}}};
}

}  // namespace coevo
