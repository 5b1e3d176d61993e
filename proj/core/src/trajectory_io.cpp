#include "coevo/trajectory_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace coevo {

namespace {

std::vector<std::pair<Index, Index>> tie_columns(const GraphTopology& g, Index m) {
  std::vector<std::pair<Index, Index>> cols;
  const auto n = static_cast<Index>(g.n());
  if (g.is_complete()) {
    for (Index r = 0; r < n * m; ++r)
      for (Index c = 0; c < n * m; ++c) cols.emplace_back(r, c);
    return cols;
  }
  if (g.self_loops()) {
    for (Index i = 0; i < n; ++i)
      for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) cols.emplace_back(i * m + a, i * m + b);
  }
  for (const auto& [ii, jj] : g.edges()) {
    const auto i = static_cast<Index>(ii);
    const auto j = static_cast<Index>(jj);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) cols.emplace_back(i * m + a, j * m + b);
  }
  return cols;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2); }

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const GraphTopology& g) {
  if (traj.samples.empty()) return;
  const Index m = traj.samples.front().m();
  const Index nm = traj.samples.front().v.size();
  const bool has_w = traj.samples.front().w.size() > 0;
  const auto cols = has_w ? tie_columns(g, m) : std::vector<std::pair<Index, Index>>{};

  os << "t";
  for (Index k = 0; k < nm; ++k) os << ",v_" << k;
  for (const auto& [r, c] : cols) os << ",w_" << r << "_" << c;
  os << ",norm_v_sq,min_triangle_product\n";

  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const SystemState& st = traj.samples[s];
    const Vector x = st.stacked();
    os << format_double(st.t);
    for (Index k = 0; k < nm; ++k) os << ',' << format_double(x(k));
    for (const auto& [r, c] : cols) os << ',' << format_double(st.w(r, c));
    const SampleDiagnostics& d = traj.diagnostics[s];
    os << ',' << format_double(d.norm_v_sq) << ',' << format_double(d.min_triangle_product) << '\n';
  }
}

nlohmann::json trajectory_to_json(const Trajectory& traj, const GraphTopology& g, const nlohmann::json& meta) {
  nlohmann::json out;
  out["meta"] = meta;
  out["stop_reason"] = std::string(to_string(traj.stop_reason));
  out["stop_time"] = number_json(traj.stop_time);
  out["steps"] = traj.steps;
  out["forced_steps"] = traj.forced_steps;
  nlohmann::json samples = nlohmann::json::array();
  if (!traj.samples.empty()) {
    const Index m = traj.samples.front().m();
    const bool has_w = traj.samples.front().w.size() > 0;
    const auto cols = has_w ? tie_columns(g, m) : std::vector<std::pair<Index, Index>>{};
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
      const SystemState& st = traj.samples[s];
      const SampleDiagnostics& d = traj.diagnostics[s];
      nlohmann::json row;
      row["t"] = number_json(st.t);
      nlohmann::json v = nlohmann::json::array();
      const Vector x = st.stacked();
      for (Index k = 0; k < x.size(); ++k) v.push_back(number_json(x(k)));
      row["v"] = std::move(v);
      nlohmann::json w = nlohmann::json::array();
      for (const auto& [r, c] : cols) w.push_back(number_json(st.w(r, c)));
      row["w"] = std::move(w);
      row["norm_v_sq"] = number_json(d.norm_v_sq);
      row["norm_vdot_sq"] = number_json(d.norm_vdot_sq);
      row["min_triangle_product"] = number_json(d.min_triangle_product);
      row["leading_eigenvalue"] = number_json(d.leading_eigenvalue);
      samples.push_back(std::move(row));
    }
  }
  out["samples"] = std::move(samples);
  return out;
}

}  // namespace coevo
