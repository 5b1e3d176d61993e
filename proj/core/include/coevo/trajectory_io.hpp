#pragma once

#include "coevo/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace coevo {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// CSV export. Columns: t, v_0 … v_{n·m−1}, then the tie entries (row-major
/// w_i_j over the full matrix for complete graphs, one w_i_j column per edge
/// i < j otherwise), norm_v_sq, min_triangle_product.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const GraphTopology& g);

/// {"meta": meta, "stop_reason": ..., "stop_time": ..., "steps": ...,
///  "samples": [{"t", "v", "w", "norm_v_sq", "norm_vdot_sq",
///               "min_triangle_product", "leading_eigenvalue"}]}
/// `w` uses the same flattening as the CSV. Non-finite diagnostics are null.
nlohmann::json trajectory_to_json(const Trajectory& traj, const GraphTopology& g, const nlohmann::json& meta);

/// Serialises a double using format_double so output is byte-stable.
nlohmann::json number_json(double x);

/// Dumps with 2-space indentation; doubles already go through number_json.
std::string dump_json(const nlohmann::json& j);

}  // namespace coevo
