#pragma once

// Trace and metadata serialization for simulation runs.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bearing/analysis.hpp"
#include "bearing/sim.hpp"

namespace bearing {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kTraceSchemaVersion = 1;

/// time, p[i][x..], gain columns, u_norm, delta_norm, bearing_err, min_dist,
/// d_norm. Agents and edge endpoints are 1-based. Gain columns are
/// gamma[i-j] per edge, gamma[i] per follower, or beta[r][i-j] for the
/// polynomial law, giving 1 + d·n + gain_size + 5 columns.
std::vector<std::string> trace_header(const SimulationProblem& problem);

/// Whole trace as CSV with shortest round-trip float formatting.
std::string trace_csv(const SimulationProblem& problem, const SimulationTrace& trace);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::string bounds_json(const BoundReport& report);

/// FNV-1a 64 as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// Writes to a sibling temporary and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace bearing
