#include "bearing/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace bearing {

namespace {

std::string axis_name(int k, int d) {
  static const char* names[] = {"x", "y", "z"};
  return d <= 3 ? names[k] : "a" + std::to_string(k);
}

std::string edge_name(const Edge& e) {
  return std::to_string(e.from + 1) + "-" + std::to_string(e.to + 1);
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> trace_header(const SimulationProblem& problem) {
  const FormationGraph& graph = problem.target.graph();
  const int d = problem.target.dim();
  std::vector<std::string> cols{"time"};
  for (int i = 0; i < graph.vertex_count(); ++i)
    for (int k = 0; k < d; ++k)
      cols.push_back("p[" + std::to_string(i + 1) + "][" + axis_name(k, d) + "]");
  switch (gain_layout(problem.law)) {
    case GainLayout::PerEdge:
      for (const Edge& e : graph.edges()) cols.push_back("gamma[" + edge_name(e) + "]");
      break;
    case GainLayout::PerFollower:
      for (int i = graph.leader_count(); i < graph.vertex_count(); ++i)
        cols.push_back("gamma[" + std::to_string(i + 1) + "]");
      break;
    case GainLayout::Polynomial: {
      const int order = std::get<PolyAdaptiveLaw>(problem.law).order;
      for (int r = 0; r <= order; ++r)
        for (const Edge& e : graph.edges())
          cols.push_back("beta[" + std::to_string(r) + "][" + edge_name(e) + "]");
      break;
    }
  }
  for (const char* c : {"u_norm", "delta_norm", "bearing_err", "min_dist", "d_norm"})
    cols.emplace_back(c);
  return cols;
}

std::string trace_csv(const SimulationProblem& problem, const SimulationTrace& trace) {
  std::string out;
  const auto header = trace_header(problem);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (std::size_t s = 0; s < trace.size(); ++s) {
    out += format_double(trace.times[s]);
    for (double v : trace.positions[s]) (out += ',') += format_double(v);
    for (double v : trace.gains[s]) (out += ',') += format_double(v);
    const SampleMetrics& m = trace.metrics[s];
    for (double v : {m.u_norm, m.delta_norm, m.bearing_err, m.min_dist, m.d_norm})
      (out += ',') += format_double(v);
    out += '\n';
  }
  return out;
}

std::string bounds_json(const BoundReport& r) {
  nlohmann::json j = {
      {"beta", r.beta},
      {"velocity_sup", r.velocity_sup},
      {"lambda_min_ff", r.lambda_min_ff},
      {"gamma0", r.gamma0},
      {"gamma0_tracking", r.gamma0_tracking ? nlohmann::json(*r.gamma0_tracking) : nullptr},
      {"chi", r.chi},
      {"V0", r.V0},
      {"epsilon", r.epsilon ? nlohmann::json(*r.epsilon) : nullptr},
      {"T_bound", r.T_bound ? nlohmann::json(*r.T_bound) : nullptr},
      {"gamma_bar", r.gamma_bar},
      {"note", r.note},
  };
  if (r.collision) {
    const auto& c = *r.collision;
    j["collision"] = {{"eta", c.eta},           {"margin", c.margin},
                      {"zeta", c.zeta},         {"vartheta", c.vartheta},
                      {"max_separation", c.max_separation},
                      {"min_separation", c.min_separation}};
  } else {
    j["collision"] = nullptr;
  }
  if (r.ultimate) {
    const auto& u = *r.ultimate;
    j["ultimate"] = {{"delta", number_or_null(u.delta)},
                     {"rho", u.rho},
                     {"ball_radius", number_or_null(u.ball_radius)},
                     {"level_set_radius", number_or_null(u.level_set_radius)}};
  } else {
    j["ultimate"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::ConfigError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace bearing
