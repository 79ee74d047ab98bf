#include "bearing/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "bearing/formations.hpp"
#include "bearing/output.hpp"

namespace bearing {

namespace {

using Rows = std::vector<std::vector<double>>;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, path + ": " + msg);
}

void check_keys(const YAML::Node& node, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(path, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path, const char* what) {
  if (!node.IsScalar()) fail(path, std::string("expected ") + what);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(path, std::string("expected ") + what);
  }
}

double number(const YAML::Node& n, const std::string& path) {
  return scalar<double>(n, path, "a number");
}
int integer(const YAML::Node& n, const std::string& path) {
  return scalar<int>(n, path, "an integer");
}
std::string text(const YAML::Node& n, const std::string& path) {
  return scalar<std::string>(n, path, "a string");
}

std::vector<double> numbers(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) fail(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(number(n[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Rows rows(const YAML::Node& n, const std::string& path, std::size_t width = 0) {
  if (!n.IsSequence()) fail(path, "expected a list of rows");
  Rows out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    out.push_back(numbers(n[i], p));
    if (width && out.back().size() != width)
      fail(p, "expected " + std::to_string(width) + " entries");
  }
  return out;
}

template <class F>
void optional_field(const YAML::Node& parent, const std::string& path, const char* key, F&& f) {
  if (const YAML::Node n = parent[key]) f(n, join(path, key));
}

void parse_formation(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "formation";
  check_keys(node, path, {"preset", "scale", "agents", "leaders", "edges", "target"});
  optional_field(node, path, "preset", [&](const auto& n, const auto& p) {
    c.preset = text(n, p);
    if (c.preset != "dodecahedron" && c.preset != "k4_square")
      fail(p, "unknown preset '" + c.preset + "' (expected dodecahedron or k4_square)");
  });
  optional_field(node, path, "scale", [&](const auto& n, const auto& p) {
    c.scale = number(n, p);
    if (!(c.scale > 0.0)) fail(p, "must be positive");
  });
  if (!c.preset.empty()) {
    for (const char* key : {"agents", "leaders", "edges", "target"})
      if (node[key]) fail(join(path, key), "not allowed together with a preset");
    return;
  }
  if (!node["agents"]) fail(join(path, "agents"), "required without a preset");
  if (!node["leaders"]) fail(join(path, "leaders"), "required without a preset");
  if (!node["edges"]) fail(join(path, "edges"), "required without a preset");
  if (!node["target"]) fail(join(path, "target"), "required without a preset");
  c.agents = integer(node["agents"], join(path, "agents"));
  c.leaders = integer(node["leaders"], join(path, "leaders"));
  const YAML::Node edges = node["edges"];
  if (!edges.IsSequence()) fail(join(path, "edges"), "expected a list of [i, j] pairs");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string p = join(path, "edges") + "[" + std::to_string(k) + "]";
    if (!edges[k].IsSequence() || edges[k].size() != 2) fail(p, "expected [i, j]");
    const int i = integer(edges[k][0], p + "[0]");
    const int j = integer(edges[k][1], p + "[1]");
    if (i < 1 || i > c.agents || j < 1 || j > c.agents)
      fail(p, "agent index out of range 1.." + std::to_string(c.agents));
    c.edges.push_back({i - 1, j - 1});
  }
  const YAML::Node target = node["target"];
  const std::string tp = join(path, "target");
  check_keys(target, tp, {"positions", "leaders", "bearings"});
  if (target["positions"]) {
    if (target["leaders"] || target["bearings"])
      fail(tp, "give either positions or leaders + bearings");
    c.target_positions = rows(target["positions"], join(tp, "positions"), c.dim);
  } else {
    if (!target["leaders"] || !target["bearings"]) fail(tp, "needs positions or leaders + bearings");
    c.target_leaders = rows(target["leaders"], join(tp, "leaders"), c.dim);
    c.target_bearings = rows(target["bearings"], join(tp, "bearings"), c.dim);
  }
}

void parse_controller(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "controller";
  check_keys(node, path, {"law", "kappa", "kp", "alpha", "order", "initial_gain"});
  if (!node["law"]) fail(join(path, "law"), "required");
  c.law = text(node["law"], join(path, "law"));
  static const std::set<std::string> laws{"disp_adaptive", "disp_prop_signum", "disp_leakage",
                                          "poly_adaptive", "bearing_only", "bearing_only_leakage"};
  if (!laws.count(c.law)) fail(join(path, "law"), "unknown law '" + c.law + "'");
  optional_field(node, path, "kappa", [&](const auto& n, const auto& p) {
    if (n.IsSequence()) {
      if (c.law != "bearing_only") fail(p, "a per-follower list is only valid for bearing_only");
      c.kappa_list = numbers(n, p);
      for (double k : c.kappa_list)
        if (!(k > 0.0)) fail(p, "rates must be positive");
    } else {
      c.kappa = number(n, p);
      if (!(c.kappa > 0.0)) fail(p, "must be positive");
    }
  });
  optional_field(node, path, "kp", [&](const auto& n, const auto& p) {
    c.kp = number(n, p);
    if (c.kp < 0.0) fail(p, "must be nonnegative");
  });
  optional_field(node, path, "alpha", [&](const auto& n, const auto& p) {
    c.alpha = number(n, p);
    if (c.alpha < 0.0) fail(p, "must be nonnegative");
  });
  optional_field(node, path, "order", [&](const auto& n, const auto& p) {
    c.order = integer(n, p);
    if (c.order < 0) fail(p, "must be nonnegative");
  });
  optional_field(node, path, "initial_gain", [&](const auto& n, const auto& p) {
    check_keys(n, p, {"policy", "value", "values", "low", "high"});
    if (!n["policy"]) fail(join(p, "policy"), "required");
    const std::string policy = text(n["policy"], join(p, "policy"));
    auto& g = c.initial_gain;
    if (policy == "constant") {
      g.kind = InitialGainPolicy::Kind::Constant;
      if (!n["value"]) fail(join(p, "value"), "required for the constant policy");
      g.value = number(n["value"], join(p, "value"));
      if (g.value < 0.0) fail(join(p, "value"), "must be nonnegative");
    } else if (policy == "list") {
      g.kind = InitialGainPolicy::Kind::List;
      if (!n["values"]) fail(join(p, "values"), "required for the list policy");
      g.values = numbers(n["values"], join(p, "values"));
      for (double v : g.values)
        if (v < 0.0) fail(join(p, "values"), "gains must be nonnegative");
    } else if (policy == "uniform") {
      g.kind = InitialGainPolicy::Kind::Uniform;
      if (!n["low"] || !n["high"]) fail(p, "uniform policy needs low and high");
      g.low = number(n["low"], join(p, "low"));
      g.high = number(n["high"], join(p, "high"));
      if (g.low < 0.0 || g.high < g.low) fail(p, "need 0 <= low <= high");
    } else {
      fail(join(p, "policy"), "expected constant, list or uniform");
    }
  });
}

SegmentConfig parse_segment(const YAML::Node& n, const std::string& p, int dim) {
  check_keys(n, p, {"from", "to", "scale", "profile", "value", "times", "values"});
  SegmentConfig s;
  optional_field(n, p, "from", [&](const auto& v, const auto& q) { s.from = number(v, q); });
  optional_field(n, p, "to", [&](const auto& v, const auto& q) { s.to = number(v, q); });
  optional_field(n, p, "scale", [&](const auto& v, const auto& q) { s.scale = number(v, q); });
  optional_field(n, p, "profile", [&](const auto& v, const auto& q) { s.profile = text(v, q); });
  if (!(s.to > s.from)) fail(p, "needs from < to");
  if (s.profile == "constant") {
    if (!n["value"]) fail(join(p, "value"), "required for a constant profile");
    s.constant = numbers(n["value"], join(p, "value"));
    if (static_cast<int>(s.constant.size()) != dim)
      fail(join(p, "value"), "expected " + std::to_string(dim) + " entries");
  } else if (s.profile == "table") {
    if (!n["times"] || !n["values"]) fail(p, "table profile needs times and values");
    s.times = numbers(n["times"], join(p, "times"));
    s.table = rows(n["values"], join(p, "values"), dim);
    if (s.times.size() != s.table.size() || s.times.empty())
      fail(p, "times and values must have the same nonzero length");
  } else if (s.profile == "harmonic") {
    if (dim != 3) fail(join(p, "profile"), "harmonic profile needs dimension 3");
  } else if (s.profile != "zero") {
    fail(join(p, "profile"), "expected zero, harmonic, constant or table");
  }
  return s;
}

void parse_disturbance(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "disturbance";
  if (!node.IsSequence()) fail(path, "expected a list of schedules");
  for (std::size_t k = 0; k < node.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    const YAML::Node item = node[k];
    check_keys(item, p, {"agents", "segments"});
    ScheduleConfig s;
    if (!item["agents"]) fail(join(p, "agents"), "required");
    const YAML::Node agents = item["agents"];
    if (agents.IsScalar()) {
      s.selector = text(agents, join(p, "agents"));
      if (s.selector != "followers" && s.selector != "all")
        fail(join(p, "agents"), "expected followers, all or a list of agent numbers");
    } else {
      for (double a : numbers(agents, join(p, "agents"))) {
        if (a != std::floor(a) || a < 1) fail(join(p, "agents"), "agent numbers start at 1");
        s.agents.push_back(static_cast<int>(a) - 1);
      }
    }
    if (!item["segments"] || !item["segments"].IsSequence())
      fail(join(p, "segments"), "expected a list of segments");
    for (std::size_t j = 0; j < item["segments"].size(); ++j)
      s.segments.push_back(parse_segment(item["segments"][j],
                                         join(p, "segments") + "[" + std::to_string(j) + "]",
                                         c.dim));
    c.disturbance.push_back(std::move(s));
  }
}

void parse_leaders(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "leaders";
  check_keys(node, path, {"velocity", "times", "values", "mode", "kp", "beta1"});
  optional_field(node, path, "velocity", [&](const auto& n, const auto& p) {
    c.leader_velocity = text(n, p);
    if (c.leader_velocity != "none" && c.leader_velocity != "weaving" &&
        c.leader_velocity != "table")
      fail(p, "expected none, weaving or table");
  });
  if (c.leader_velocity == "weaving" && c.dim < 2) fail(join(path, "velocity"), "needs d >= 2");
  if (c.leader_velocity == "table") {
    if (!node["times"] || !node["values"]) fail(path, "table velocity needs times and values");
    c.velocity_times = numbers(node["times"], join(path, "times"));
    c.velocity_values = rows(node["values"], join(path, "values"), c.dim);
    if (c.velocity_times.size() != c.velocity_values.size() || c.velocity_times.empty())
      fail(path, "times and values must have the same nonzero length");
  }
  optional_field(node, path, "mode", [&](const auto& n, const auto& p) {
    c.leader_mode = text(n, p);
    if (c.leader_mode != "kinematic" && c.leader_mode != "tracking")
      fail(p, "expected kinematic or tracking");
  });
  optional_field(node, path, "kp", [&](const auto& n, const auto& p) { c.leader_kp = number(n, p); });
  optional_field(node, path, "beta1", [&](const auto& n, const auto& p) { c.leader_beta1 = number(n, p); });
}

void parse_integrator(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "integrator";
  check_keys(node, path, {"dt", "scheme", "sign", "collision_threshold", "stride"});
  optional_field(node, path, "dt", [&](const auto& n, const auto& p) {
    c.dt = number(n, p);
    if (!(c.dt > 0.0)) fail(p, "must be positive");
  });
  optional_field(node, path, "scheme", [&](const auto& n, const auto& p) {
    c.scheme = text(n, p);
    if (c.scheme != "euler" && c.scheme != "rk4") fail(p, "expected euler or rk4");
  });
  optional_field(node, path, "sign", [&](const auto& n, const auto& p) {
    c.sign = text(n, p);
    try {
      parse_sign(c.sign);
    } catch (const Error& e) {
      fail(p, e.what());
    }
  });
  optional_field(node, path, "collision_threshold",
                 [&](const auto& n, const auto& p) { c.collision_threshold = number(n, p); });
  optional_field(node, path, "stride", [&](const auto& n, const auto& p) {
    c.stride = integer(n, p);
    if (c.stride < 1) fail(p, "must be at least 1");
  });
}

void parse_init(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "init";
  check_keys(node, path, {"perturbation", "seed", "positions"});
  optional_field(node, path, "perturbation", [&](const auto& n, const auto& p) {
    c.perturbation = number(n, p);
    if (c.perturbation < 0.0) fail(p, "must be nonnegative");
  });
  optional_field(node, path, "seed",
                 [&](const auto& n, const auto& p) { c.seed = scalar<std::uint64_t>(n, p, "an unsigned integer"); });
  optional_field(node, path, "positions",
                 [&](const auto& n, const auto& p) { c.initial_positions = rows(n, p, c.dim); });
}

void parse_analysis(const YAML::Node& node, ScenarioConfig& c) {
  const std::string path = "analysis";
  check_keys(node, path, {"theta", "gamma_margin", "sampling_dt"});
  optional_field(node, path, "theta", [&](const auto& n, const auto& p) { c.analysis.theta = number(n, p); });
  optional_field(node, path, "gamma_margin",
                 [&](const auto& n, const auto& p) { c.analysis.gamma_margin = number(n, p); });
  optional_field(node, path, "sampling_dt", [&](const auto& n, const auto& p) {
    c.analysis.sampling_dt = number(n, p);
    if (!(c.analysis.sampling_dt > 0.0)) fail(p, "must be positive");
  });
}

Eigen::VectorXd stack(const Rows& r) {
  Eigen::VectorXd out(static_cast<Index>(r.empty() ? 0 : r.size() * r.front().size()));
  Index k = 0;
  for (const auto& row : r)
    for (double v : row) out(k++) = v;
  return out;
}

Eigen::MatrixXd matrix(const Rows& r) {
  Eigen::MatrixXd out(static_cast<Index>(r.size()), r.empty() ? 0 : static_cast<Index>(r[0].size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r[i].size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = r[i][j];
  return out;
}

template <class F>
auto in_section(const std::string& section, F&& f) {
  try {
    return f();
  } catch (const CoincidentAgentsError& e) {
    throw Error(e.kind(), section + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    throw Error(e.kind(), section + ": " + e.what());
  }
}

TargetFormation build_target(const ScenarioConfig& c) {
  return in_section("formation", [&] {
    if (c.preset == "dodecahedron") {
      if (c.dim != 3) fail("dimension", "the dodecahedron preset needs dimension 3");
      Formation f = dodecahedron(c.scale);
      return TargetFormation::from_configuration(f.graph, f.configuration);
    }
    if (c.preset == "k4_square") {
      if (c.dim != 2) fail("dimension", "the k4_square preset needs dimension 2");
      Formation f = k4_square(c.scale);
      return TargetFormation::from_configuration(f.graph, f.configuration);
    }
    FormationGraph graph(c.agents, c.leaders, c.edges);
    if (!c.target_positions.empty()) {
      if (static_cast<int>(c.target_positions.size()) != c.agents)
        fail("formation.target.positions", "expected one row per agent");
      return TargetFormation::from_configuration(
          graph, Configuration::make(c.dim, c.scale * stack(c.target_positions)));
    }
    if (static_cast<int>(c.target_leaders.size()) != c.leaders)
      fail("formation.target.leaders", "expected one row per leader");
    if (static_cast<int>(c.target_bearings.size()) != graph.edge_count())
      fail("formation.target.bearings", "expected one bearing per edge");
    // bearings follow the order of formation.edges; re-map to the graph's orientation
    Eigen::VectorXd g(static_cast<Index>(graph.edge_count()) * c.dim);
    for (std::size_t k = 0; k < c.edges.size(); ++k) {
      const Edge& e = c.edges[k];
      Eigen::Map<const Eigen::VectorXd> b(c.target_bearings[k].data(), c.dim);
      for (int j = 0; j < graph.edge_count(); ++j) {
        const Edge& ge = graph.edge(j);
        if (ge.from == e.from && ge.to == e.to) block(g, j, c.dim) = b;
        if (ge.from == e.to && ge.to == e.from) block(g, j, c.dim) = -b;
      }
    }
    return TargetFormation::from_bearings(graph, c.dim, c.scale * stack(c.target_leaders),
                                          BearingSet::make(c.dim, g, 1e-9));
  });
}

ControlLaw build_law(const ScenarioConfig& c, const FormationGraph& graph) {
  if (c.law == "disp_adaptive") return DispAdaptiveLaw{c.kappa};
  if (c.law == "disp_prop_signum") return DispPropSignumLaw{c.kappa, c.kp};
  if (c.law == "disp_leakage") return DispLeakageLaw{c.kappa, c.alpha, c.kp};
  if (c.law == "poly_adaptive") return PolyAdaptiveLaw{c.order};
  if (c.law == "bearing_only") {
    Eigen::VectorXd kappa = Eigen::VectorXd::Constant(graph.follower_count(), c.kappa);
    if (!c.kappa_list.empty()) {
      if (static_cast<int>(c.kappa_list.size()) != graph.follower_count())
        fail("controller.kappa", "expected one rate per follower (" +
                                     std::to_string(graph.follower_count()) + ")");
      kappa = Eigen::Map<const Eigen::VectorXd>(c.kappa_list.data(),
                                                static_cast<Index>(c.kappa_list.size()));
    }
    return BearingOnlyAdaptiveLaw{kappa};
  }
  return BearingOnlyLeakageLaw{c.kappa, c.alpha, c.kp};
}

Eigen::VectorXd build_gains(const ScenarioConfig& c, const ControlLaw& law,
                            const FormationGraph& graph) {
  const Index size = gain_size(law, graph);
  const auto& g = c.initial_gain;
  switch (g.kind) {
    case InitialGainPolicy::Kind::Constant:
      return Eigen::VectorXd::Constant(size, g.value);
    case InitialGainPolicy::Kind::List:
      if (static_cast<Index>(g.values.size()) != size)
        fail("controller.initial_gain.values",
             "expected " + std::to_string(size) + " gains for law " + c.law);
      return Eigen::Map<const Eigen::VectorXd>(g.values.data(), size);
    case InitialGainPolicy::Kind::Uniform: {
      std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                        1u};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> dist(g.low, g.high);
      Eigen::VectorXd out(size);
      for (Index k = 0; k < size; ++k) out(k) = g.high > g.low ? dist(rng) : g.low;
      return out;
    }
  }
  return {};
}

DisturbanceSpec build_disturbance(const ScenarioConfig& c, const FormationGraph& graph) {
  const int n = graph.vertex_count();
  DisturbanceSpec spec(c.dim, n);
  std::vector<bool> assigned(static_cast<std::size_t>(n), false);
  for (std::size_t k = 0; k < c.disturbance.size(); ++k) {
    const ScheduleConfig& s = c.disturbance[k];
    const std::string path = "disturbance[" + std::to_string(k) + "]";
    std::vector<int> agents = s.agents;
    if (s.selector == "followers" || s.selector == "all") {
      agents.clear();
      for (int i = s.selector == "all" ? 0 : graph.leader_count(); i < n; ++i) agents.push_back(i);
    }
    std::vector<DisturbanceSegment> segments;
    for (const SegmentConfig& sc : s.segments) {
      DisturbanceSegment seg{sc.from, sc.to, sc.scale, ZeroProfile{}};
      if (sc.profile == "harmonic") seg.profile = HarmonicProfile{};
      if (sc.profile == "constant")
        seg.profile = ConstantProfile{Eigen::Map<const Eigen::VectorXd>(
            sc.constant.data(), static_cast<Index>(sc.constant.size()))};
      if (sc.profile == "table") seg.profile = TableProfile{sc.times, matrix(sc.table)};
      segments.push_back(std::move(seg));
    }
    for (int a : agents) {
      if (a < 0 || a >= n)
        fail(join(path, "agents"), "agent " + std::to_string(a + 1) + " out of range 1.." +
                                       std::to_string(n));
      if (assigned[static_cast<std::size_t>(a)])
        fail(join(path, "agents"), "agent " + std::to_string(a + 1) + " already has a schedule");
      assigned[static_cast<std::size_t>(a)] = true;
      try {
        spec.set_schedule(a, segments);
      } catch (const Error& e) {
        fail(join(path, "segments"), e.what());
      }
    }
  }
  return spec;
}

Eigen::VectorXd build_initial_positions(const ScenarioConfig& c, const TargetFormation& target) {
  const int n = target.graph().vertex_count();
  if (!c.initial_positions.empty()) {
    if (static_cast<int>(c.initial_positions.size()) != n)
      fail("init.positions", "expected one row per agent");
    Eigen::VectorXd p = stack(c.initial_positions);
    // kinematic leaders start on the target
    if (c.leader_mode == "kinematic") {
      const Index dl = static_cast<Index>(target.graph().leader_count()) * c.dim;
      if (!p.head(dl).isApprox(target.full().head(dl), 1e-12))
        fail("init.positions", "kinematic leaders must start at their target positions");
    }
    return p;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                    0u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> dist(-c.perturbation, c.perturbation);
  Eigen::VectorXd p = target.full();
  const Index dl = static_cast<Index>(target.graph().leader_count()) * c.dim;
  for (Index k = dl; k < p.size(); ++k)
    if (c.perturbation > 0.0) p(k) += dist(rng);
  return p;
}

}  // namespace

SignMode parse_sign(const std::string& s) {
  if (s == "exact") return SignMode::exact();
  const std::string prefix = "smoothed:";
  if (s.rfind(prefix, 0) == 0) {
    double eps = 0.0;
    std::istringstream in(s.substr(prefix.size()));
    if (!(in >> eps) || !in.eof() || !(eps > 0.0))
      throw Error(ErrorKind::ConfigError, "smoothed sign needs a positive epsilon, e.g. smoothed:0.05");
    return SignMode::smooth(eps);
  }
  throw Error(ErrorKind::ConfigError, "sign must be 'exact' or 'smoothed:<eps>'");
}

ScenarioConfig parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    fail("document", std::string("malformed YAML: ") + e.what());
  }
  if (!root.IsMap()) fail("document", "expected a mapping at the top level");
  check_keys(root, "", {"schema_version", "name", "dimension", "formation", "controller",
                        "disturbance", "leaders", "integrator", "horizon", "init", "analysis"});
  ScenarioConfig c;
  if (!root["schema_version"]) fail("schema_version", "required");
  c.schema_version = integer(root["schema_version"], "schema_version");
  if (c.schema_version != kSchemaVersion)
    fail("schema_version", "unsupported version " + std::to_string(c.schema_version));
  optional_field(root, "", "name", [&](const auto& n, const auto& p) { c.name = text(n, p); });
  if (!root["dimension"]) fail("dimension", "required");
  c.dim = integer(root["dimension"], "dimension");
  if (c.dim < 2) fail("dimension", "must be at least 2");

  if (!root["formation"]) fail("formation", "required");
  parse_formation(root["formation"], c);
  if (!root["controller"]) fail("controller", "required");
  parse_controller(root["controller"], c);
  optional_field(root, "", "disturbance", [&](const auto& n, const auto&) { parse_disturbance(n, c); });
  optional_field(root, "", "leaders", [&](const auto& n, const auto&) { parse_leaders(n, c); });
  optional_field(root, "", "integrator", [&](const auto& n, const auto&) { parse_integrator(n, c); });
  if (!root["horizon"]) fail("horizon", "required");
  c.horizon = number(root["horizon"], "horizon");
  if (!(c.horizon > 0.0)) fail("horizon", "must be positive");
  optional_field(root, "", "init", [&](const auto& n, const auto&) { parse_init(n, c); });
  optional_field(root, "", "analysis", [&](const auto& n, const auto&) { parse_analysis(n, c); });
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::ConfigError, file.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

SimulationProblem build_problem(const ScenarioConfig& c) {
  TargetFormation target = build_target(c);
  const FormationGraph& graph = target.graph();
  ControlLaw law = build_law(c, graph);
  Eigen::VectorXd gains = build_gains(c, law, graph);
  DisturbanceSpec disturbance = build_disturbance(c, graph);
  Eigen::VectorXd p0 = in_section("init", [&] { return build_initial_positions(c, target); });

  LeaderVelocity velocity = NoLeaderMotion{};
  if (c.leader_velocity == "weaving") velocity = WeavingLeaderVelocity{};
  if (c.leader_velocity == "table")
    velocity = LeaderVelocityTable{c.velocity_times, matrix(c.velocity_values)};
  LeaderMode mode = KinematicLeaders{};
  if (c.leader_mode == "tracking") mode = TrackingLawLeaders{c.leader_kp, c.leader_beta1};

  IntegratorSettings settings;
  settings.dt = c.dt;
  settings.scheme = c.scheme == "rk4" ? Scheme::RK4 : Scheme::ForwardEuler;
  settings.sign = parse_sign(c.sign);
  settings.collision_threshold = c.collision_threshold;
  settings.horizon = c.horizon;
  settings.stride = c.stride;

  return SimulationProblem{std::move(target), std::move(law), std::move(p0), std::move(gains),
                           std::move(disturbance), {}, std::move(velocity), mode, settings};
}

ValidationReport validate(const ScenarioConfig& c) {
  SimulationProblem problem = build_problem(c);
  const TargetFormation& t = problem.target;
  ValidationReport r;
  r.agents = t.graph().vertex_count();
  r.leaders = t.graph().leader_count();
  r.edges = t.graph().edge_count();
  r.rigidity = is_infinitesimally_bearing_rigid(t.graph(), t.full(), t.dim());
  r.lambda_min_ff = t.lambda_min_ff();
  r.gain_count = problem.initial_gains.size();
  return r;
}

std::string canonical_json(const ScenarioConfig& c) {
  using nlohmann::json;
  auto segs = [](const std::vector<SegmentConfig>& v) {
    json out = json::array();
    for (const auto& s : v)
      out.push_back({{"from", s.from}, {"to", std::isinf(s.to) ? json("inf") : json(s.to)},
                     {"scale", s.scale}, {"profile", s.profile}, {"value", s.constant},
                     {"times", s.times}, {"values", s.table}});
    return out;
  };
  json dist = json::array();
  for (const auto& s : c.disturbance)
    dist.push_back({{"selector", s.selector}, {"agents", s.agents}, {"segments", segs(s.segments)}});
  json edges = json::array();
  for (const auto& e : c.edges) edges.push_back({e.from, e.to});
  const char* kinds[] = {"constant", "list", "uniform"};
  json doc = {
      {"schema_version", c.schema_version},
      {"dimension", c.dim},
      {"formation",
       {{"preset", c.preset}, {"scale", c.scale}, {"agents", c.agents}, {"leaders", c.leaders},
        {"edges", edges}, {"positions", c.target_positions}, {"target_leaders", c.target_leaders},
        {"bearings", c.target_bearings}}},
      {"controller",
       {{"law", c.law}, {"kappa", c.kappa}, {"kappa_list", c.kappa_list}, {"kp", c.kp},
        {"alpha", c.alpha}, {"order", c.order},
        {"initial_gain",
         {{"policy", kinds[static_cast<int>(c.initial_gain.kind)]}, {"value", c.initial_gain.value},
          {"values", c.initial_gain.values}, {"low", c.initial_gain.low},
          {"high", c.initial_gain.high}}}}},
      {"disturbance", dist},
      {"leaders",
       {{"velocity", c.leader_velocity}, {"times", c.velocity_times},
        {"values", c.velocity_values}, {"mode", c.leader_mode}, {"kp", c.leader_kp},
        {"beta1", c.leader_beta1}}},
      {"integrator",
       {{"dt", c.dt}, {"scheme", c.scheme}, {"sign", c.sign},
        {"collision_threshold", c.collision_threshold}, {"stride", c.stride}}},
      {"horizon", c.horizon},
      {"init", {{"perturbation", c.perturbation}, {"seed", c.seed}, {"positions", c.initial_positions}}},
      {"analysis",
       {{"theta", c.analysis.theta}, {"gamma_margin", c.analysis.gamma_margin},
        {"sampling_dt", c.analysis.sampling_dt}}},
  };
  return doc.dump();
}

std::string config_hash(const ScenarioConfig& c) { return fnv1a_hex(canonical_json(c)); }

}  // namespace bearing
