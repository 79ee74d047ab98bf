#include "bearing/sweep.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "bearing/output.hpp"

namespace bearing {

std::vector<SweepAxis> parse_grid(const std::string& spec) {
  std::vector<SweepAxis> axes;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::ConfigError, "grid: expected name=v1,v2 in '" + item + "'");
    SweepAxis axis{item.substr(0, eq), {}};
    std::istringstream vals(item.substr(eq + 1));
    std::string v;
    while (std::getline(vals, v, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v.size())
        throw Error(ErrorKind::ConfigError, "grid." + axis.name + ": bad value '" + v + "'");
      axis.values.push_back(x);
    }
    if (axis.values.empty())
      throw Error(ErrorKind::ConfigError, "grid." + axis.name + ": no values");
    with_parameter(ScenarioConfig{}, axis.name, axis.values.front());
    axes.push_back(std::move(axis));
  }
  return axes;
}

ScenarioConfig with_parameter(ScenarioConfig c, const std::string& name, double v) {
  if (name == "kappa") {
    c.kappa = v;
    c.kappa_list.clear();
  } else if (name == "kp") {
    c.kp = v;
  } else if (name == "alpha") {
    c.alpha = v;
  } else if (name == "dt") {
    c.dt = v;
    // keep the recording interval fixed in time
    c.stride = std::max(1, static_cast<int>(std::lround(c.stride * 1e-3 / v)));
  } else if (name == "horizon") {
    c.horizon = v;
  } else if (name == "perturbation") {
    c.perturbation = v;
  } else if (name == "seed") {
    c.seed = static_cast<std::uint64_t>(v);
  } else if (name == "epsilon") {
    c.sign = "smoothed:" + format_double(v);
  } else {
    throw Error(ErrorKind::ConfigError, "grid: unknown parameter '" + name + "'");
  }
  return c;
}

double convergence_time(const SimulationTrace& trace, double threshold) {
  double t = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t s = trace.size(); s-- > 0;) {
    if (!(trace.metrics[s].delta_norm < threshold)) break;
    t = trace.times[s];
  }
  return t;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::vector<SweepAxis>& axes,
                                unsigned workers, double threshold) {
  if (axes.empty()) return {};
  std::size_t cells = 1;
  for (const auto& a : axes) cells *= a.values.size();
  std::vector<SweepRow> rows(cells);

  auto run_cell = [&](std::size_t index) {
    SweepRow& row = rows[index];
    std::size_t rest = index;
    ScenarioConfig c = base;
    row.parameters.resize(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& values = axes[a].values;
      row.parameters[a] = values[rest % values.size()];
      rest /= values.size();
    }
    try {
      for (std::size_t a = 0; a < axes.size(); ++a)
        c = with_parameter(std::move(c), axes[a].name, row.parameters[a]);
      const SimulationProblem problem = build_problem(c);
      const RunResult result = run(problem);
      row.ok = result.ok();
      if (!row.ok) row.error = std::string(to_string(result.failure->kind));
      const SimulationTrace& tr = result.trace;
      if (tr.size()) {
        row.final_delta = tr.metrics.back().delta_norm;
        for (const auto& g : tr.gains)
          if (g.size()) row.max_gain = std::max(row.max_gain, g.maxCoeff());
        row.convergence_time = convergence_time(tr, threshold);
      }
    } catch (const Error& e) {
      row.ok = false;
      row.error = std::string(to_string(e.kind()));
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, cells); ++w)
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i; (i = next++) < cells;) run_cell(i);
    }));
  for (auto& f : pool) f.get();
  return rows;
}

std::string sweep_table(const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows) {
  std::string out;
  for (const auto& a : axes) out += a.name + ",";
  out += "status,final_delta,max_gain,convergence_time\n";
  for (const auto& r : rows) {
    for (double p : r.parameters) out += format_double(p) + ",";
    out += (r.ok ? std::string("ok") : r.error) + "," + format_double(r.final_delta) + "," +
           format_double(r.max_gain) + "," + format_double(r.convergence_time) + "\n";
  }
  return out;
}

}  // namespace bearing
