#pragma once

#include <Eigen/Core>

#include <limits>
#include <variant>
#include <vector>

#include "bearing/error.hpp"
#include "bearing/graph.hpp"

namespace bearing {

struct ZeroProfile {};

/// h_i(t) = [sin(i t) + 1, cos(i t) + tanh(t), 1 − e^{−i t}], i the 1-based agent number.
struct HarmonicProfile {};

struct ConstantProfile {
  Eigen::VectorXd value;
};

/// Sampled table, linearly interpolated, held constant beyond its ends.
struct TableProfile {
  std::vector<double> times;  // strictly increasing
  Eigen::MatrixXd values;     // rows = samples, cols = d
};

using DisturbanceProfile = std::variant<ZeroProfile, HarmonicProfile, ConstantProfile, TableProfile>;

/// Active on [t_start, t_end); the output is scale · profile(t).
struct DisturbanceSegment {
  double t_start = 0.0;
  double t_end = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  DisturbanceProfile profile = ZeroProfile{};
};

Eigen::Vector3d harmonic_profile(int agent_number, double t);

/// Linear interpolation of table rows at t; clamps to the end rows.
Eigen::VectorXd interpolate_rows(const std::vector<double>& times, const Eigen::MatrixXd& values,
                                 double t);

/// Per-agent piecewise disturbance schedule. Agents without segments are
/// undisturbed; outside declared segments the disturbance is zero.
class DisturbanceSpec {
 public:
  DisturbanceSpec() = default;
  DisturbanceSpec(int dim, int agents);

  int dim() const noexcept { return dim_; }
  int agent_count() const noexcept { return static_cast<int>(segments_.size()); }

  /// Replaces agent i's schedule (0-based). Segments must be sorted and
  /// non-overlapping; profiles must match the dimension.
  void set_schedule(int agent, std::vector<DisturbanceSegment> segments);
  const std::vector<DisturbanceSegment>& schedule(int agent) const {
    return segments_[static_cast<std::size_t>(agent)];
  }
  bool is_zero() const noexcept;

  /// d_i(t) for agent i (0-based).
  Eigen::VectorXd evaluate(int agent, double t) const;
  /// Stacked d(t), length d·n.
  Eigen::VectorXd evaluate_all(double t) const;

 private:
  int dim_ = 0;
  std::vector<std::vector<DisturbanceSegment>> segments_;
};

inline Eigen::VectorXd evaluate(const DisturbanceSpec& spec, int agent, double t) {
  return spec.evaluate(agent, t);
}

/// max over t ∈ {0, dt, 2dt, …, horizon} of ‖d(t)‖_∞.
double observed_sup_norm(const DisturbanceSpec& spec, double horizon, double dt);

}  // namespace bearing
