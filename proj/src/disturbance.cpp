#include "bearing/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bearing {

Eigen::Vector3d harmonic_profile(int agent_number, double t) {
  const double i = agent_number;
  return {std::sin(i * t) + 1.0, std::cos(i * t) + std::tanh(t), 1.0 - std::exp(-i * t)};
}

DisturbanceSpec::DisturbanceSpec(int dim, int agents)
    : dim_(dim), segments_(static_cast<std::size_t>(agents)) {}

void DisturbanceSpec::set_schedule(int agent, std::vector<DisturbanceSegment> segments) {
  if (agent < 0 || agent >= agent_count())
    throw Error(ErrorKind::ConfigError, "disturbance agent index out of range");
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    if (!(seg.t_end > seg.t_start) || seg.t_start < 0.0)
      throw Error(ErrorKind::ConfigError, "disturbance segment has an empty or negative interval");
    if (s > 0 && seg.t_start < segments[s - 1].t_end)
      throw Error(ErrorKind::ConfigError, "disturbance segments overlap or are unsorted");
    if (!std::isfinite(seg.scale))
      throw Error(ErrorKind::ConfigError, "disturbance scale must be finite");
    if (std::holds_alternative<HarmonicProfile>(seg.profile) && dim_ != 3)
      throw Error(ErrorKind::DimensionMismatch, "harmonic disturbance requires d = 3");
    if (const auto* c = std::get_if<ConstantProfile>(&seg.profile); c && c->value.size() != dim_)
      throw Error(ErrorKind::DimensionMismatch, "constant disturbance has wrong dimension");
    if (const auto* tab = std::get_if<TableProfile>(&seg.profile)) {
      if (tab->values.cols() != dim_ || tab->values.rows() != static_cast<Index>(tab->times.size()) ||
          tab->times.empty())
        throw Error(ErrorKind::DimensionMismatch, "disturbance table has wrong shape");
      if (std::adjacent_find(tab->times.begin(), tab->times.end(), std::greater_equal<>()) !=
          tab->times.end())
        throw Error(ErrorKind::ConfigError, "disturbance table times must increase");
      if (!tab->values.allFinite())
        throw Error(ErrorKind::ConfigError, "disturbance table values must be finite");
    }
  }
  segments_[static_cast<std::size_t>(agent)] = std::move(segments);
}

bool DisturbanceSpec::is_zero() const noexcept {
  for (const auto& agent : segments_)
    for (const auto& seg : agent)
      if (seg.scale != 0.0 && !std::holds_alternative<ZeroProfile>(seg.profile)) return false;
  return true;
}

Eigen::VectorXd interpolate_rows(const std::vector<double>& ts, const Eigen::MatrixXd& values,
                                 double t) {
  if (t <= ts.front()) return values.row(0).transpose();
  if (t >= ts.back()) return values.row(values.rows() - 1).transpose();
  const auto hi = static_cast<Index>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  const Index lo = hi - 1;
  const double t0 = ts[static_cast<std::size_t>(lo)];
  const double t1 = ts[static_cast<std::size_t>(hi)];
  const double w = (t - t0) / (t1 - t0);
  return ((1.0 - w) * values.row(lo) + w * values.row(hi)).transpose();
}

Eigen::VectorXd DisturbanceSpec::evaluate(int agent, double t) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (const auto& seg : segments_[static_cast<std::size_t>(agent)]) {
    if (t < seg.t_start || t >= seg.t_end) continue;
    struct {
      int agent;
      double t;
      Eigen::VectorXd& out;
      void operator()(const ZeroProfile&) const {}
      void operator()(const HarmonicProfile&) const { out = harmonic_profile(agent + 1, t); }
      void operator()(const ConstantProfile& c) const { out = c.value; }
      void operator()(const TableProfile& tab) const { out = interpolate_rows(tab.times, tab.values, t); }
    } visitor{agent, t, out};
    std::visit(visitor, seg.profile);
    out *= seg.scale;
    break;
  }
  return out;
}

Eigen::VectorXd DisturbanceSpec::evaluate_all(double t) const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Index>(dim_) * agent_count());
  for (int i = 0; i < agent_count(); ++i)
    if (!segments_[static_cast<std::size_t>(i)].empty())
      d.segment(static_cast<Index>(dim_) * i, dim_) = evaluate(i, t);
  return d;
}

double observed_sup_norm(const DisturbanceSpec& spec, double horizon, double dt) {
  if (spec.agent_count() == 0) return 0.0;
  const auto steps = static_cast<long long>(std::floor(horizon / dt + 1e-9));
  double best = 0.0;
  for (long long s = 0; s <= steps; ++s) {
    const double t = std::min(horizon, static_cast<double>(s) * dt);
    for (int i = 0; i < spec.agent_count(); ++i)
      if (!spec.schedule(i).empty())
        best = std::max(best, spec.evaluate(i, t).lpNorm<Eigen::Infinity>());
  }
  return best;
}

}  // namespace bearing
