#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>

namespace bearing {

/// Componentwise signum. Exact mode maps to {-1, 0, 1} with sgn(0) = 0;
/// smoothed mode uses tanh(x / epsilon).
struct SignMode {
  bool smoothed = false;
  double epsilon = 0.0;

  static constexpr SignMode exact() noexcept { return {}; }
  static constexpr SignMode smooth(double eps) noexcept { return {true, eps}; }
};

inline double sign_scalar(double x, SignMode mode) noexcept {
  if (mode.smoothed) return std::tanh(x / mode.epsilon);
  return static_cast<double>((x > 0.0) - (x < 0.0));
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sign_fn(
    const Eigen::MatrixBase<Derived>& x, SignMode mode = {}) {
  return x.unaryExpr([mode](typename Derived::Scalar v) {
    return static_cast<typename Derived::Scalar>(sign_scalar(static_cast<double>(v), mode));
  });
}

/// Zeroes components that are indistinguishable from roundoff, i.e. below a
/// few ulps of `scale` (the magnitude of the operands that produced them).
/// Keeps sgn(·) at 0 on exact equilibria.
template <typename Derived>
void snap_roundoff(Eigen::MatrixBase<Derived>& v, double scale) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) <= floor) v(i) = 0.0;
}

}  // namespace bearing
