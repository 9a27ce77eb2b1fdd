#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "oxisim/errors.hpp"

namespace oxisim {

/// Upper bound on the number of steps in one grid; guards against runaway
/// step sizes such as h = 1e-12 over a long window.
inline constexpr double kMaxGridSteps = 1e8;

/// Number of steps needed to cover [t0, t_end] with step h. When the window
/// is an integer multiple of h (up to rounding) no extra partial step is added.
inline std::size_t grid_steps(double t0, double t_end, double h) {
  if (!std::isfinite(t0) || !std::isfinite(t_end) || !std::isfinite(h))
    throw ConfigError("grid bounds and step must be finite");
  if (t0 < 0.0) throw ConfigError("grid start must be >= 0");
  if (!(t_end > t0)) throw ConfigError("grid end must be greater than start");
  if (!(h > 0.0)) throw ConfigError("step size must be > 0");
  const double ratio = (t_end - t0) / h;
  if (ratio > kMaxGridSteps)
    throw ConfigError("grid would need more than 1e8 steps");
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * ratio)
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

/// Sample times t0, t0+h, ..., with the last point placed exactly on t_end.
/// Points are computed as t0 + i*h, not accumulated.
inline std::vector<double> uniform_grid(double t0, double t_end, double h) {
  const std::size_t n = grid_steps(t0, t_end, h);
  std::vector<double> times;
  times.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    times.push_back(t0 + static_cast<double>(i) * h);
  times.push_back(t_end);
  return times;
}

}  // namespace oxisim
