#pragma once

// Fixed-step explicit integration of the coupled culture system
//   dc/dt = -alpha r,  dr/dt = k t
// and error measurement against the closed forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <utility>

#include "oxisim/culture_model.hpp"
#include "oxisim/errors.hpp"
#include "oxisim/grid.hpp"

namespace oxisim {

struct State {
  double c = 0.0;
  double r = 0.0;

  bool finite() const noexcept { return std::isfinite(c) && std::isfinite(r); }
  bool operator==(const State&) const = default;
};

struct Derivative {
  double dc = 0.0;
  double dr = 0.0;
  bool operator==(const Derivative&) const = default;
};

enum class Method { euler, rk4 };

inline std::string_view to_string(Method m) {
  return m == Method::euler ? "euler" : "rk4";
}

struct IntegratorSpec {
  Method method = Method::rk4;
  double step = 0.01;
  double t0 = 0.0;
  double t_end = 1.0;

  void validate() const { (void)grid_steps(t0, t_end, step); }
  bool operator==(const IntegratorSpec&) const = default;
};

inline Derivative derivatives(double t, const State& s, const CultureParams& p) {
  if (!s.finite()) throw DomainError("derivatives: non-finite state");
  if (!std::isfinite(t)) throw DomainError("derivatives: non-finite time");
  return {-p.alpha * s.r, p.k * t};
}

namespace detail {

inline State advance(State s, double ds_scale, const Derivative& d) {
  return {s.c + ds_scale * d.dc, s.r + ds_scale * d.dr};
}

inline State euler_step(double t, const State& s, double h,
                        const CultureParams& p) {
  return advance(s, h, derivatives(t, s, p));
}

inline State rk4_step(double t, const State& s, double h,
                      const CultureParams& p) {
  const Derivative k1 = derivatives(t, s, p);
  const Derivative k2 = derivatives(t + h / 2, advance(s, h / 2, k1), p);
  const Derivative k3 = derivatives(t + h / 2, advance(s, h / 2, k2), p);
  const Derivative k4 = derivatives(t + h, advance(s, h, k3), p);
  return {s.c + h / 6 * (k1.dc + 2 * k2.dc + 2 * k3.dc + k4.dc),
          s.r + h / 6 * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr)};
}

}  // namespace detail

/// Integrates from (c0, b) at spec.t0. Samples every step; the last step is
/// shortened so that the trajectory ends exactly on spec.t_end.
inline Trajectory integrate(const CultureParams& p, const IntegratorSpec& spec) {
  spec.validate();
  if (!std::isfinite(p.alpha) || !std::isfinite(p.k))
    throw ConfigError("integrate: parameters must be finite");
  const std::vector<double> times = uniform_grid(spec.t0, spec.t_end, spec.step);

  // The initial state is the closed form at t0 (equal to (c0, b) when t0 = 0).
  State s{cell_survival(spec.t0, p), radical_level(spec.t0, p)};
  if (!s.finite()) throw NumericBlowUp(0, "non-finite initial state");

  Trajectory out;
  out.times = times;
  out.cells.reserve(times.size());
  out.radicals.reserve(times.size());
  out.cells.push_back(s.c);
  out.radicals.push_back(s.r);

  for (std::size_t i = 1; i < times.size(); ++i) {
    const double t = times[i - 1];
    const double h = times[i] - t;
    s = spec.method == Method::euler ? detail::euler_step(t, s, h, p)
                                     : detail::rk4_step(t, s, h, p);
    if (!s.finite()) throw NumericBlowUp(i, "non-finite state");
    out.cells.push_back(s.c);
    out.radicals.push_back(s.r);
  }
  return out;
}

struct ErrorPair {
  double cells = 0.0;
  double radicals = 0.0;
};

/// Componentwise maximum absolute deviation of a trajectory from the
/// closed forms at its own sample times.
inline ErrorPair max_error_vs_analytic(const Trajectory& traj,
                                       const CultureParams& p) {
  traj.validate();
  ErrorPair e;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    e.cells = std::max(e.cells, std::abs(traj.cells[i] - cell_survival(t, p)));
    e.radicals =
        std::max(e.radicals, std::abs(traj.radicals[i] - radical_level(t, p)));
  }
  return e;
}

}  // namespace oxisim
