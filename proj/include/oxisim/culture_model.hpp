#pragma once

/**
 * @file culture_model.hpp
 * @brief Closed-form attrition model of a cell culture under radical attack.
 *
 * Radicals accumulate with a linear production rate and attrite the cells:
 *
 *   dc/dt = -alpha * r(t)        dr/dt = k * t
 *   r(0)  = b                    c(0)  = c0
 *
 * which integrates to
 *
 *   r(t) = k t^2 / 2 + b
 *   c(t) = c0 - alpha k t^3 / 6 - alpha b t
 *
 * The effectiveness alpha = b / (a + b) is the share of the radical attack
 * that is not absorbed by the antioxidant composition a.
 *
 * The functions here are deliberately permissive about limit cases
 * (alpha == 0, b == 0) so that the math layer can be probed at the edges;
 * CultureParams::validate() enforces the strict invariants used by
 * configuration and sweeps.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oxisim/errors.hpp"

namespace oxisim {

/// Attrition effectiveness b / (a + b).
inline double effectiveness(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw DomainError("effectiveness: inputs must be finite");
  if (a < 0.0) throw DomainError("effectiveness: antioxidant fraction a < 0");
  if (!(b > 0.0)) throw DomainError("effectiveness: radical fraction b <= 0");
  return b / (a + b);
}

/// Parameter set of the culture model. Either alpha is given directly, or
/// it is derived from the antioxidant composition a (then alpha == b/(a+b)).
struct CultureParams {
  double alpha = 0.8;
  std::optional<double> a;
  double b = 0.2;
  double k = 1.0;
  double c0 = 100.0;

  static CultureParams from_alpha(double alpha, double b, double k, double c0) {
    return CultureParams{alpha, std::nullopt, b, k, c0};
  }

  static CultureParams from_composition(double a, double b, double k,
                                        double c0) {
    return CultureParams{effectiveness(a, b), a, b, k, c0};
  }

  /// alpha = 0.8, k = 1, b = 0.2, c0 = 100.
  static CultureParams reference() { return from_alpha(0.8, 0.2, 1.0, 100.0); }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(alpha) || !(alpha > 0.0) || alpha > 1.0)
      throw ConfigError("alpha out of (0,1]");
    if (!finite(b) || !(b > 0.0)) throw ConfigError("b must be > 0");
    if (!finite(k) || k < 0.0) throw ConfigError("k must be >= 0");
    if (!finite(c0) || !(c0 > 0.0)) throw ConfigError("c0 must be > 0");
    if (a) {
      if (!finite(*a) || *a < 0.0) throw ConfigError("a must be >= 0");
      if (std::abs(alpha - b / (*a + b)) > 1e-12)
        throw ConfigError("alpha inconsistent with b/(a+b)");
    }
  }

  bool operator==(const CultureParams&) const = default;
};

namespace detail {

inline void require_time(double t, const char* op) {
  if (!std::isfinite(t) || t < 0.0)
    throw DomainError(std::string(op) + ": time must be finite and >= 0");
}

inline void require_finite(const CultureParams& p, const char* op) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.b) || !std::isfinite(p.k) ||
      !std::isfinite(p.c0))
    throw DomainError(std::string(op) + ": parameters must be finite");
}

}  // namespace detail

/// r(t) = k t^2 / 2 + b
inline double radical_level(double t, const CultureParams& p) {
  detail::require_time(t, "radical_level");
  detail::require_finite(p, "radical_level");
  return p.k * t * t / 2.0 + p.b;
}

/// c(t) = c0 - alpha k t^3 / 6 - alpha b t. Not clamped at zero.
inline double cell_survival(double t, const CultureParams& p) {
  detail::require_time(t, "cell_survival");
  detail::require_finite(p, "cell_survival");
  return p.c0 - p.alpha * p.k * t * t * t / 6.0 - p.alpha * p.b * t;
}

/// dc/dt = -alpha r(t)
inline double survival_rate(double t, const CultureParams& p) {
  detail::require_time(t, "survival_rate");
  detail::require_finite(p, "survival_rate");
  return -p.alpha * (p.k * t * t / 2.0 + p.b);
}

/// Display-level clamp; the math layer itself never clamps.
inline double clamp_cells(double c) { return std::max(c, 0.0); }

/// Power-basis coefficients {t^0, t^1, t^2, t^3}.
using Cubic = std::array<double, 4>;

inline Cubic survival_coefficients(const CultureParams& p) {
  return {p.c0, -p.alpha * p.b, 0.0, -p.alpha * p.k / 6.0};
}

inline Cubic radical_coefficients(const CultureParams& p) {
  return {p.b, 0.0, p.k / 2.0, 0.0};
}

/// Unique positive root of c(t). Brackets by doubling from t_hi = 1, then
/// bisects until |c(t)| <= c0 * 1e-10.
inline double extinction_time(const CultureParams& p) {
  detail::require_finite(p, "extinction_time");
  if (!(p.c0 > 0.0)) throw DomainError("extinction_time: c0 must be > 0");
  if (p.alpha < 0.0 || p.b < 0.0 || p.k < 0.0)
    throw DomainError("extinction_time: alpha, b, k must be >= 0");
  if (p.alpha == 0.0 || (p.k == 0.0 && p.b == 0.0))
    throw NoExtinction("survival curve is flat: no extinction");

  const double tol = p.c0 * 1e-10;
  double lo = 0.0;
  double hi = 1.0;
  while (cell_survival(hi, p) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300)
      throw NoExtinction("no sign change found while bracketing");
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    mid = 0.5 * (lo + hi);
    const double c = cell_survival(mid, p);
    if (std::abs(c) <= tol) return mid;
    if (mid <= lo || mid >= hi) break;  // interval exhausted at double precision
    (c > 0.0 ? lo : hi) = mid;
  }
  return mid;
}

/// Time-indexed cell counts and radical levels.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> cells;
  std::vector<double> radicals;

  std::size_t size() const noexcept { return times.size(); }

  void validate() const {
    if (times.empty()) throw DomainError("trajectory is empty");
    if (cells.size() != times.size() || radicals.size() != times.size())
      throw DomainError("trajectory arrays differ in length");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw DomainError("trajectory times not strictly increasing");
  }

  bool operator==(const Trajectory&) const = default;
};

/// Samples the closed forms at the given times.
inline Trajectory closed_form_trajectory(const CultureParams& p,
                                         std::span<const double> times) {
  Trajectory out;
  out.times.assign(times.begin(), times.end());
  out.cells.reserve(times.size());
  out.radicals.reserve(times.size());
  for (double t : times) {
    out.cells.push_back(cell_survival(t, p));
    out.radicals.push_back(radical_level(t, p));
  }
  return out;
}

}  // namespace oxisim
