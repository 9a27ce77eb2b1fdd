#pragma once

/**
 * @file fit.hpp
 * @brief Least-squares fitting of the survival cubic to observed cell counts.
 *
 * The objective is the plain sum of squared residuals between cell_survival
 * and the observations. Minimisation is a coarse grid search over the bounds
 * of the free parameters followed by Nelder-Mead refinement. Parameters are
 * projected onto their bounds before every evaluation.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oxisim/culture_model.hpp"
#include "oxisim/errors.hpp"

namespace oxisim {

// ---------------------------------------------------------------------------
// Nelder-Mead
// ---------------------------------------------------------------------------

struct NelderMeadOptions {
  int max_iterations = 500;
  /// Stop when (f_worst - f_best) <= rel_tolerance * (|f_best| + |f_worst|).
  double rel_tolerance = 1e-10;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  /// Best objective value after each iteration (non-increasing).
  std::vector<double> history;
};

inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::vector<double>> simplex,
    const NelderMeadOptions& opt = {}) {
  const std::size_t n = simplex.size() - 1;
  for (const auto& v : simplex)
    if (v.size() != n) throw ConfigError("nelder_mead: malformed simplex");

  std::vector<double> fx(n + 1);
  for (std::size_t j = 0; j <= n; ++j) fx[j] = f(simplex[j]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (std::size_t i : idx) {
      s2.push_back(simplex[i]);
      f2.push_back(fx[i]);
    }
    simplex.swap(s2);
    fx.swap(f2);
  };
  auto along = [n](const std::vector<double>& from,
                   const std::vector<double>& to, double t) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = from[i] + t * (to[i] - from[i]);
    return p;
  };

  NelderMeadResult res;
  int it = 0;
  order();
  for (; it < opt.max_iterations; ++it) {
    const double spread = fx[n] - fx[0];
    if (spread <= opt.rel_tolerance * (std::abs(fx[0]) + std::abs(fx[n])))
      break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[j][i] / static_cast<double>(n);

    const auto xr = along(centroid, simplex[n], -opt.reflection);
    const double fr = f(xr);
    if (fr < fx[0]) {
      const auto xe = along(centroid, xr, opt.expansion);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fx[n] = fe;
      } else {
        simplex[n] = xr;
        fx[n] = fr;
      }
    } else if (fr < fx[n - 1]) {
      simplex[n] = xr;
      fx[n] = fr;
    } else {
      const bool outside = fr < fx[n];
      const auto xc = along(centroid, outside ? xr : simplex[n], opt.contraction);
      const double fc = f(xc);
      if (fc < (outside ? fr : fx[n])) {
        simplex[n] = xc;
        fx[n] = fc;
      } else {
        for (std::size_t j = 1; j <= n; ++j) {
          simplex[j] = along(simplex[0], simplex[j], opt.shrink);
          fx[j] = f(simplex[j]);
        }
      }
    }
    order();
    res.history.push_back(fx[0]);
  }

  res.x = simplex[0];
  res.value = fx[0];
  res.iterations = it;
  return res;
}

// ---------------------------------------------------------------------------
// Survival-curve fitting
// ---------------------------------------------------------------------------

enum class FitParam { alpha, k, b };

inline constexpr std::array<FitParam, 3> kFitParams{FitParam::alpha, FitParam::k,
                                                    FitParam::b};

inline std::string_view to_string(FitParam p) {
  switch (p) {
    case FitParam::alpha: return "alpha";
    case FitParam::k: return "k";
    case FitParam::b: return "b";
  }
  return "?";
}

inline std::optional<FitParam> parse_fit_param(std::string_view s) {
  if (s == "alpha") return FitParam::alpha;
  if (s == "k") return FitParam::k;
  if (s == "b") return FitParam::b;
  return std::nullopt;
}

struct Observation {
  double t = 0.0;
  double cells = 0.0;
  bool operator==(const Observation&) const = default;
};

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const Bounds&) const = default;
};

struct FitSpec {
  std::vector<Observation> observed;
  std::vector<FitParam> free;
  /// Values for fixed parameters (start values are ignored for free ones).
  /// c0 is always taken from the observation at t = 0.
  double alpha = 0.8;
  double k = 1.0;
  double b = 0.2;
  std::array<Bounds, 3> bounds{Bounds{0.0, 1.0}, Bounds{0.0, 5.0},
                               Bounds{0.0, 1.0}};

  int grid_points = 25;
  NelderMeadOptions simplex;

  bool is_free(FitParam p) const {
    return std::find(free.begin(), free.end(), p) != free.end();
  }
  Bounds& bounds_of(FitParam p) { return bounds[static_cast<std::size_t>(p)]; }
  const Bounds& bounds_of(FitParam p) const {
    return bounds[static_cast<std::size_t>(p)];
  }
  double fixed_value(FitParam p) const {
    switch (p) {
      case FitParam::alpha: return alpha;
      case FitParam::k: return k;
      case FitParam::b: return b;
    }
    return 0.0;
  }

  void validate() const {
    if (free.empty()) throw ConfigError("fit: no free parameters");
    for (std::size_t i = 0; i < free.size(); ++i)
      for (std::size_t j = i + 1; j < free.size(); ++j)
        if (free[i] == free[j]) throw ConfigError("fit: duplicate free parameter");
    if (observed.size() < 3) throw ConfigError("fit: need at least 3 observations");
    if (observed.size() < free.size() + 1)
      throw ConfigError("fit: fewer observations than free parameters + 1");
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (!std::isfinite(observed[i].t) || !std::isfinite(observed[i].cells))
        throw ConfigError("fit: observations must be finite");
      if (i > 0 && !(observed[i].t > observed[i - 1].t))
        throw ConfigError("fit: observation times must be strictly increasing");
    }
    if (observed.front().t != 0.0)
      throw ConfigError("fit: first observation must be at t = 0 (fixes c0)");
    if (!(observed.front().cells > 0.0)) throw ConfigError("fit: c0 must be > 0");
    for (FitParam p : kFitParams) {
      const Bounds& bd = bounds_of(p);
      if (is_free(p)) {
        if (!std::isfinite(bd.lo) || !std::isfinite(bd.hi) || !(bd.lo < bd.hi))
          throw ConfigError("fit: bounds for " + std::string(to_string(p)) +
                            " must be finite with lo < hi");
        if (bd.lo < 0.0)
          throw ConfigError("fit: lower bound for " + std::string(to_string(p)) +
                            " must be >= 0");
      } else if (!std::isfinite(fixed_value(p)) || fixed_value(p) < 0.0) {
        throw ConfigError("fit: fixed " + std::string(to_string(p)) +
                          " must be finite and >= 0");
      }
    }
    if (is_free(FitParam::alpha) && bounds_of(FitParam::alpha).hi > 1.0)
      throw ConfigError("fit: alpha upper bound must be <= 1");
    if (!is_free(FitParam::alpha) && fixed_value(FitParam::alpha) > 1.0)
      throw ConfigError("fit: alpha out of (0,1]");
    if (grid_points < 2 || grid_points > 1000)
      throw ConfigError("fit: grid_points must be in [2, 1000]");
  }

  /// Compares what the fit depends on: fixed values only for fixed
  /// parameters, bounds only for free ones.
  bool operator==(const FitSpec& o) const {
    if (observed != o.observed || free != o.free ||
        grid_points != o.grid_points ||
        simplex.max_iterations != o.simplex.max_iterations ||
        simplex.rel_tolerance != o.simplex.rel_tolerance)
      return false;
    for (FitParam p : kFitParams) {
      if (is_free(p) ? bounds_of(p) != o.bounds_of(p)
                     : fixed_value(p) != o.fixed_value(p))
        return false;
    }
    return true;
  }
};

struct FitResult {
  CultureParams params;
  std::vector<FitParam> free;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> objective_history;
  std::optional<std::string> warning;
};

/// Sum of squared residuals of the survival cubic against the observations.
inline double sum_squared_residuals(const CultureParams& p,
                                    const std::vector<Observation>& observed) {
  double s = 0.0;
  for (const auto& o : observed) {
    const double d = cell_survival(o.t, p) - o.cells;
    s += d * d;
  }
  return s;
}

inline FitResult fit_parameters(const FitSpec& spec) {
  spec.validate();
  const double c0 = spec.observed.front().cells;

  FitResult out;
  out.free = spec.free;

  std::vector<FitParam> active = spec.free;
  CultureParams base = CultureParams::from_alpha(spec.alpha, spec.b, spec.k, c0);

  // A flat series is explained only by zero attrition: pin alpha at its
  // lower bound and fit whatever else is free.
  const bool flat = std::all_of(
      spec.observed.begin(), spec.observed.end(),
      [&](const Observation& o) { return o.cells == spec.observed.front().cells; });
  if (flat && spec.is_free(FitParam::alpha)) {
    base.alpha = spec.bounds_of(FitParam::alpha).lo;
    std::erase(active, FitParam::alpha);
    out.warning = "flat data: alpha pinned at lower bound";
  }

  auto assign = [&](const std::vector<double>& x) {
    CultureParams p = base;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Bounds& bd = spec.bounds_of(active[i]);
      const double v = std::clamp(x[i], bd.lo, bd.hi);
      switch (active[i]) {
        case FitParam::alpha: p.alpha = v; break;
        case FitParam::k: p.k = v; break;
        case FitParam::b: p.b = v; break;
      }
    }
    return p;
  };
  auto objective = [&](const std::vector<double>& x) {
    return sum_squared_residuals(assign(x), spec.observed);
  };

  if (active.empty()) {
    out.params = base;
    out.residual = objective({});
    return out;
  }

  // Coarse grid, first minimum in lexicographic order wins ties.
  const std::size_t dims = active.size();
  const auto g = static_cast<std::size_t>(spec.grid_points);
  std::vector<double> step(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const Bounds& bd = spec.bounds_of(active[d]);
    step[d] = (bd.hi - bd.lo) / static_cast<double>(g - 1);
  }
  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) total *= g;

  std::vector<double> best_x(dims), x(dims);
  double best_f = std::numeric_limits<double>::infinity();
  for (std::size_t flat_idx = 0; flat_idx < total; ++flat_idx) {
    std::size_t rem = flat_idx;
    for (std::size_t d = dims; d-- > 0;) {
      x[d] = spec.bounds_of(active[d]).lo + static_cast<double>(rem % g) * step[d];
      rem /= g;
    }
    const double fv = objective(x);
    if (fv < best_f) {
      best_f = fv;
      best_x = x;
    }
  }

  // Initial simplex: one grid cell along each axis, pointing inward.
  std::vector<std::vector<double>> simplex{best_x};
  for (std::size_t d = 0; d < dims; ++d) {
    auto v = best_x;
    const Bounds& bd = spec.bounds_of(active[d]);
    v[d] = (v[d] + step[d] <= bd.hi) ? v[d] + step[d] : v[d] - step[d];
    v[d] = std::clamp(v[d], bd.lo, bd.hi);
    simplex.push_back(v);
  }

  const NelderMeadResult nm = nelder_mead(objective, simplex, spec.simplex);
  out.params = assign(nm.x);
  out.residual = nm.value;
  out.iterations = nm.iterations;
  out.objective_history = nm.history;
  return out;
}

/// Noiseless observations generated from the closed form.
inline std::vector<Observation> synthesize_observations(
    const CultureParams& p, const std::vector<double>& times) {
  std::vector<Observation> obs;
  obs.reserve(times.size());
  for (double t : times) obs.push_back({t, cell_survival(t, p)});
  return obs;
}

}  // namespace oxisim
