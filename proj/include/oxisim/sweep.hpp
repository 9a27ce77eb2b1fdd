#pragma once

// One-parameter sensitivity sweeps over the culture model.

#include <algorithm>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "oxisim/culture_model.hpp"
#include "oxisim/errors.hpp"
#include "oxisim/grid.hpp"

namespace oxisim {

enum class SweepParam { alpha, k, b, a };

inline std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::alpha: return "alpha";
    case SweepParam::k: return "k";
    case SweepParam::b: return "b";
    case SweepParam::a: return "a";
  }
  return "?";
}

inline std::optional<SweepParam> parse_sweep_param(std::string_view s) {
  if (s == "alpha") return SweepParam::alpha;
  if (s == "k") return SweepParam::k;
  if (s == "b") return SweepParam::b;
  if (s == "a") return SweepParam::a;
  return std::nullopt;
}

/// Replaces one parameter of base, keeping alpha == b/(a+b) whenever the
/// composition a is part of the parameter set. Setting alpha directly drops a.
inline CultureParams substitute(CultureParams base, SweepParam param,
                                double value) {
  switch (param) {
    case SweepParam::alpha:
      base.alpha = value;
      base.a.reset();
      break;
    case SweepParam::k:
      base.k = value;
      break;
    case SweepParam::b:
      base.b = value;
      if (base.a) base.alpha = effectiveness(*base.a, value);
      break;
    case SweepParam::a:
      base.a = value;
      base.alpha = effectiveness(value, base.b);
      break;
  }
  return base;
}

struct SweepSpec {
  SweepParam parameter = SweepParam::alpha;
  std::vector<double> values;
  CultureParams base;
  double t_end = 12.0;
  double dt = 0.05;

  void validate() const {
    base.validate();
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    for (std::size_t i = 1; i < values.size(); ++i)
      if (!(values[i] > values[i - 1]))
        throw ConfigError("sweep values must be strictly increasing");
    (void)grid_steps(0.0, t_end, dt);
    for (double v : values) {
      try {
        substitute(base, parameter, v).validate();
      } catch (const std::exception& e) {
        throw ConfigError("sweep value " + std::to_string(v) + " for " +
                          std::string(to_string(parameter)) + ": " + e.what());
      }
    }
  }

  bool operator==(const SweepSpec&) const = default;
};

struct SweepEntry {
  double value = 0.0;
  CultureParams params;
  std::optional<double> extinction_time;
  Trajectory trajectory;

  bool operator==(const SweepEntry&) const = default;
};

struct SweepResult {
  SweepParam parameter = SweepParam::alpha;
  std::vector<SweepEntry> entries;

  bool operator==(const SweepResult&) const = default;
};

/// Evaluates a single sweep value on the shared grid. Pure; safe to call
/// from any thread.
inline SweepEntry sweep_point(const SweepSpec& spec,
                              const std::vector<double>& grid,
                              std::size_t index) {
  SweepEntry e;
  e.value = spec.values.at(index);
  e.params = substitute(spec.base, spec.parameter, e.value);
  try {
    e.extinction_time = extinction_time(e.params);
  } catch (const NoExtinction&) {
    e.extinction_time.reset();
  }
  e.trajectory = closed_form_trajectory(e.params, grid);
  return e;
}

enum class Execution { sequential, parallel };

/// Results are stored by input index, so the output does not depend on the
/// order in which points finish.
inline SweepResult run_sweep(const SweepSpec& spec,
                             Execution exec = Execution::parallel) {
  spec.validate();
  const std::vector<double> grid = uniform_grid(0.0, spec.t_end, spec.dt);
  const std::size_t n = spec.values.size();

  SweepResult result;
  result.parameter = spec.parameter;
  result.entries.resize(n);

  if (exec == Execution::sequential || n == 1) {
    for (std::size_t i = 0; i < n; ++i)
      result.entries[i] = sweep_point(spec, grid, i);
    return result;
  }

  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, n);
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers)
        result.entries[i] = sweep_point(spec, grid, i);
    }));
  }
  for (auto& j : jobs) j.get();
  return result;
}

}  // namespace oxisim
