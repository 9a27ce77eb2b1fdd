#pragma once

/**
 * @file organism.hpp
 * @brief Minute-by-minute skin-cell apoptosis driven by a daily timetable.
 *
 * Each minute the organism produces radicals (a resting baseline plus a
 * linear ramp while an activity runs), antioxidants neutralise what they
 * can, and whatever is left attacks cells. Radicals that kill at least one
 * cell are spent; a remainder too small to kill anything carries over.
 *
 * Step order (step_minute):
 *   1. production = baseline + intensity * j   (j = 1-based minute within
 *      the running activity, 0 at rest)
 *   2. radical_pool += production
 *   3. neutralized = min(radical_pool, antioxidant_pool), taken from both
 *   4. dead = floor(kill_ratio * radical_pool); if dead > 0 the pool is spent
 *   5. antioxidant_pool += replenish_rate, capped at capacity
 *   6. minute += 1, cumulative_dead += dead
 *
 * A ramp of j * intensity makes the load of an activity triangular:
 * after n minutes it has produced intensity * n (n + 1) / 2.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oxisim/errors.hpp"

namespace oxisim {

inline constexpr int kMinutesPerDay = 1440;

/// Nonnegative n with n (n + 1) / 2 == load.
inline double positive_root(double load) {
  if (!std::isfinite(load) || load < 0.0)
    throw DomainError("positive_root: load must be finite and >= 0");
  return (-1.0 + std::sqrt(1.0 + 8.0 * load)) / 2.0;
}

/// Smallest integer n with n (n + 1) / 2 >= load.
inline std::int64_t ticks_to_threshold(double load) {
  const double root = positive_root(load);
  auto tri = [](std::int64_t n) {
    return static_cast<long double>(n) * static_cast<long double>(n + 1) / 2.0L;
  };
  const long double target = load;
  auto n = static_cast<std::int64_t>(std::ceil(root));
  // The square root can be off by an ulp on either side of an exact
  // triangular number; settle with exact comparisons.
  while (n > 0 && tri(n - 1) >= target) --n;
  while (tri(n) < target) ++n;
  return n;
}

struct Activity {
  std::string name;
  int start_minute = 0;
  int duration = 1;
  double intensity = 0.0;

  int end_minute() const noexcept { return start_minute + duration; }
  bool operator==(const Activity&) const = default;
};

struct Schedule {
  std::vector<Activity> activities;

  void validate() const {
    for (std::size_t i = 0; i < activities.size(); ++i) {
      const Activity& a = activities[i];
      if (a.name.empty() || a.name == "rest" ||
          a.name.find_first_of(",\n\r\"") != std::string::npos)
        throw ConfigError("activity name '" + a.name + "' is not allowed");
      if (a.start_minute < 0 || a.start_minute >= kMinutesPerDay)
        throw ConfigError("activity '" + a.name + "': start outside [0, 1440)");
      if (a.duration < 1)
        throw ConfigError("activity '" + a.name + "': duration must be >= 1");
      if (a.end_minute() > kMinutesPerDay)
        throw ConfigError("activity '" + a.name + "': runs past minute 1440");
      if (!std::isfinite(a.intensity) || a.intensity < 0.0)
        throw ConfigError("activity '" + a.name + "': intensity must be >= 0");
      if (i > 0) {
        const Activity& prev = activities[i - 1];
        if (a.start_minute < prev.start_minute)
          throw ConfigError("activities must be sorted by start minute");
        if (a.start_minute < prev.end_minute())
          throw ConfigError("overlapping activities '" + prev.name + "' and '" +
                            a.name + "'");
      }
    }
  }

  /// Activity running at the given minute, if any.
  const Activity* active_at(int minute) const {
    auto it = std::upper_bound(
        activities.begin(), activities.end(), minute,
        [](int m, const Activity& a) { return m < a.start_minute; });
    if (it == activities.begin()) return nullptr;
    --it;
    return minute < it->end_minute() ? &*it : nullptr;
  }

  bool operator==(const Schedule&) const = default;
};

struct OrganismConfig {
  double baseline_production = 0.0;
  double antioxidant_capacity = 0.0;
  double replenish_rate = 0.0;
  double kill_ratio = 0.0;
  double episode_threshold = 30000.0;

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!ok(baseline_production)) throw ConfigError("baseline_production must be >= 0");
    if (!ok(antioxidant_capacity)) throw ConfigError("antioxidant_capacity must be >= 0");
    if (!ok(replenish_rate)) throw ConfigError("replenish_rate must be >= 0");
    if (!ok(kill_ratio)) throw ConfigError("kill_ratio must be >= 0");
    if (!ok(episode_threshold)) throw ConfigError("episode_threshold must be >= 0");
  }

  bool operator==(const OrganismConfig&) const = default;
};

struct OrganismState {
  int minute = 0;
  double radical_pool = 0.0;
  double antioxidant_pool = 0.0;
  std::int64_t cumulative_dead = 0;

  /// Minute 0 with no radicals and a full antioxidant pool.
  static OrganismState rested(const OrganismConfig& cfg) {
    return {0, 0.0, cfg.antioxidant_capacity, 0};
  }

  bool operator==(const OrganismState&) const = default;
};

struct MinuteRecord {
  int minute = 0;  // minute of day the step covered, 0-based
  std::string activity = "rest";
  double production = 0.0;
  double neutralized = 0.0;
  std::int64_t dead = 0;
  double spent = 0.0;  // radicals consumed by the kill
  double radical_pool = 0.0;
  double antioxidant_pool = 0.0;
  std::int64_t cumulative_dead = 0;

  bool operator==(const MinuteRecord&) const = default;
};

struct StepResult {
  OrganismState state;
  MinuteRecord record;
};

inline StepResult step_minute(const OrganismState& state,
                              const OrganismConfig& cfg, const Schedule& sched) {
  if (state.minute >= kMinutesPerDay)
    throw EndOfDay("step_minute: day already complete at minute " +
                   std::to_string(state.minute));
  if (state.minute < 0) throw DomainError("step_minute: negative minute");

  MinuteRecord rec;
  rec.minute = state.minute;

  double ramp = 0.0;
  if (const Activity* a = sched.active_at(state.minute)) {
    rec.activity = a->name;
    ramp = a->intensity * static_cast<double>(state.minute - a->start_minute + 1);
  }
  rec.production = cfg.baseline_production + ramp;

  double radicals = state.radical_pool + rec.production;
  double antioxidants = state.antioxidant_pool;

  rec.neutralized = std::min(radicals, antioxidants);
  radicals -= rec.neutralized;
  antioxidants -= rec.neutralized;

  const double kill = std::floor(cfg.kill_ratio * radicals);
  if (kill >= 9.0e18) throw DomainError("step_minute: dead cell count overflow");
  rec.dead = static_cast<std::int64_t>(kill);
  if (rec.dead > 0) {
    rec.spent = radicals;
    radicals = 0.0;
  }

  antioxidants = std::min(antioxidants + cfg.replenish_rate,
                          cfg.antioxidant_capacity);

  OrganismState next{state.minute + 1, radicals, antioxidants,
                     state.cumulative_dead + rec.dead};
  rec.radical_pool = next.radical_pool;
  rec.antioxidant_pool = next.antioxidant_pool;
  rec.cumulative_dead = next.cumulative_dead;
  return {next, rec};
}

struct SimReport {
  std::vector<MinuteRecord> minutes;
  std::int64_t total_dead = 0;
  double mean_dead_per_minute = 0.0;
  /// Minutes elapsed when production minus neutralisation first summed to
  /// the episode threshold; empty if it never did.
  std::optional<int> threshold_minute;
  OrganismState final_state;

  bool operator==(const SimReport&) const = default;
};

inline SimReport simulate_day(const OrganismConfig& cfg, const Schedule& sched,
                              const OrganismState& initial) {
  cfg.validate();
  sched.validate();
  if (initial.minute != 0) throw ConfigError("simulate_day: initial minute must be 0");
  if (!std::isfinite(initial.radical_pool) || initial.radical_pool < 0.0 ||
      !std::isfinite(initial.antioxidant_pool) || initial.antioxidant_pool < 0.0 ||
      initial.antioxidant_pool > cfg.antioxidant_capacity ||
      initial.cumulative_dead < 0)
    throw ConfigError("simulate_day: initial pools out of range");

  SimReport report;
  report.minutes.reserve(kMinutesPerDay);
  OrganismState s = initial;
  double unneutralized = 0.0;
  for (int m = 0; m < kMinutesPerDay; ++m) {
    auto [next, rec] = step_minute(s, cfg, sched);
    unneutralized += rec.production - rec.neutralized;
    if (!report.threshold_minute && unneutralized >= cfg.episode_threshold)
      report.threshold_minute = next.minute;
    report.minutes.push_back(std::move(rec));
    s = next;
  }
  report.final_state = s;
  report.total_dead = s.cumulative_dead - initial.cumulative_dead;
  report.mean_dead_per_minute =
      static_cast<double>(report.total_dead) / kMinutesPerDay;
  return report;
}

/// Consecutive days with pools carried over; the minute counter restarts.
inline std::vector<SimReport> simulate_days(const OrganismConfig& cfg,
                                            const Schedule& sched,
                                            OrganismState initial, int days) {
  if (days < 1) throw ConfigError("simulate_days: days must be >= 1");
  std::vector<SimReport> out;
  out.reserve(static_cast<std::size_t>(days));
  for (int d = 0; d < days; ++d) {
    out.push_back(simulate_day(cfg, sched, initial));
    initial = out.back().final_state;
    initial.minute = 0;
  }
  return out;
}

}  // namespace oxisim
