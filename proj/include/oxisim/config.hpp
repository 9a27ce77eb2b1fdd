#pragma once

/**
 * @file config.hpp
 * @brief Sectioned key=value run configuration.
 *
 * Format: `[section]` headers, one `key = value` per line, full-line `#`
 * comments. Lists are comma separated. Every run has a `[run]` section naming
 * the mode, plus exactly one mode block:
 *
 *   [culture]   alpha | a, b, k, c0, t_end, dt, method
 *   [sweep]     parameter, values, alpha | a, b, k, c0, t_end, dt
 *   [organism]  baseline_production, antioxidant_capacity, replenish_rate,
 *               kill_ratio, episode_threshold, initial_antioxidants,
 *               initial_radicals      (+ any number of [activity] sections)
 *   [fit]       times, cells, free, alpha, k, b, <param>_bounds,
 *               grid_points, max_iterations
 *
 * render_config() writes a document that parses back to an equal RunConfig.
 */

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oxisim/culture_model.hpp"
#include "oxisim/errors.hpp"
#include "oxisim/fit.hpp"
#include "oxisim/ode.hpp"
#include "oxisim/organism.hpp"
#include "oxisim/sweep.hpp"

namespace oxisim {

enum class Mode { culture, sweep, organism, fit };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::culture: return "culture";
    case Mode::sweep: return "sweep";
    case Mode::organism: return "organism";
    case Mode::fit: return "fit";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "culture") return Mode::culture;
  if (s == "sweep") return Mode::sweep;
  if (s == "organism") return Mode::organism;
  if (s == "fit") return Mode::fit;
  return std::nullopt;
}

struct CultureRun {
  CultureParams params;
  double t_end = 10.0;
  double dt = 0.1;
  /// Empty: sample the closed forms. Otherwise integrate with dt as step.
  std::optional<Method> method;

  bool operator==(const CultureRun&) const = default;
};

struct OrganismRun {
  OrganismConfig config;
  Schedule schedule;
  OrganismState initial;

  bool operator==(const OrganismRun&) const = default;
};

using ModeBlock = std::variant<CultureRun, SweepSpec, OrganismRun, FitSpec>;

struct RunConfig {
  Mode mode = Mode::culture;
  ModeBlock block;
  std::string output_dir;
  bool emit_plot = false;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

inline std::vector<Section> lex(std::string_view text) {
  std::vector<Section> sections;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                   : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ParseError(lineno, "", "malformed section header '" + line + "'");
      sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, "", "expected key = value, got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "", "empty key");
    if (sections.empty())
      throw ParseError(lineno, key, "key outside of any section: " + key);
    auto& entries = sections.back().entries;
    if (entries.count(key))
      throw ParseError(lineno, key, "duplicate key: " + key);
    entries[key] = {trim(std::string_view(line).substr(eq + 1)), lineno};
  }
  return sections;
}

/// Typed access to one section; remembers which keys were consumed so that
/// leftovers can be reported as unknown.
class Reader {
 public:
  explicit Reader(const Section& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.entries.count(key) > 0; }

  std::size_t line_of(const std::string& key) const {
    auto it = s_.entries.find(key);
    return it == s_.entries.end() ? s_.line : it->second.line;
  }

  std::string text(const std::string& key) {
    const Entry& e = require(key);
    if (e.value.empty()) throw ParseError(e.line, key, "empty value for " + key);
    return e.value;
  }

  std::optional<std::string> opt_text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return text(key);
  }

  double number(const std::string& key) {
    const Entry& e = require(key);
    return to_number(e.value, key, e.line);
  }

  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  double number_or(const std::string& key, double fallback) {
    return opt_number(key).value_or(fallback);
  }

  int integer(const std::string& key) {
    const Entry& e = require(key);
    int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
      throw ParseError(e.line, key,
                       key + ": expected integer, got '" + e.value + "'");
    return v;
  }

  int integer_or(const std::string& key, int fallback) {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Entry& e = require(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ParseError(e.line, key,
                     key + ": expected true or false, got '" + e.value + "'");
  }

  std::vector<std::string> list(const std::string& key) {
    const Entry& e = require(key);
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
      const auto comma = e.value.find(',', pos);
      std::string item = trim(std::string_view(e.value).substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (item.empty())
        throw ParseError(e.line, key, key + ": empty list element");
      out.push_back(std::move(item));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    const std::size_t line = line_of(key);
    for (const auto& item : list(key)) out.push_back(to_number(item, key, line));
    return out;
  }

  /// Throws for the first key never read.
  void finish() const {
    for (const auto& [key, entry] : s_.entries)
      if (!used_.count(key))
        throw ParseError(entry.line, key,
                         "unknown key: " + key + " in [" + s_.name + "]");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ParseError(line_of(key), key, msg);
  }

  const Section& section() const { return s_; }

 private:
  const Entry& require(const std::string& key) {
    auto it = s_.entries.find(key);
    if (it == s_.entries.end())
      throw ParseError(s_.line, key, "missing key: " + key);
    used_.insert(key);
    return it->second;
  }

  static double to_number(const std::string& s, const std::string& key,
                          std::size_t line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = first + s.size();
    if (first != last && *first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || !std::isfinite(v))
      throw ParseError(line, key, key + ": expected number, got '" + s + "'");
    return v;
  }

  const Section& s_;
  std::set<std::string> used_;
};

/// alpha | a, b, k, c0 with the model invariants checked against their lines.
inline CultureParams read_culture_params(Reader& r) {
  const double b = r.number("b");
  if (!(b > 0.0)) r.fail("b", "b must be > 0");
  const double k = r.number("k");
  if (k < 0.0) r.fail("k", "k must be >= 0");
  const double c0 = r.number("c0");
  if (!(c0 > 0.0)) r.fail("c0", "c0 must be > 0");

  const auto a = r.opt_number("a");
  const auto alpha = r.opt_number("alpha");
  if (a && *a < 0.0) r.fail("a", "a must be >= 0");
  if (!a && !alpha)
    throw ParseError(r.section().line, "alpha", "missing key: alpha (or a)");

  CultureParams p;
  if (alpha) {
    if (!(*alpha > 0.0) || *alpha > 1.0) r.fail("alpha", "alpha out of (0,1]");
    p = CultureParams::from_alpha(*alpha, b, k, c0);
    if (a) {
      p.a = *a;
      if (std::abs(*alpha - b / (*a + b)) > 1e-12)
        r.fail("alpha", "alpha inconsistent with b/(a+b)");
    }
  } else {
    p = CultureParams::from_composition(*a, b, k, c0);
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    r.fail("alpha", e.what());
  }
  return p;
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "euler") return Method::euler;
  if (s == "rk4") return Method::rk4;
  return std::nullopt;
}

template <typename Fn>
void wrap_config_error(const Section& s, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ParseError(s.line, "", e.what());
  }
}

inline CultureRun read_culture(Reader& r) {
  CultureRun run;
  run.params = read_culture_params(r);
  run.t_end = r.number_or("t_end", run.t_end);
  run.dt = r.number_or("dt", run.dt);
  if (auto m = r.opt_text("method"); m && *m != "closed_form") {
    run.method = parse_method(*m);
    if (!run.method)
      r.fail("method", "method must be closed_form, euler or rk4, got '" + *m + "'");
  }
  wrap_config_error(r.section(), [&] { (void)grid_steps(0.0, run.t_end, run.dt); });
  return run;
}

inline SweepSpec read_sweep(Reader& r) {
  SweepSpec spec;
  const std::string name = r.text("parameter");
  const auto param = parse_sweep_param(name);
  if (!param)
    r.fail("parameter", "parameter must be one of alpha, k, b, a; got '" + name + "'");
  spec.parameter = *param;
  spec.values = r.numbers("values");
  spec.base = read_culture_params(r);
  spec.t_end = r.number_or("t_end", spec.t_end);
  spec.dt = r.number_or("dt", spec.dt);
  wrap_config_error(r.section(), [&] { spec.validate(); });
  return spec;
}

inline OrganismRun read_organism(Reader& r, const std::vector<Section>& activities) {
  OrganismRun run;
  OrganismConfig& c = run.config;
  c.baseline_production = r.number("baseline_production");
  c.antioxidant_capacity = r.number("antioxidant_capacity");
  c.replenish_rate = r.number("replenish_rate");
  c.kill_ratio = r.number("kill_ratio");
  c.episode_threshold = r.number_or("episode_threshold", c.episode_threshold);
  for (const char* key : {"baseline_production", "antioxidant_capacity",
                          "replenish_rate", "kill_ratio", "episode_threshold"})
    if (r.has(key) && r.number(key) < 0.0) r.fail(key, std::string(key) + " must be >= 0");

  run.initial = OrganismState::rested(c);
  run.initial.antioxidant_pool =
      r.number_or("initial_antioxidants", c.antioxidant_capacity);
  run.initial.radical_pool = r.number_or("initial_radicals", 0.0);
  if (run.initial.antioxidant_pool < 0.0 ||
      run.initial.antioxidant_pool > c.antioxidant_capacity)
    r.fail("initial_antioxidants", "initial_antioxidants out of [0, capacity]");
  if (run.initial.radical_pool < 0.0)
    r.fail("initial_radicals", "initial_radicals must be >= 0");

  for (const Section& s : activities) {
    Reader ar(s);
    Activity a;
    a.name = ar.text("name");
    a.start_minute = ar.integer("start");
    a.duration = ar.integer("duration");
    a.intensity = ar.number("intensity");
    ar.finish();
    run.schedule.activities.push_back(std::move(a));
    wrap_config_error(s, [&] { run.schedule.validate(); });
  }
  return run;
}

inline FitSpec read_fit(Reader& r) {
  FitSpec spec;
  const auto times = r.numbers("times");
  const auto cells = r.numbers("cells");
  if (times.size() != cells.size())
    r.fail("cells", "times and cells differ in length");
  for (std::size_t i = 0; i < times.size(); ++i)
    spec.observed.push_back({times[i], cells[i]});

  for (const auto& name : r.list("free")) {
    const auto p = parse_fit_param(name);
    if (!p) r.fail("free", "free parameters must be alpha, k or b; got '" + name + "'");
    spec.free.push_back(*p);
  }
  for (FitParam p : kFitParams) {
    const std::string key(to_string(p));
    const std::string bkey = key + "_bounds";
    if (spec.is_free(p)) {
      const auto bd = r.numbers(bkey);
      if (bd.size() != 2) r.fail(bkey, bkey + ": expected lo, hi");
      spec.bounds_of(p) = {bd[0], bd[1]};
      // A start value for a free parameter is accepted and ignored.
      (void)r.opt_number(key);
    } else {
      const double v = r.number(key);
      switch (p) {
        case FitParam::alpha: spec.alpha = v; break;
        case FitParam::k: spec.k = v; break;
        case FitParam::b: spec.b = v; break;
      }
      if (r.has(bkey)) r.fail(bkey, bkey + " given for a fixed parameter");
    }
  }
  if (!spec.is_free(FitParam::alpha) && (!(spec.alpha > 0.0) || spec.alpha > 1.0))
    r.fail("alpha", "alpha out of (0,1]");
  spec.grid_points = r.integer_or("grid_points", spec.grid_points);
  spec.simplex.max_iterations =
      r.integer_or("max_iterations", spec.simplex.max_iterations);
  if (spec.simplex.max_iterations < 0)
    r.fail("max_iterations", "max_iterations must be >= 0");
  wrap_config_error(r.section(), [&] { spec.validate(); });
  return spec;
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  const auto sections = detail::lex(text);

  const detail::Section* run_section = nullptr;
  std::map<std::string, const detail::Section*> blocks;
  std::vector<detail::Section> activities;
  for (const auto& s : sections) {
    if (s.name == "run") {
      if (run_section) throw ParseError(s.line, "", "duplicate section [run]");
      run_section = &s;
    } else if (s.name == "activity") {
      activities.push_back(s);
    } else if (parse_mode(s.name)) {
      if (blocks.count(s.name))
        throw ParseError(s.line, "", "duplicate section [" + s.name + "]");
      blocks[s.name] = &s;
    } else {
      throw ParseError(s.line, "", "unknown section [" + s.name + "]");
    }
  }
  if (!run_section) throw ParseError(0, "", "missing section [run]");

  RunConfig cfg;
  detail::Reader run(*run_section);
  const std::string mode_name = run.text("mode");
  const auto mode = parse_mode(mode_name);
  if (!mode)
    run.fail("mode", "mode must be culture, sweep, organism or fit; got '" +
                         mode_name + "'");
  cfg.mode = *mode;
  cfg.output_dir = run.opt_text("output").value_or("");
  cfg.emit_plot = run.boolean_or("emit_plot", false);
  run.finish();

  for (const auto& [name, s] : blocks)
    if (name != mode_name)
      throw ParseError(s->line, "", "section [" + name + "] not allowed in " +
                                        mode_name + " mode");
  if (!blocks.count(mode_name))
    throw ParseError(0, "", "missing section [" + mode_name + "]");
  if (cfg.mode != Mode::organism && !activities.empty())
    throw ParseError(activities.front().line, "",
                     "[activity] sections are only allowed in organism mode");

  detail::Reader r(*blocks.at(mode_name));
  switch (cfg.mode) {
    case Mode::culture: cfg.block = detail::read_culture(r); break;
    case Mode::sweep: cfg.block = detail::read_sweep(r); break;
    case Mode::organism: cfg.block = detail::read_organism(r, activities); break;
    case Mode::fit: cfg.block = detail::read_fit(r); break;
  }
  r.finish();
  return cfg;
}

namespace detail {

/// Round-trip exact decimal.
inline std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string exact_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += exact(vs[i]);
  }
  return out;
}

inline void render_params(std::ostream& os, const CultureParams& p) {
  os << "alpha = " << exact(p.alpha) << "\n";
  if (p.a) os << "a = " << exact(*p.a) << "\n";
  os << "b = " << exact(p.b) << "\n"
     << "k = " << exact(p.k) << "\n"
     << "c0 = " << exact(p.c0) << "\n";
}

}  // namespace detail

/// Serializes a config; parse_config(render_config(c)) == c.
inline std::string render_config(const RunConfig& cfg) {
  using detail::exact;
  std::ostringstream os;
  os << "[run]\nmode = " << to_string(cfg.mode) << "\n";
  if (!cfg.output_dir.empty()) os << "output = " << cfg.output_dir << "\n";
  os << "emit_plot = " << (cfg.emit_plot ? "true" : "false") << "\n\n";
  os << "[" << to_string(cfg.mode) << "]\n";

  if (const auto* c = std::get_if<CultureRun>(&cfg.block)) {
    detail::render_params(os, c->params);
    os << "t_end = " << exact(c->t_end) << "\n"
       << "dt = " << exact(c->dt) << "\n"
       << "method = " << (c->method ? to_string(*c->method) : "closed_form")
       << "\n";
  } else if (const auto* s = std::get_if<SweepSpec>(&cfg.block)) {
    os << "parameter = " << to_string(s->parameter) << "\n"
       << "values = " << detail::exact_list(s->values) << "\n";
    detail::render_params(os, s->base);
    os << "t_end = " << exact(s->t_end) << "\n"
       << "dt = " << exact(s->dt) << "\n";
  } else if (const auto* o = std::get_if<OrganismRun>(&cfg.block)) {
    const OrganismConfig& oc = o->config;
    os << "baseline_production = " << exact(oc.baseline_production) << "\n"
       << "antioxidant_capacity = " << exact(oc.antioxidant_capacity) << "\n"
       << "replenish_rate = " << exact(oc.replenish_rate) << "\n"
       << "kill_ratio = " << exact(oc.kill_ratio) << "\n"
       << "episode_threshold = " << exact(oc.episode_threshold) << "\n"
       << "initial_antioxidants = " << exact(o->initial.antioxidant_pool) << "\n"
       << "initial_radicals = " << exact(o->initial.radical_pool) << "\n";
    for (const Activity& a : o->schedule.activities)
      os << "\n[activity]\nname = " << a.name << "\nstart = " << a.start_minute
         << "\nduration = " << a.duration
         << "\nintensity = " << exact(a.intensity) << "\n";
  } else if (const auto* f = std::get_if<FitSpec>(&cfg.block)) {
    std::vector<double> times, cells;
    for (const auto& ob : f->observed) {
      times.push_back(ob.t);
      cells.push_back(ob.cells);
    }
    os << "times = " << detail::exact_list(times) << "\n"
       << "cells = " << detail::exact_list(cells) << "\n"
       << "free = ";
    for (std::size_t i = 0; i < f->free.size(); ++i)
      os << (i ? ", " : "") << to_string(f->free[i]);
    os << "\n";
    for (FitParam p : kFitParams) {
      if (f->is_free(p)) {
        const Bounds& bd = f->bounds_of(p);
        os << to_string(p) << "_bounds = " << exact(bd.lo) << ", " << exact(bd.hi)
           << "\n";
      } else {
        os << to_string(p) << " = " << exact(f->fixed_value(p)) << "\n";
      }
    }
    os << "grid_points = " << f->grid_points << "\n"
       << "max_iterations = " << f->simplex.max_iterations << "\n";
  }
  return os.str();
}

}  // namespace oxisim
