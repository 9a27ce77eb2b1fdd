#pragma once

// CSV schemas and number formatting for emitted results.
//
//   culture.csv        t,cells_raw,radicals,cells_clamped
//   sweep_summary.csv  param_name,param_value,extinction_time
//   organism.csv       minute,activity,production,neutralized,dead,
//                      radical_pool,antioxidant_pool,cumulative_dead
//   fit_result.csv     param,estimate,fixed_or_free   (+ '#' trailer lines)
//
// Coordinates (times, parameter values) use up to 9 significant digits with
// no trailing zeros; measured quantities use 9 fixed decimals.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oxisim/culture_model.hpp"
#include "oxisim/errors.hpp"
#include "oxisim/fit.hpp"
#include "oxisim/organism.hpp"
#include "oxisim/sweep.hpp"

namespace oxisim::csv {

inline constexpr std::string_view kCultureHeader = "t,cells_raw,radicals,cells_clamped";
inline constexpr std::string_view kSweepSummaryHeader =
    "param_name,param_value,extinction_time";
inline constexpr std::string_view kOrganismHeader =
    "minute,activity,production,neutralized,dead,radical_pool,antioxidant_pool,"
    "cumulative_dead";
inline constexpr std::string_view kFitHeader = "param,estimate,fixed_or_free";

/// 9 significant digits, shortest form ("0", "0.05", "12.5").
inline std::string coord(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// 9 digits after the decimal point ("100.000000000").
inline std::string value(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

inline void write_culture(std::ostream& os, const Trajectory& traj) {
  traj.validate();
  os << kCultureHeader << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i)
    os << coord(traj.times[i]) << ',' << value(traj.cells[i]) << ','
       << value(traj.radicals[i]) << ',' << value(clamp_cells(traj.cells[i]))
       << '\n';
}

inline void write_sweep_summary(std::ostream& os, const SweepResult& res) {
  os << kSweepSummaryHeader << '\n';
  for (const auto& e : res.entries)
    os << to_string(res.parameter) << ',' << coord(e.value) << ','
       << (e.extinction_time ? value(*e.extinction_time) : "none") << '\n';
}

inline void write_organism(std::ostream& os, const SimReport& rep) {
  os << kOrganismHeader << '\n';
  for (const auto& m : rep.minutes)
    os << m.minute << ',' << m.activity << ',' << value(m.production) << ','
       << value(m.neutralized) << ',' << m.dead << ',' << value(m.radical_pool)
       << ',' << value(m.antioxidant_pool) << ',' << m.cumulative_dead << '\n';
}

inline void write_organism_summary(std::ostream& os, const SimReport& rep,
                                   const OrganismConfig& cfg) {
  os << "metric,value\n"
     << "total_dead," << rep.total_dead << '\n'
     << "mean_dead_per_minute," << value(rep.mean_dead_per_minute) << '\n'
     << "episode_threshold," << coord(cfg.episode_threshold) << '\n'
     << "threshold_minute,"
     << (rep.threshold_minute ? std::to_string(*rep.threshold_minute) : "none")
     << '\n'
     << "ticks_to_threshold," << ticks_to_threshold(cfg.episode_threshold)
     << '\n';
}

inline void write_fit(std::ostream& os, const FitResult& fit) {
  os << kFitHeader << '\n';
  auto row = [&](FitParam p, double v) {
    const bool is_free =
        std::find(fit.free.begin(), fit.free.end(), p) != fit.free.end();
    os << to_string(p) << ',' << value(v) << ',' << (is_free ? "free" : "fixed")
       << '\n';
  };
  row(FitParam::alpha, fit.params.alpha);
  row(FitParam::k, fit.params.k);
  row(FitParam::b, fit.params.b);
  os << "c0," << value(fit.params.c0) << ",fixed\n";
  os << "# residual=" << coord(fit.residual) << '\n'
     << "# iterations=" << fit.iterations << '\n';
  if (fit.warning) os << "# warning=" << *fit.warning << '\n';
}

// ---------------------------------------------------------------------------
// Reading back
// ---------------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;  // '#' lines, without the marker
};

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = line.find(',', pos);
    out.emplace_back(line.substr(pos, c == std::string_view::npos ? line.npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

/// Parses a CSV written by this module. Every row must have as many fields
/// as the header.
inline Table parse(std::string_view text) {
  Table t;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.emplace_back(line.substr(1));
      continue;
    }
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
    } else {
      if (fields.size() != t.header.size())
        throw ParseError(lineno, "", "row has " + std::to_string(fields.size()) +
                                         " fields, header has " +
                                         std::to_string(t.header.size()));
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

inline Table read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline double to_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(0, "", "not a number: '" + s + "'");
  return v;
}

}  // namespace oxisim::csv
