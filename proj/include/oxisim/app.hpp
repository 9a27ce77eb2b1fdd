#pragma once

// Runs a parsed configuration and writes its output tree.

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "oxisim/config.hpp"
#include "oxisim/csv.hpp"
#include "oxisim/culture_model.hpp"
#include "oxisim/fit.hpp"
#include "oxisim/ode.hpp"
#include "oxisim/organism.hpp"
#include "oxisim/plot.hpp"
#include "oxisim/sweep.hpp"

namespace oxisim {

struct CultureOutcome {
  Trajectory trajectory;
  std::optional<double> extinction_time;
  /// Only for integrated runs.
  std::optional<ErrorPair> error_vs_analytic;
};

using RunResult = std::variant<CultureOutcome, SweepResult, SimReport, FitResult>;

inline RunResult run(const RunConfig& cfg, Execution exec = Execution::parallel) {
  switch (cfg.mode) {
    case Mode::culture: {
      const auto& c = std::get<CultureRun>(cfg.block);
      CultureOutcome out;
      if (c.method) {
        out.trajectory = integrate(c.params, {*c.method, c.dt, 0.0, c.t_end});
        out.error_vs_analytic = max_error_vs_analytic(out.trajectory, c.params);
      } else {
        out.trajectory =
            closed_form_trajectory(c.params, uniform_grid(0.0, c.t_end, c.dt));
      }
      try {
        out.extinction_time = extinction_time(c.params);
      } catch (const NoExtinction&) {
      }
      return out;
    }
    case Mode::sweep:
      return run_sweep(std::get<SweepSpec>(cfg.block), exec);
    case Mode::organism: {
      const auto& o = std::get<OrganismRun>(cfg.block);
      return simulate_day(o.config, o.schedule, o.initial);
    }
    case Mode::fit:
      return fit_parameters(std::get<FitSpec>(cfg.block));
  }
  throw std::logic_error("run: unknown mode");
}

namespace detail {

inline std::filesystem::path write_file(
    const std::filesystem::path& path,
    const std::function<void(std::ostream&)>& body) {
  std::ostringstream buf;
  body(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const std::string data = buf.str();
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path.string());
  return path;
}

template <typename T>
const T& expect(const RunResult& r, Mode mode) {
  if (const T* p = std::get_if<T>(&r)) return *p;
  throw std::logic_error("internal error: result does not match mode " +
                         std::string(to_string(mode)));
}

}  // namespace detail

/// Writes the CSVs for the run (and plot files when cfg.emit_plot) into
/// out_dir. Returns the written paths in a fixed order.
inline std::vector<std::filesystem::path> emit_outputs(
    const RunResult& result, const RunConfig& cfg,
    const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw IoError("cannot create output directory " + out_dir.string());

  std::vector<fs::path> written;
  auto emit = [&](const std::string& name,
                  const std::function<void(std::ostream&)>& body) {
    written.push_back(detail::write_file(out_dir / name, body));
  };

  switch (cfg.mode) {
    case Mode::culture: {
      const auto& c = detail::expect<CultureOutcome>(result, cfg.mode);
      emit("culture.csv", [&](std::ostream& os) { csv::write_culture(os, c.trajectory); });
      if (cfg.emit_plot) {
        const auto& tr = c.trajectory;
        std::vector<double> clamped(tr.cells.size());
        std::transform(tr.cells.begin(), tr.cells.end(), clamped.begin(), clamp_cells);
        plot::Chart cells{"Cell survival", "t", "cells", tr.times,
                          {{"cells", clamped}}};
        plot::Chart radicals{"Radical accumulation", "t", "radicals", tr.times,
                             {{"radicals", tr.radicals}}};
        plot::Chart data{"", "t", "", tr.times,
                         {{"cells_raw", tr.cells},
                          {"radicals", tr.radicals},
                          {"cells_clamped", clamped}}};
        emit("culture_plot.dat", [&](std::ostream& os) { plot::write_data(os, data); });
        emit("culture_cells.svg", [&](std::ostream& os) { plot::write_svg(os, cells); });
        emit("culture_radicals.svg",
             [&](std::ostream& os) { plot::write_svg(os, radicals); });
      }
      break;
    }
    case Mode::sweep: {
      const auto& s = detail::expect<SweepResult>(result, cfg.mode);
      const std::string pname(to_string(s.parameter));
      emit("sweep_summary.csv", [&](std::ostream& os) { csv::write_sweep_summary(os, s); });
      for (const auto& e : s.entries)
        emit("sweep_" + pname + "_" + csv::coord(e.value) + ".csv",
             [&](std::ostream& os) { csv::write_culture(os, e.trajectory); });
      if (cfg.emit_plot && !s.entries.empty()) {
        plot::Chart chart{"Sensitivity to " + pname, "t", "cells",
                          s.entries.front().trajectory.times, {}};
        for (const auto& e : s.entries) {
          std::vector<double> y(e.trajectory.cells.size());
          std::transform(e.trajectory.cells.begin(), e.trajectory.cells.end(),
                         y.begin(), clamp_cells);
          chart.series.push_back({pname + "=" + csv::coord(e.value), std::move(y)});
        }
        emit("sweep_plot.dat", [&](std::ostream& os) { plot::write_data(os, chart); });
        emit("sweep.svg", [&](std::ostream& os) { plot::write_svg(os, chart); });
      }
      break;
    }
    case Mode::organism: {
      const auto& rep = detail::expect<SimReport>(result, cfg.mode);
      const auto& o = std::get<OrganismRun>(cfg.block);
      emit("organism.csv", [&](std::ostream& os) { csv::write_organism(os, rep); });
      emit("organism_summary.csv",
           [&](std::ostream& os) { csv::write_organism_summary(os, rep, o.config); });
      if (cfg.emit_plot) {
        plot::Chart data{"", "minute", "", {}, {}};
        std::vector<double> prod, neut, dead, rad, anti;
        for (const auto& m : rep.minutes) {
          data.x.push_back(m.minute);
          prod.push_back(m.production);
          neut.push_back(m.neutralized);
          dead.push_back(static_cast<double>(m.dead));
          rad.push_back(m.radical_pool);
          anti.push_back(m.antioxidant_pool);
        }
        data.series = {{"production", prod}, {"neutralized", neut}, {"dead", dead},
                       {"radical_pool", rad}, {"antioxidant_pool", anti}};
        plot::Chart deaths{"Dead cells per minute", "minute", "cells", data.x,
                           {{"dead", dead}}};
        emit("organism_plot.dat", [&](std::ostream& os) { plot::write_data(os, data); });
        emit("organism.svg", [&](std::ostream& os) { plot::write_svg(os, deaths); });
      }
      break;
    }
    case Mode::fit: {
      const auto& f = detail::expect<FitResult>(result, cfg.mode);
      emit("fit_result.csv", [&](std::ostream& os) { csv::write_fit(os, f); });
      if (cfg.emit_plot) {
        const auto& spec = std::get<FitSpec>(cfg.block);
        plot::Chart chart{"Fitted survival", "t", "cells", {}, {}};
        std::vector<double> observed, fitted;
        for (const auto& ob : spec.observed) {
          chart.x.push_back(ob.t);
          observed.push_back(ob.cells);
          fitted.push_back(cell_survival(ob.t, f.params));
        }
        chart.series = {{"observed", observed}, {"fitted", fitted}};
        emit("fit_plot.dat", [&](std::ostream& os) { plot::write_data(os, chart); });
        emit("fit.svg", [&](std::ostream& os) { plot::write_svg(os, chart); });
      }
      break;
    }
  }
  return written;
}

/// Short human-readable summary for the terminal.
inline std::string summarize(const RunResult& result) {
  std::ostringstream os;
  if (const auto* c = std::get_if<CultureOutcome>(&result)) {
    os << "samples: " << c->trajectory.size() << "\n";
    os << "extinction_time: "
       << (c->extinction_time ? csv::value(*c->extinction_time) : "none") << "\n";
    if (c->error_vs_analytic)
      os << "max |dc|: " << csv::coord(c->error_vs_analytic->cells)
         << "\nmax |dr|: " << csv::coord(c->error_vs_analytic->radicals) << "\n";
  } else if (const auto* s = std::get_if<SweepResult>(&result)) {
    for (const auto& e : s->entries)
      os << to_string(s->parameter) << "=" << csv::coord(e.value)
         << "  extinction_time="
         << (e.extinction_time ? csv::value(*e.extinction_time) : "none") << "\n";
  } else if (const auto* r = std::get_if<SimReport>(&result)) {
    os << "total_dead: " << r->total_dead << "\n"
       << "mean_dead_per_minute: " << csv::value(r->mean_dead_per_minute) << "\n"
       << "threshold_minute: "
       << (r->threshold_minute ? std::to_string(*r->threshold_minute) : "none")
       << "\n";
  } else if (const auto* f = std::get_if<FitResult>(&result)) {
    os << "alpha: " << csv::value(f->params.alpha) << "\n"
       << "k: " << csv::value(f->params.k) << "\n"
       << "b: " << csv::value(f->params.b) << "\n"
       << "residual: " << csv::coord(f->residual) << "\n"
       << "iterations: " << f->iterations << "\n";
    if (f->warning) os << "warning: " << *f->warning << "\n";
  }
  return os.str();
}

}  // namespace oxisim
