// oxisim: command-line front end.
//
//   oxisim <culture|sweep|organism|fit> --config <file> [--out <dir>] [--emit-plot]
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oxisim/oxisim.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw oxisim::IoError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int execute(const std::string& subcommand, const std::string& config_path,
            const std::string& out_flag, bool emit_plot) {
  oxisim::RunConfig cfg = oxisim::parse_config(slurp(config_path));
  if (oxisim::to_string(cfg.mode) != subcommand) {
    std::cerr << "error: " << config_path << " is a "
              << oxisim::to_string(cfg.mode) << " config, not " << subcommand
              << "\n";
    return kExitUsage;
  }
  cfg.emit_plot = cfg.emit_plot || emit_plot;
  if (!out_flag.empty()) cfg.output_dir = out_flag;
  if (cfg.output_dir.empty()) cfg.output_dir = "out";

  const oxisim::RunResult result = oxisim::run(cfg);
  const auto files = oxisim::emit_outputs(result, cfg, cfg.output_dir);
  std::cout << oxisim::summarize(result);
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-radical attrition and organism apoptosis simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool emit_plot = false;

  for (const char* name : {"culture", "sweep", "organism", "fit"}) {
    auto* sub = app.add_subcommand(name, std::string("run a config in ") + name + " mode");
    sub->add_option("--config", config_path, "config file")->required();
    sub->add_option("--out", out_dir, "output directory (default: [run] output, else ./out)");
    sub->add_flag("--emit-plot", emit_plot, "also write plot data and SVG charts");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    return execute(subcommand, config_path, out_dir, emit_plot);
  } catch (const oxisim::ParseError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const oxisim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const oxisim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const oxisim::NumericBlowUp& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const oxisim::DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
