#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "oxisim/app.hpp"

using namespace oxisim;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load(const std::string& name) {
  return parse_config(read_file(fs::path(OXISIM_CONFIG_DIR) / name));
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("oxisim_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return files;
}

}  // namespace

TEST(Format, Numbers) {
  EXPECT_EQ(csv::coord(0.0), "0");
  EXPECT_EQ(csv::coord(-0.0), "0");
  EXPECT_EQ(csv::coord(0.05), "0.05");
  EXPECT_EQ(csv::coord(9.041577613758), "9.04157761");
  EXPECT_EQ(csv::value(100.0), "100.000000000");
  EXPECT_EQ(csv::value(0.2), "0.200000000");
  EXPECT_EQ(csv::value(-0.0), "0.000000000");
}

TEST(Emit, CultureFirstRow) {
  TempDir tmp;
  const auto cfg = load("paper_culture.cfg");
  emit_outputs(run(cfg), cfg, tmp.path());
  const auto table = csv::read((tmp.path() / "culture.csv").string());
  const std::string text = read_file(tmp.path() / "culture.csv");
  EXPECT_EQ(text.substr(0, text.find('\n', text.find('\n') + 1)),
            "t,cells_raw,radicals,cells_clamped\n0,100.000000000,0.200000000,100.000000000");
  ASSERT_EQ(table.rows.size(), 101u);
  EXPECT_EQ(table.rows.back()[0], "10");
  // Past extinction the raw column goes negative and the display column clamps.
  EXPECT_LT(csv::to_double(table.rows.back()[1]), 0.0);
  EXPECT_EQ(table.rows.back()[3], "0.000000000");
}

TEST(Emit, SweepFiles) {
  TempDir tmp;
  const auto cfg = load("fig5_sweep.cfg");
  const auto files = emit_outputs(run(cfg), cfg, tmp.path());
  ASSERT_EQ(files.size(), 4u);
  for (const char* name :
       {"sweep_summary.csv", "sweep_alpha_0.5.csv", "sweep_alpha_0.8.csv", "sweep_alpha_1.csv"})
    EXPECT_TRUE(fs::exists(tmp.path() / name)) << name;
  const auto summary = csv::read((tmp.path() / "sweep_summary.csv").string());
  ASSERT_EQ(summary.rows.size(), 3u);
  EXPECT_EQ(summary.rows[1][0], "alpha");
  EXPECT_EQ(summary.rows[1][1], "0.8");
  EXPECT_NEAR(csv::to_double(summary.rows[1][2]), 9.04157761, 1e-8);
}

TEST(Emit, OrganismRows) {
  TempDir tmp;
  const auto cfg = load("default_day.cfg");
  emit_outputs(run(cfg), cfg, tmp.path());
  const auto table = csv::read((tmp.path() / "organism.csv").string());
  ASSERT_EQ(table.rows.size(), 1440u);
  EXPECT_EQ(table.rows.front()[0], "0");
  EXPECT_EQ(table.rows.back()[0], "1439");
  EXPECT_TRUE(fs::exists(tmp.path() / "organism_summary.csv"));
}

TEST(Emit, FitResult) {
  TempDir tmp;
  const auto cfg = load("fit_synthetic.cfg");
  emit_outputs(run(cfg), cfg, tmp.path());
  const auto table = csv::read((tmp.path() / "fit_result.csv").string());
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(table.rows[0][0], "alpha");
  EXPECT_EQ(table.rows[0][2], "free");
  EXPECT_EQ(table.rows[2][0], "b");
  EXPECT_EQ(table.rows[2][2], "fixed");
  ASSERT_FALSE(table.comments.empty());
  EXPECT_EQ(table.comments[0].rfind(" residual=", 0), 0u);
}

// Every emitted CSV re-parses under its own schema.
TEST(Emit, SelfConsistentSchemas) {
  TempDir tmp;
  const std::map<std::string, std::string_view> headers{
      {"culture.csv", csv::kCultureHeader},
      {"sweep_summary.csv", csv::kSweepSummaryHeader},
      {"organism.csv", csv::kOrganismHeader},
      {"fit_result.csv", csv::kFitHeader}};
  for (const char* name : {"paper_culture.cfg", "paper_culture_rk4.cfg", "fig6_sweep.cfg",
                           "default_day.cfg", "fit_synthetic.cfg"}) {
    const auto cfg = load(name);
    const auto out = tmp.path() / name;
    for (const auto& file : emit_outputs(run(cfg), cfg, out)) {
      const auto table = csv::read(file.string());
      std::string header;
      for (std::size_t i = 0; i < table.header.size(); ++i)
        header += (i ? "," : "") + table.header[i];
      auto fname = file.filename().string();
      if (fname.rfind("sweep_", 0) == 0 && fname != "sweep_summary.csv") fname = "culture.csv";
      if (headers.count(fname)) {
        EXPECT_EQ(header, headers.at(fname)) << file;
      }
      for (const auto& row : table.rows)
        for (std::size_t c = 0; c < row.size(); ++c) {
          const auto& col = table.header[c];
          if (col == "activity" || col == "param" || col == "param_name" ||
              col == "fixed_or_free" || col == "metric" || row[c] == "none")
            continue;
          EXPECT_NO_THROW(csv::to_double(row[c])) << file << " " << col << "=" << row[c];
        }
    }
  }
}

TEST(Emit, PlotFiles) {
  TempDir tmp;
  auto cfg = load("fig6_sweep.cfg");
  cfg.emit_plot = true;
  emit_outputs(run(cfg), cfg, tmp.path());
  const std::string svg = read_file(tmp.path() / "sweep.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("k=0.5"), std::string::npos);
  const std::string dat = read_file(tmp.path() / "sweep_plot.dat");
  EXPECT_EQ(dat.substr(0, dat.find('\n')), "# t k=0.5 k=1 k=2");
}

TEST(Emit, ByteIdenticalAcrossRuns) {
  TempDir tmp;
  for (const char* name : {"paper_culture.cfg", "fig5_sweep.cfg", "default_day.cfg",
                           "fit_synthetic.cfg"}) {
    auto cfg = load(name);
    cfg.emit_plot = true;
    emit_outputs(run(cfg, Execution::parallel), cfg, tmp.path() / "a" / name);
    emit_outputs(run(cfg, Execution::sequential), cfg, tmp.path() / "b" / name);
  }
  EXPECT_EQ(snapshot(tmp.path() / "a"), snapshot(tmp.path() / "b"));
}

TEST(Emit, UnwritableDirectory) {
  TempDir tmp;
  fs::create_directories(tmp.path());
  std::ofstream(tmp.path() / "blocker") << "x";
  const auto cfg = load("paper_culture.cfg");
  EXPECT_THROW(emit_outputs(run(cfg), cfg, tmp.path() / "blocker" / "sub"), IoError);
}

TEST(Emit, ResultModeMismatch) {
  TempDir tmp;
  const auto cfg = load("paper_culture.cfg");
  const auto sweep_cfg = load("fig5_sweep.cfg");
  EXPECT_THROW(emit_outputs(run(sweep_cfg), cfg, tmp.path()), std::logic_error);
}
