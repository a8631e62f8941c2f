#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qwalk/run_io.hpp"

namespace {

using namespace qwalk;
namespace fs = std::filesystem;

ensemble::SimConfig tiny() {
  ensemble::SimConfig c;
  c.n_tr = 3000;
  c.half_width = 25;
  c.t_max = 4.0;
  c.snapshot_every = 0.5;
  c.dump_paths = 4;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class RunDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qwalk_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(RunDir, WritesAllFiles) {
  io::write_run(dir_, ensemble::run(tiny()));
  for (const char* f : {"density.csv", "flags.csv", "paths.csv", "meta.json", "plot.gp"}) EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  std::ifstream in(dir_ / "density.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "t,x,rho_emp");
  EXPECT_EQ(first.substr(0, 6), "0,-25,");
  std::ifstream paths(dir_ / "paths.csv");
  std::getline(paths, header);
  EXPECT_EQ(header, "t,trajectory_id,x");
}

TEST_F(RunDir, RoundTrip) {
  const ensemble::RunResult r = ensemble::run(tiny());
  io::write_run(dir_, r);
  const io::LoadedRun back = io::read_run(dir_);
  ASSERT_EQ(back.snapshots.size(), r.snapshots.size());
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    EXPECT_EQ(back.snapshots[i].t, r.snapshots[i].t);
    EXPECT_EQ(back.snapshots[i].first_label, -25);
    EXPECT_EQ(back.snapshots[i].rho, r.snapshots[i].rho);
  }
  ASSERT_EQ(back.flag_log.size(), r.flag_log.size());
  for (std::size_t i = 0; i < r.flag_log.size(); ++i) {
    EXPECT_EQ(back.flag_log[i].x, r.flag_log[i].x);
    EXPECT_EQ(back.flag_log[i].m, r.flag_log[i].m);
    EXPECT_EQ(back.flag_log[i].l, r.flag_log[i].l);
    EXPECT_NEAR(back.flag_log[i].t, r.flag_log[i].t, 1e-12);
  }
  EXPECT_EQ(back.config.n_tr, 3000);
  EXPECT_EQ(back.config.seed, 1u);
  EXPECT_EQ(back.config.mode, ensemble::Mode::autonomous);
  EXPECT_EQ(back.diagnostics.crossings, r.diagnostics.crossings);
  EXPECT_EQ(back.diagnostics.boundary_hits, r.diagnostics.boundary_hits);
}

TEST_F(RunDir, SameSeedByteIdenticalDensity) {
  io::write_run(dir_ / "a", ensemble::run(tiny()));
  io::write_run(dir_ / "b", ensemble::run(tiny()));
  const std::string a = slurp(dir_ / "a" / "density.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir_ / "b" / "density.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "flags.csv"), slurp(dir_ / "b" / "flags.csv"));
}

TEST_F(RunDir, MissingOrCorruptFiles) {
  EXPECT_THROW(io::read_run(dir_), ValidationError);
  io::write_run(dir_, ensemble::run(tiny()));
  { std::ofstream(dir_ / "meta.json") << "{ not json"; }
  EXPECT_THROW(io::read_run(dir_), ValidationError);
}

TEST(DensityCsv, RejectsMalformedRows) {
  for (const char* text : {"", "t,x,rho_emp\n0,0\n", "t,x,rho_emp\n0,a,1\n", "t,x,rho_emp\n0,0,0.5\n0,2,0.5\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(io::read_density_csv(in), ValidationError) << text;
  }
}

TEST(Format, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 49700.0 / 50000.0, 1e-300}) EXPECT_EQ(std::stod(io::format_number(v)), v);
  EXPECT_EQ(io::format_time(0.05 * 7), "0.35");
}

TEST(ReportJson, CarriesCrossingsAndSummary) {
  analysis::ComparisonReport rep;
  rep.snapshots.push_back({30.0, 0.1, {0.0, 440.0}, {0.0, 450.0}});
  rep.crossings.push_back({0, 2.4, 2.404825557695773});
  rep.crossings.push_back({1, std::nullopt, 3.8317});
  const auto j = io::report_json(rep);
  EXPECT_EQ(j["snapshots"][0]["tv_distance"], 0.1);
  EXPECT_TRUE(j["crossings"][1]["first_crossing"].is_null());
  std::ostringstream csv;
  io::write_report_csv(csv, rep);
  EXPECT_EQ(csv.str(), "t,tv_distance,mean,variance,exact_mean,exact_variance\n30,0.10000000000000001,0,440,0,450\n");
}

}  // namespace
