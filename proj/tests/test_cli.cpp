#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "advinterp/cli/commands.hpp"
#include "advinterp/cli/run_config.hpp"

using namespace advinterp::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() / ("advinterp_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& path) {
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  return line;
}

std::size_t line_count(const std::string& path) {
  const auto s = slurp(path);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

int run(std::vector<std::string> args, std::string* err_out = nullptr) {
  args.insert(args.begin(), "advinterp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_out) *err_out = err.str();
  return code;
}

void write(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

const char* kTinySimulate =
    "cases=1\nn_train=30\nn_vali=30\nn_test=10\nradii=0.05\nmethods=LP\nreplications=1\n"
    "degree=2\nbandwidth_count=4\n";

}  // namespace

TEST(RunConfig, ParseAndRoundTrip) {
  const auto c = RunConfig::parse("simulate",
                                  "# comment\n\nseed = 7\nradii=0, 0.05,0.1\nmethods=LP,SI\n");
  EXPECT_EQ(c.get_int("seed", 0), 7);
  EXPECT_EQ(c.get_doubles("radii", {}), (std::vector<double>{0.0, 0.05, 0.1}));
  EXPECT_EQ(c.get_strings("methods", {}), (std::vector<std::string>{"LP", "SI"}));
  const auto again = RunConfig::parse("simulate", c.serialize());
  EXPECT_EQ(again, c);
  EXPECT_EQ(again.serialize(), c.serialize());
}

TEST(RunConfig, RejectsUnknownKeyByName) {
  try {
    RunConfig::parse("phase-diagram", "regime=low\nwibble=3\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "wibble");
    EXPECT_NE(std::string(e.what()).find("wibble"), std::string::npos);
  }
  EXPECT_THROW(RunConfig::parse("simulate", "no equals sign\n"), ConfigError);
}

TEST(RunConfig, TypedGettersReportKey) {
  const auto c = RunConfig::parse("simulate", "seed=abc\nreplications=1e2\n");
  EXPECT_EQ(c.get_int("replications", 0), 100);
  try {
    c.get_int("seed", 0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "seed");
  }
}

TEST(Cli, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_double(12345678901.0), "1.23456789e+10");
}

TEST(Cli, SimulateHeadersAndRowCount) {
  TempDir dir("sim");
  write(dir / "c.cfg", kTinySimulate);
  ASSERT_EQ(run({"simulate", "--config", dir / "c.cfg", "--out", dir.path().string()}), 0);
  EXPECT_EQ(first_line(dir / "records.csv"), kRecordsHeader);
  EXPECT_EQ(first_line(dir / "summary.csv"), kSummaryHeader);
  EXPECT_EQ(line_count(dir / "records.csv"), 2u);
  EXPECT_EQ(line_count(dir / "summary.csv"), 2u);
}

TEST(Cli, GoldenHeaders) {
  EXPECT_STREQ(kRecordsHeader, "case,n,r,method,rep,adv_loss,std_loss,train_mse,max_resid,bandwidth");
  EXPECT_STREQ(kSummaryHeader, "case,n,r,method,median,se");
  EXPECT_STREQ(kPhaseHeader, "r_exponent,regime,dominant_term,boundary_flag");
  EXPECT_STREQ(kTheoryHeader, "check,parameter,closed_form,mc_estimate,std_error,pass");
  EXPECT_STREQ(kCurseHeader, "n,r,method,median,se,log_log_n");
}

TEST(Cli, SeedFlagOverridesConfig) {
  TempDir dir("seed");
  write(dir / "c.cfg", std::string(kTinySimulate) + "seed=3\n");
  ASSERT_EQ(run({"simulate", "--config", dir / "c.cfg", "--out", dir / "a"}), 0);
  ASSERT_EQ(run({"simulate", "--config", dir / "c.cfg", "--out", dir / "b", "--seed", "3"}), 0);
  ASSERT_EQ(run({"simulate", "--config", dir / "c.cfg", "--out", dir / "c", "--seed", "4"}), 0);
  EXPECT_EQ(slurp(dir / "a/records.csv"), slurp(dir / "b/records.csv"));
  EXPECT_NE(slurp(dir / "a/records.csv"), slurp(dir / "c/records.csv"));
}

TEST(Cli, ConfigErrorsExitTwo) {
  TempDir dir("bad");
  std::string err;
  write(dir / "c.cfg", "bogus_key=1\n");
  EXPECT_EQ(run({"simulate", "--config", dir / "c.cfg", "--out", dir.path().string()}, &err), 2);
  EXPECT_NE(err.find("bogus_key"), std::string::npos);
  write(dir / "r.cfg", "regime=medium\n");
  EXPECT_EQ(run({"phase-diagram", "--config", dir / "r.cfg", "--out", dir.path().string()}, &err), 2);
  EXPECT_NE(err.find("regime"), std::string::npos);
  write(dir / "e.cfg", "r_exponents=\n");
  EXPECT_EQ(run({"phase-diagram", "--config", dir / "e.cfg", "--out", dir.path().string()}, &err), 2);
  EXPECT_EQ(run({"simulate", "--config", dir / "missing.cfg"}, &err), 2);
  EXPECT_EQ(run({"nonsense"}), 2);
  EXPECT_EQ(run({"simulate", "--workers", "0", "--out", dir.path().string()}), 2);
}

TEST(Cli, ReplicationFailureExitsThreeWithOutput) {
  TempDir dir("fail");
  write(dir / "c.cfg", std::string(kTinySimulate) + "noise=1e200\nnoise_convention=stddev\n");
  EXPECT_EQ(run({"simulate", "--config", dir / "c.cfg", "--out", dir.path().string()}), 3);
  EXPECT_EQ(first_line(dir / "records.csv"), kRecordsHeader);
  EXPECT_EQ(line_count(dir / "summary.csv"), 1u);
}

TEST(Cli, PhaseDiagramDefaults) {
  TempDir dir("phase");
  ASSERT_EQ(run({"phase-diagram", "--out", dir.path().string()}), 0);
  EXPECT_EQ(first_line(dir / "phase.csv"), kPhaseHeader);
  EXPECT_EQ(line_count(dir / "phase.csv"), 31u);
  const auto body = slurp(dir / "phase.csv");
  EXPECT_NE(body.find("\n0.1,low,attack,0\n"), std::string::npos);
  EXPECT_NE(body.find("\n1,low,estimation,0\n"), std::string::npos);
}

TEST(Cli, PhaseDiagramHighRegime) {
  TempDir dir("phase_high");
  write(dir / "c.cfg", "regime=high\nd=2\nr_exponents=0.25,0.5,1\n");
  ASSERT_EQ(run({"phase-diagram", "--config", dir / "c.cfg", "--out", dir.path().string()}), 0);
  const auto body = slurp(dir / "phase.csv");
  EXPECT_NE(body.find("\n0.25,high,interpolation-nonconverging,0\n"), std::string::npos);
}

TEST(Cli, TheoryCheckPassesAndNegativeControlFails) {
  TempDir dir("theory");
  write(dir / "c.cfg", "n_mc=200000\nk_mc=2000\ncost_designs=50\ncost_resolution=2000\n");
  ASSERT_EQ(run({"theory-check", "--config", dir / "c.cfg", "--out", dir / "ok"}), 0);
  const auto ok = slurp(dir / "ok/theory.csv");
  EXPECT_EQ(first_line(dir / "ok/theory.csv"), kTheoryHeader);
  EXPECT_EQ(ok.find(",fail\n"), std::string::npos);
  EXPECT_NE(ok.find("soft_moment,delta=0 sigma=1,1,"), std::string::npos);

  write(dir / "bad.cfg", "n_mc=200000\nk_mc=2000\ncost_designs=50\ncost_resolution=2000\ncorrupt_closed_form=1\n");
  ASSERT_EQ(run({"theory-check", "--config", dir / "bad.cfg", "--out", dir / "bad"}), 0);
  const auto bad = slurp(dir / "bad/theory.csv");
  EXPECT_NE(bad.find("soft_moment,delta=0 sigma=1,1.1,"), std::string::npos);
  EXPECT_NE(bad.find(",fail\n"), std::string::npos);
}

TEST(Cli, CurseSingleton) {
  TempDir dir("curse");
  write(dir / "c.cfg",
        "case=2\nmethod=SI\nr=0.1\nn_list=40\nreplications=2\nn_vali=30\nn_test=10\n"
        "degree=2\nbandwidth_count=4\n");
  ASSERT_EQ(run({"curse", "--config", dir / "c.cfg", "--out", dir.path().string()}), 0);
  EXPECT_EQ(first_line(dir / "curse.csv"), kCurseHeader);
  EXPECT_EQ(line_count(dir / "curse.csv"), 2u);
}

TEST(Cli, RateReport) {
  TempDir dir("rate");
  write(dir / "c.cfg", "n=10000\nr=1e-6\nbeta=1\nd=1\ndelta=0\nsigma=1\n");
  ASSERT_EQ(run({"rate-report", "--config", dir / "c.cfg", "--out", dir.path().string()}), 0);
  const auto body = slurp(dir / "rate.csv");
  EXPECT_NE(body.find(",high,1e-12,0.00215443469,0.01,interpolation\n"), std::string::npos);
}
