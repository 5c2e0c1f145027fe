// Drives the built command-line tool end to end.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "tailweight/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string cli = TAILWEIGHT_CLI;
const std::string plans = TAILWEIGHT_PLANS;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("tw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  // Runs the tool with `args`; stdout goes to `out_file` inside the scratch dir.
  int run(const std::string& args, const std::string& out_file = "stdout.txt") const {
    const std::string cmd = cli + " " + args + " > " + path(out_file) + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    return tailweight::io::read_file(path(name));
  }

  void write(const std::string& name, const std::string& content) const {
    tailweight::io::write_file(path(name), content);
  }

  fs::path dir;
};

}  // namespace

TEST_F(CliTest, SampleIsDeterministic) {
  ASSERT_EQ(run("sample --model pareto --gamma 1 --n 5 --seed 7 --out " + path("a.csv")), 0);
  ASSERT_EQ(run("sample --model pareto --gamma 1 --n 5 --seed 7 --out " + path("b.csv")), 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  const auto meta = json::parse(read("a.csv.meta.json"));
  EXPECT_EQ(meta["seed"], 7);
  EXPECT_EQ(meta["plan"]["model"], "pareto");
  EXPECT_EQ(meta["plan"]["n"], 5);
  EXPECT_TRUE(meta.contains("version"));
  EXPECT_TRUE(meta.contains("plan_hash"));
}

TEST_F(CliTest, SampleHallRows) {
  ASSERT_EQ(run("sample --model hall --gamma 1 --d1 1 --d2 0.5 --beta 0.75 --n 500 --seed 42 --out " +
                path("h.csv")),
            0);
  const auto v = tailweight::io::read_sample_csv(path("h.csv"));
  ASSERT_EQ(v.size(), 500u);
  for (double x : v) EXPECT_GT(x, 0.0);
}

TEST_F(CliTest, SampleRejectsZeroD2) {
  EXPECT_EQ(run("sample --model hall --gamma 1 --d1 1 --d2 0 --beta 1 --n 5 --seed 1"), 2);
  EXPECT_NE(read("stderr.txt").find("d2"), std::string::npos);
}

TEST_F(CliTest, SampleUnwritablePath) {
  EXPECT_EQ(run("sample --model pareto --gamma 1 --n 5 --seed 1 --out /nonexistent/x.csv"), 3);
  EXPECT_NE(read("stderr.txt").find("/nonexistent/x.csv"), std::string::npos);
}

TEST_F(CliTest, EstimateHill) {
  const double e = std::exp(1.0);
  std::string csv;
  for (int j = 1; j <= 4; ++j) csv += tailweight::io::format_double(std::pow(e, j)) + "\n";
  write("e4.csv", csv);
  ASSERT_EQ(run("estimate --input " + path("e4.csv") + " --method hill --k 2"), 0);
  const auto r = json::parse(read("stdout.txt"));
  EXPECT_NEAR(r["estimates"]["hill"]["value"].get<double>(), 1.5, 1e-12);
  EXPECT_EQ(r["n"], 4);
}

TEST_F(CliTest, EstimateWps) {
  const double e = std::exp(1.0);
  write("e3.csv", "x\n" + tailweight::io::format_double(e) + "\n" +
                      tailweight::io::format_double(e * e) + "\n" +
                      tailweight::io::format_double(e * e * e) + "\n");
  ASSERT_EQ(run("estimate --input " + path("e3.csv") + " --method wps --p 1 --rho 0 --k 1"), 0);
  const auto r = json::parse(read("stdout.txt"));
  EXPECT_NEAR(r["estimates"]["wps"]["value"].get<double>(), 2.73072, 5e-6);
  EXPECT_TRUE(r["estimates"]["wps"].contains("ci"));
  EXPECT_FALSE(r["warnings"].empty());
}

TEST_F(CliTest, EstimateErrors) {
  ASSERT_EQ(run("sample --model pareto --gamma 1 --n 1000 --seed 3 --out " + path("s.csv")), 0);
  EXPECT_EQ(run("estimate --input " + path("s.csv") + " --method pickands --k 300"), 2);
  EXPECT_NE(read("stderr.txt").find("pickands"), std::string::npos);
  write("bad.csv", "x\n1.5\n2.0\noops\n");
  EXPECT_EQ(run("estimate --input " + path("bad.csv") + " --method hill --k 1"), 2);
  EXPECT_NE(read("stderr.txt").find(":4"), std::string::npos);
  EXPECT_EQ(run("estimate --input " + path("missing.csv") + " --k 1"), 3);
  EXPECT_EQ(run("estimate --input " + path("s.csv") + " --k 1000"), 2);
}

TEST_F(CliTest, EstimateAllReportsPerMethod) {
  ASSERT_EQ(run("sample --model pareto --gamma 1 --n 1000 --seed 3 --out " + path("s.csv")), 0);
  ASSERT_EQ(run("estimate --input " + path("s.csv") + " --method all --k 300 --format json"), 0);
  const auto r = json::parse(read("stdout.txt"));
  EXPECT_TRUE(r["estimates"]["pickands"].contains("error"));
  EXPECT_TRUE(r["estimates"]["hill"].contains("value"));
  ASSERT_EQ(run("estimate --input " + path("s.csv") + " --method all --k 30 --format csv"), 0);
  EXPECT_EQ(read("stdout.txt").rfind("estimator,value,t_n,ci_lower,ci_upper,ci_level\n", 0), 0u);
}

TEST_F(CliTest, ReingestedSampleEstimatesExactly) {
  ASSERT_EQ(run("sample --model frechet --gamma 1 --n 2000 --seed 8 --header --out " +
                path("f.csv")),
            0);
  ASSERT_EQ(run("estimate --input " + path("f.csv") + " --method wps --k 20 --rho 1", "r1.json"), 0);
  ASSERT_EQ(run("estimate --input " + path("f.csv") + " --method wps --k 20 --rho 1", "r2.json"), 0);
  EXPECT_EQ(read("r1.json"), read("r2.json"));
}

TEST_F(CliTest, TableSmoke) {
  ASSERT_EQ(run("table --plan " + plans + "/case1.json --replications 1 --out " + path("t.csv")), 0);
  std::istringstream lines(read("t.csv"));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "estimator,rho,gamma,p,mean,mse");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 4 * 4 * 3 * 4);  // (rho, gamma, p) x {wps, hill, pickands, moment}
  const auto meta = json::parse(read("t.csv.meta.json"));
  EXPECT_EQ(meta["plan"]["replications"], 1);
  EXPECT_EQ(meta["seed"], 20240611);
}

TEST_F(CliTest, TablePlanErrors) {
  write("p.json", R"({"model": "pareto", "gammas": [1], "rhos": [0], "n": 100, "k": 10,
                      "replications": 2, "seed": 1})");
  EXPECT_EQ(run("table --plan " + path("p.json") + " --out " + path("t.csv")), 2);
  EXPECT_NE(read("stderr.txt").find("ps"), std::string::npos);
  write("q.json", "{not json");
  EXPECT_EQ(run("table --plan " + path("q.json") + " --out " + path("t.csv")), 2);
}

TEST_F(CliTest, ZnStudyOutputs) {
  const std::string args = "zn-study --plan " + plans +
                           "/zn_frechet.json --replications 300 --out " + path("z");
  ASSERT_EQ(run(args), 0);
  const auto summary = json::parse(read("z.summary.json"));
  for (const char* key : {"zn_mean", "zn_sd", "gamma_hat_mean", "chi2_pvalue"}) {
    EXPECT_TRUE(summary.contains(key)) << key;
  }
  std::istringstream lines(read("z.histogram.csv"));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "bin_left,bin_right,count,fitted_density_at_midpoint");
  long total = 0;
  while (std::getline(lines, line)) {
    std::stringstream fields(line);
    std::string cell;
    for (int c = 0; c < 3; ++c) std::getline(fields, cell, ',');
    total += std::stol(cell);
  }
  EXPECT_EQ(total, summary["replications_used"].get<long>());
  const std::string first = read("z.histogram.csv");
  ASSERT_EQ(run(args), 0);
  EXPECT_EQ(read("z.histogram.csv"), first);
}

TEST_F(CliTest, ZnStudyRejectsFlatWeights) {
  EXPECT_EQ(run("zn-study --plan " + plans + "/zn_frechet.json --rho 0 --out " + path("z")), 2);
}

TEST_F(CliTest, DiagnoseB1) {
  ASSERT_EQ(run("diagnose-b1 --d1 2 --d2 0 --n 1000 --k 100"), 0);
  const auto r = json::parse(read("stdout.txt"));
  EXPECT_NEAR(r["b1"].get<double>(), 10.0 * std::log(2.0), 1e-9);
  EXPECT_EQ(run("diagnose-b1 --d1 1 --d2 -1e6 --beta 1 --n 1000 --k 100"), 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("sample --n 3"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--version"), 0);
}

TEST_F(CliTest, ThreadsFromEnvironment) {
  const std::string args = "table --plan " + plans + "/case2.json --replications 20 --out ";
  ASSERT_EQ(std::system(("TAILWEIGHT_THREADS=1 " + cli + " " + args + path("a.csv") + " > /dev/null")
                            .c_str()),
            0);
  ASSERT_EQ(std::system(("TAILWEIGHT_THREADS=5 " + cli + " " + args + path("b.csv") + " > /dev/null")
                            .c_str()),
            0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
}
