#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "memcon_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "memcon");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = memcon::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("memcon_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
    write("three_node.graph", "n 3\ne 0 1 1\ne 1 0 1/4\ne 1 2 3/4\ne 2 1 1/3\ne 2 2 2/3\n");
    write("present.config", "blue\nblue\nred\n");
    write("history.config", "green\nred\nblue\n\nred\nblue\nblue\n\nblue\nblue\nred\n");
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& body) {
    std::ofstream(dir_ / name) << body;
    return path(name);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

}  // namespace

TEST_F(Cli, CheckOddCycle) {
  auto r = run({"check", "--family", "cycle", "--n", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("well_behaved: true"), std::string::npos);
  EXPECT_NE(r.out.find("period: 1"), std::string::npos);
  auto even = run({"check", "--family", "cycle", "--n", "8", "--format", "json"});
  auto j = nlohmann::json::parse(even.out);
  EXPECT_EQ(j["period"], 2);
  EXPECT_EQ(j["well_behaved"], false);
}

TEST_F(Cli, GenRoundTripsThroughCheck) {
  auto g = run({"gen", "--family", "torus_grid", "--n", "15"});
  ASSERT_EQ(g.code, 0);
  EXPECT_NE(g.out.find("e 0 1 1/4"), std::string::npos);
  write("torus.graph", g.out);
  auto c = run({"check", "--graph", path("torus.graph")});
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("nodes: 15"), std::string::npos);
}

TEST_F(Cli, StationaryExactAndFloat) {
  auto r = run({"stationary", "--graph", path("three_node.graph"), "--exact"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "node,influence\n0,1/14\n1,2/7\n2,9/14\n");
  auto f = run({"stationary", "--graph", path("three_node.graph"), "--format", "json"});
  auto j = nlohmann::json::parse(f.out);
  EXPECT_NEAR(j["2"].get<double>(), 9.0 / 14, 1e-12);
}

TEST_F(Cli, WinprobMemoryless) {
  auto r = run({"winprob", "--graph", path("three_node.graph"), "--config", path("present.config"), "--colours", "red,blue"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["red"].get<double>(), 0.642857, 1e-6);
  EXPECT_NEAR(j["blue"].get<double>(), 5.0 / 14, 1e-12);
}

TEST_F(Cli, WinprobMemoryExact) {
  auto r = run({"winprob", "--graph", path("three_node.graph"), "--config", path("history.config"), "--colours",
                "red,blue,green", "--m", "2", "--p0", "1/3", "--p1", "1/3", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["blue"], "25/42");
  EXPECT_EQ(j["red"], "11/28");
  EXPECT_EQ(j["green"], "1/84");
  EXPECT_NE(r.err.find("--p2 1/3"), std::string::npos);
  auto listed = run({"winprob", "--graph", path("three_node.graph"), "--config", path("history.config"), "--colours",
                     "red,blue,green", "--p", "1/3,1/3,1/3"});
  EXPECT_NEAR(nlohmann::json::parse(listed.out)["green"].get<double>(), 1.0 / 84, 1e-12);
}

TEST_F(Cli, WinprobEarlyExpansion) {
  auto r = run({"winprob", "--graph", path("three_node.graph"), "--config", path("present.config"), "--colours",
                "red,blue", "--m", "1", "--p0", "0.7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["red"].get<double>(), 9.0 / 14, 1e-12);
}

TEST_F(Cli, SimulateDeterministic) {
  std::vector<std::string> args{"simulate", "--graph", path("three_node.graph"), "--runs", "10", "--seed", "7"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 23), "run,seed,winner,rounds\n");
  EXPECT_NE(a.err.find("--seed 7"), std::string::npos);
  auto unseeded = run({"simulate", "--graph", path("three_node.graph"), "--runs", "2"});
  EXPECT_NE(unseeded.err.find("--seed "), std::string::npos);
}

TEST_F(Cli, SimulateFromFileAndCap) {
  write("c4.graph", "n 4\ne 0 1 1/2\ne 0 3 1/2\ne 1 0 1/2\ne 1 2 1/2\ne 2 1 1/2\ne 2 3 1/2\ne 3 0 1/2\ne 3 2 1/2\n");
  write("rbrb.config", "0\n1\n0\n1\n");
  auto r = run({"simulate", "--graph", path("c4.graph"), "--init", "file", "--config", path("rbrb.config"),
                "--runs", "3", "--cap", "100", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("NONE,CAP_EXCEEDED"), std::string::npos);
}

TEST_F(Cli, DumpMemoryGraph) {
  auto r = run({"dump-memory-graph", "--graph", path("three_node.graph"), "--m", "1", "--p0", "1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("v 4 L1_1"), std::string::npos);
  EXPECT_NE(r.out.find("e L1_1 L0_1 1"), std::string::npos);
  EXPECT_NE(r.out.find("e L0_1 L1_2 3/8"), std::string::npos);
  write("mg.graph", r.out);
  EXPECT_NE(run({"check", "--graph", path("mg.graph")}).out.find("well_behaved: true"), std::string::npos);
}

TEST_F(Cli, ExperimentsWriteCsv) {
  auto r = run({"exp1", "--family", "clique", "--n", "9", "--runs", "5", "--seed", "3", "--p0-grid", "0.5,1",
                "--out", path("e1.csv"), "--raw", path("raw.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("e1.csv"));
  auto rows = memcon::read_summary_csv(in);
  EXPECT_EQ(rows.size(), 2u);
  EXPECT_NE(r.err.find("# welch clique"), std::string::npos);
  auto e2 = run({"exp2", "--family", "cycle,bintree", "--sizes", "9,7", "--runs", "4", "--seed", "3"});
  ASSERT_EQ(e2.code, 0) << e2.err;
  std::istringstream is(e2.out);
  EXPECT_EQ(memcon::read_summary_csv(is).size(), 4u);
  auto again = run({"exp2", "--family", "cycle,bintree", "--sizes", "9,7", "--runs", "4", "--seed", "3"});
  EXPECT_EQ(again.out, e2.out);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"check", "--bogus"}).code, 1);
  EXPECT_EQ(run({"check", "--family", "cycle", "--n", "2"}).code, 1);
  EXPECT_EQ(run({"check", "--graph", path("missing.graph")}).code, 1);
  EXPECT_EQ(run({"winprob", "--graph", path("three_node.graph"), "--config", path("present.config"), "--m", "2"}).code, 1);
  EXPECT_EQ(run({"winprob", "--graph", path("three_node.graph"), "--config", path("present.config"), "--p0", "0.5",
                 "--p1", "0.6"}).code, 1);
  auto e = run({"check", "--graph", path("three_node.graph"), "--family", "cycle"});
  EXPECT_EQ(e.code, 1);
  EXPECT_EQ(std::count(e.err.begin(), e.err.end(), '\n'), 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
