#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "json.hpp"
#include "xychain/chain_model.hpp"
#include "xychain/spec_io.hpp"

namespace fs = std::filesystem;
using namespace xychain;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "xychain");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("xychain_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write_spec(const std::string& name, const PeriodicChainSpec& spec) {
    return write(name, spec_to_json(spec).dump());
  }
  std::string shipped() const { return std::string(XYCHAIN_SPEC_DIR) + "/dipolar_chain_1001.json"; }

  fs::path dir_;
};

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

PeriodicChainSpec two_spin(double d) {
  PeriodicChainSpec s;
  s.k = 1;
  s.n = 2;
  s.form = ResidueForm::explicit_sites;
  s.omega = {0, 0};
  s.couplings = {d};
  return s;
}

}  // namespace

TEST_F(CliTest, SpectrumOfShippedChain) {
  const Result r = invoke({"spectrum", "--spec", shipped()});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 1002u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"index", "eigenvalue", "branch_tag"}));
  for (std::size_t i = 2; i < table.size(); ++i) EXPECT_LT(std::stod(table[i - 1][1]), std::stod(table[i][1]));
}

TEST_F(CliTest, SpectrumIsByteIdenticalAcrossRunsAndThreads) {
  const Result a = invoke({"spectrum", "--spec", shipped()});
  const Result b = invoke({"spectrum", "--spec", shipped(), "--threads", "3"});
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, OracleAgreesWithClosedForm) {
  const auto closed = rows(invoke({"spectrum", "--spec", shipped()}).out);
  const Result o = invoke({"spectrum", "--spec", shipped(), "--use-oracle"});
  ASSERT_EQ(o.code, cli::kSuccess);
  const auto dense = rows(o.out);
  ASSERT_EQ(closed.size(), dense.size());
  for (std::size_t i = 1; i < closed.size(); ++i) {
    EXPECT_NEAR(std::stod(closed[i][1]), std::stod(dense[i][1]), 1e-8 * 2.0);
    EXPECT_EQ(dense[i][2], "dense");
  }
}

TEST_F(CliTest, ExplicitFormNeedsOracle) {
  PeriodicChainSpec s;
  s.k = 1;
  s.n = 4;
  s.form = ResidueForm::explicit_sites;
  s.omega = {0, 0.1, 0.2, 0.3};
  s.couplings = {1, 2, 3};
  const std::string path = write_spec("explicit.json", s);
  const Result r = invoke({"spectrum", "--spec", path});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_NE(r.err.find("periodic"), std::string::npos);
  EXPECT_EQ(invoke({"spectrum", "--spec", path, "--use-oracle"}).code, cli::kSuccess);
}

TEST_F(CliTest, PeriodTwoRoutesToOracle) {
  PeriodicChainSpec s;
  s.k = 2;
  s.n = 6;
  s.omega = {0.1, -0.2};
  s.couplings = {1.0, 0.4};
  const Result r = invoke({"spectrum", "--spec", write_spec("k2.json", s)});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  EXPECT_NE(r.err.find("dense oracle"), std::string::npos);
  EXPECT_EQ(rows(r.out).size(), 12u);
}

TEST_F(CliTest, InputErrors) {
  EXPECT_EQ(invoke({"spectrum", "--spec", (dir_ / "missing.json").string()}).code, cli::kInputError);
  EXPECT_EQ(invoke({"spectrum", "--spec", write("bad.json", "{not json")}).code, cli::kInputError);
  EXPECT_EQ(invoke({"spectrum", "--spec", shipped(), "--tol", "-1"}).code, cli::kInputError);
  EXPECT_EQ(invoke({"mq", "--spec", shipped(), "--steps", "0"}).code, cli::kInputError);
  EXPECT_EQ(invoke({"mq", "--spec", shipped(), "--tmax", "-1"}).code, cli::kInputError);
  EXPECT_EQ(invoke({"nonsense"}).code, cli::kInputError);
  EXPECT_EQ(invoke({}).code, cli::kInputError);
  PeriodicChainSpec bad = dipolar_chain_1001();
  bad.couplings[1] = 0.0;
  EXPECT_EQ(invoke({"spectrum", "--spec", write_spec("zero.json", bad)}).code, cli::kInputError);
}

TEST_F(CliTest, MqOfShippedChain) {
  const Result r = invoke({"mq", "--spec", shipped(), "--tmax", "3e-3", "--steps", "600"});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  const auto table = rows(r.out);
  ASSERT_EQ(table.size(), 601u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"t", "G0", "G2"}));
  EXPECT_EQ(std::stod(table[1][1]), 1.0);
  EXPECT_NEAR(std::stod(table[600][0]), 3e-3, 1e-18);
  for (std::size_t i = 1; i < table.size(); ++i) {
    EXPECT_NEAR(std::stod(table[i][1]) + 2 * std::stod(table[i][2]), 1.0, 1e-12);
  }
}

TEST_F(CliTest, ManyBodyMatchesTraceForTwoSpins) {
  const std::string path = write_spec("two.json", two_spin(0.9));
  const Result trace = invoke({"mq", "--spec", path, "--tmax", "5", "--steps", "40", "--use-oracle"});
  const Result exact = invoke({"mq", "--spec", path, "--tmax", "5", "--steps", "40", "--manybody"});
  ASSERT_EQ(trace.code, cli::kSuccess) << trace.err;
  ASSERT_EQ(exact.code, cli::kSuccess) << exact.err;
  const auto a = rows(trace.out), b = rows(exact.out);
  ASSERT_EQ(a.size(), 41u);
  ASSERT_EQ(b.size(), 41u);
  for (std::size_t i = 1; i < a.size(); ++i) {
    for (int c = 1; c <= 2; ++c) EXPECT_NEAR(std::stod(a[i][c]), std::stod(b[i][c]), 1e-10);
    const double s = std::sin(0.9 * std::stod(a[i][0]));
    EXPECT_NEAR(std::stod(a[i][2]), 0.5 * s * s, 1e-12);
  }
}

TEST_F(CliTest, ManyBodyRejectsLongChains) {
  const Result r = invoke({"mq", "--spec", shipped(), "--manybody", "--steps", "2"});
  EXPECT_EQ(r.code, cli::kInputError);
}

TEST_F(CliTest, VerifyOutcomes) {
  const Result ok = invoke({"verify", "--seed", "5", "--cases", "10"});
  ASSERT_EQ(ok.code, cli::kSuccess) << ok.err;
  const auto doc = nlohmann::json::parse(ok.out);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["seed"], 5);

  const Result fault = invoke({"verify", "--cases", "3", "--inject-fault", "eigenvalue"});
  EXPECT_EQ(fault.code, cli::kPropertyFailure);
  EXPECT_NE(fault.err.find("failed"), std::string::npos);

  const Result none = invoke({"verify", "--cases", "0"});
  EXPECT_EQ(none.code, cli::kSuccess);
  EXPECT_NE(none.err.find("warning"), std::string::npos);

  EXPECT_EQ(invoke({"verify", "--cases", "-1"}).code, cli::kInputError);
  EXPECT_EQ(invoke({"verify", "--inject-fault", "bogus"}).code, cli::kInputError);
}

TEST_F(CliTest, BenchSingleAndMultipleSizes) {
  const Result one = invoke({"bench", "--sizes", "101"});
  ASSERT_EQ(one.code, cli::kSuccess) << one.err;
  const auto a = nlohmann::json::parse(one.out);
  ASSERT_EQ(a["runs"].size(), 1u);
  EXPECT_EQ(a["runs"][0]["N"], 101);
  EXPECT_FALSE(a.contains("exponents"));
  EXPECT_LE(a["runs"][0]["max_eigenvalue_difference_over_scale"].get<double>(), 1e-12);

  const Result two = invoke({"bench", "--sizes", "101,401", "--k", "4", "--seed", "9"});
  ASSERT_EQ(two.code, cli::kSuccess) << two.err;
  const auto b = nlohmann::json::parse(two.out);
  ASSERT_EQ(b["runs"].size(), 2u);
  EXPECT_TRUE(b["exponents"].contains("difference"));
  EXPECT_EQ(invoke({"bench", "--k", "2", "--sizes", "11"}).code, cli::kInputError);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  const std::string out_path = (dir_ / "mq.csv").string();
  nlohmann::json cfg = {{"spec", shipped()}, {"tmax", 1e-3}, {"steps", 11}, {"out", out_path}};
  const std::string cfg_path = write("config.json", cfg.dump());

  const Result r = invoke({"mq", "--config", cfg_path});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out_path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto table = rows(text);
  ASSERT_EQ(table.size(), 12u);
  EXPECT_NEAR(std::stod(table[11][0]), 1e-3, 1e-18);

  const Result flagged = invoke({"mq", "--config", cfg_path, "--steps", "3", "--out", (dir_ / "b.csv").string()});
  ASSERT_EQ(flagged.code, cli::kSuccess);
  std::ifstream in2(dir_ / "b.csv");
  const std::string text2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  EXPECT_EQ(rows(text2).size(), 4u);

  EXPECT_EQ(invoke({"mq", "--config", write("broken.json", "[1,2]")}).code, cli::kInputError);
}
