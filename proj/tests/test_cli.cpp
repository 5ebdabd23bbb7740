#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "manifest.hpp"
#include "parse.hpp"
#include "table.hpp"

namespace fs = std::filesystem;
using namespace floquetlab::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "floquetlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("floquetlab-test-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST(Parse, NGrid) {
  EXPECT_EQ(parse_n_grid("1e3:1e6:4"), (std::vector<std::int64_t>{1000, 10'000, 100'000, 1'000'000}));
  EXPECT_EQ(parse_n_grid("100:1000:2"), (std::vector<std::int64_t>{100, 1000}));
  EXPECT_EQ(parse_n_grid("10,20,50"), (std::vector<std::int64_t>{10, 20, 50}));
  EXPECT_THROW(parse_n_grid("10,5"), UsageError);
  EXPECT_THROW(parse_n_grid("abc"), UsageError);
  EXPECT_THROW(parse_n_grid("1.5,3"), UsageError);
}

TEST(Parse, Angles) {
  const double pi = std::acos(-1.0);
  EXPECT_EQ(parse_angle("pi"), pi);
  EXPECT_EQ(parse_angle("-pi/2"), -pi / 2);
  EXPECT_EQ(parse_angle("3pi/2"), 3 * pi / 2);
  EXPECT_EQ(parse_angle("0.25pi"), 0.25 * pi);
  EXPECT_EQ(parse_angle("1.5"), 1.5);
  EXPECT_THROW(parse_angle("pie"), UsageError);
  EXPECT_EQ(parse_angle_list("pi,1").size(), 2u);
}

TEST(Parse, XGridAndGamma) {
  EXPECT_EQ(parse_x_grid("default").size(), 5u);
  EXPECT_EQ(parse_x_grid("default:3").size(), 3u);
  EXPECT_EQ(parse_x_grid("1,2"), (std::vector<double>{1.0, 2.0}));
  EXPECT_THROW(parse_x_grid("0"), UsageError);
  EXPECT_THROW(parse_x_grid("1,,2"), UsageError);
  EXPECT_THROW(parse_x_grid("7"), UsageError);
  const auto g = parse_linear_grid("0.55:0.95:5");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_NEAR(g[2], 0.75, 1e-15);
}

TEST(Parse, Beta) {
  EXPECT_EQ(parse_beta("1/3", 0).value(), mpq_class(1, 3));
  EXPECT_EQ(parse_beta("golden", 0).source_depth(), 200);
  EXPECT_THROW(parse_beta("gold", 0), UsageError);
  EXPECT_EQ(parse_coeffs("0,golden", 0).size(), 2u);
}

TEST(Table, CsvQuotingAndRoundTrip) {
  ResultTable t({{"name", ""}, {"value", "rad"}, {"count", "count"}, {"ok", ""}});
  t.add_row({std::string("plain"), 0.1, std::int64_t{3}, true});
  t.add_row({std::string("a,b \"q\""), 1.0 / 3.0, std::int64_t{-1}, false});
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv,
            "name,value,count,ok\n"
            "plain,0.1,3,true\n"
            "\"a,b \"\"q\"\"\",0.3333333333333333,-1,false\n");
  EXPECT_THROW(t.add_row({std::string("x"), 1.0}), std::exception);
  EXPECT_THROW(t.add_row({1.0, 1.0, std::int64_t{1}, true}), std::exception);
  for (double v : {0.1, 1e-300, 123456.789, -2.5e17, 5e-324}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Manifest, HashIsCanonical) {
  std::map<std::string, std::string> a = {{"beta", "golden"}, {"j", "1"}};
  std::map<std::string, std::string> b;
  b["j"] = "1";
  b["beta"] = "golden";
  EXPECT_EQ(params_hash("discrepancy", a), params_hash("discrepancy", b));
  EXPECT_NE(params_hash("discrepancy", a), params_hash("weyl", a));
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliRun, DiscrepancyGolden) {
  const auto r = invoke({"discrepancy", "--j", "1", "--beta", "golden", "--n-grid", "1e3:1e6:4", "--m", "64",
                         "--out", out("d")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir_ / "d" / "discrepancy.csv");
  ASSERT_EQ(rows.size(), 6u);  // header, 4 rows, footer
  EXPECT_EQ(rows[0], (std::vector<std::string>{"N", "D_N", "ET_bound"}));
  EXPECT_EQ(rows[5][0], "slope");
  const double slope = std::stod(rows[5][1]);
  EXPECT_GE(slope, -1.05);
  EXPECT_LE(slope, -0.85);
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_LE(std::stod(rows[i][1]), std::stod(rows[i][2]));
}

TEST_F(CliRun, DiscrepancyRationalDoesNotDecay) {
  const auto r = invoke({"discrepancy", "--beta", "1/3", "--n-grid", "100:1000:2", "--out", out("d")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir_ / "d" / "discrepancy.csv");
  for (std::size_t i = 1; i <= 2; ++i) EXPECT_GE(std::stod(rows[i][1]), 1.0 / 3.0 - 1e-12);
}

TEST_F(CliRun, UsageErrors) {
  const auto missing = invoke({"discrepancy", "--out", out("x")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("Usage"), std::string::npos);
  EXPECT_EQ(invoke({"discrepancy", "--beta", "nonsense", "--out", out("x")}).code, 2);
  EXPECT_EQ(invoke({"scount", "--beta", "golden", "--gamma", "0.4", "--out", out("x")}).code, 2);
  EXPECT_EQ(invoke({"scount", "--beta", "golden", "--x-grid", "1,abc", "--out", out("x")}).code, 2);
  EXPECT_EQ(invoke({"nosuch"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliRun, ResourceLimit) {
  const auto r = invoke({"spectrum", "--dim", "5000", "--out", out("s")});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(fs::exists(dir_ / "s" / "manifest.json"));
}

TEST_F(CliRun, SpectrumAnalyticTwoByTwo) {
  const auto r = invoke({"spectrum", "--coeffs", "0,1/2", "--amplitudes", "1,1", "--lambdas", "pi", "--dim", "2",
                         "--out", out("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir_ / "s" / "eigenphases.csv");
  ASSERT_EQ(rows.size(), 3u);
  const double pi = std::acos(-1.0);
  EXPECT_NEAR(std::stod(rows[1][1]), pi / 2, 1e-12);
  EXPECT_NEAR(std::stod(rows[2][1]), 3 * pi / 2, 1e-12);
}

TEST_F(CliRun, SpectrumRankZeroIsUnperturbed) {
  const auto r = invoke({"spectrum", "--coeffs", "0,1/8", "--rank", "0", "--dim", "4", "--out", out("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir_ / "s" / "eigenphases.csv");
  // -2 pi n / 8 mod 2 pi for n = 0..3, sorted
  const double pi = std::acos(-1.0);
  const std::vector<double> want = {0.0, 1.25 * pi, 1.5 * pi, 1.75 * pi};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::stod(rows[i + 1][1]), want[i], 1e-14);
}

TEST_F(CliRun, SpectrumRankOneResidualsAndCache) {
  const std::vector<std::string> args = {"spectrum", "--dim", "64", "--lambdas", "1.3", "--out", out("s")};
  const auto r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(slurp(dir_ / "s" / "summary.json"));
  EXPECT_LE(summary["max_abs_residual"].get<double>(), 1e-6);
  EXPECT_LE(summary["unitarity_defect"].get<double>(), summary["unitarity_tolerance"].get<double>());

  const auto manifest = read_manifest(dir_ / "s");
  ASSERT_TRUE(manifest.has_value());
  EXPECT_EQ(manifest->hash, params_hash("spectrum", manifest->params));
  EXPECT_EQ(manifest->command, "spectrum");
  EXPECT_EQ(manifest->outputs.size(), 3u);

  const auto again = invoke(args);
  EXPECT_EQ(again.code, 0);
  EXPECT_NE(again.out.find("cached"), std::string::npos);
  const auto forced = invoke({"spectrum", "--dim", "64", "--lambdas", "1.3", "--out", out("s"), "--force"});
  EXPECT_EQ(forced.out.find("cached"), std::string::npos);
}

TEST_F(CliRun, DynamicsAnalyticAndNoKick) {
  auto r = invoke({"dynamics", "--coeffs", "0,1/2", "--amplitudes", "1,1", "--lambdas", "pi", "--dim", "2",
                   "--kicks", "100", "--out", out("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = read_csv(dir_ / "a" / "dynamics.csv");
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_NEAR(std::stod(rows[100][3]), 0.5, 1e-12);

  r = invoke({"dynamics", "--rank", "0", "--amplitudes", "0,0,1", "--dim", "16", "--kicks", "50", "--out", out("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  rows = read_csv(dir_ / "b" / "dynamics.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), 1.0, 1e-12);
}

TEST_F(CliRun, DynamicsWienerSummary) {
  const auto r = invoke({"dynamics", "--dim", "128", "--kicks", "10000", "--out", out("w")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = nlohmann::json::parse(slurp(dir_ / "w" / "wiener.json"));
  EXPECT_LE(w["abs_difference"].get<double>(), 0.02);
  EXPECT_TRUE(w["within_tolerance"].get<bool>());
}

TEST_F(CliRun, ScountAnnotationsAndDeterminism) {
  auto r = invoke({"scount", "--j", "2", "--beta", "golden", "--gamma", "0.9", "--n-grid", "1e2:1e4:4", "--eta", "1",
                   "--out", out("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(slurp(dir_ / "a" / "summary.json"));
  EXPECT_FALSE(s["gammas"][0]["inside_window"].get<bool>());

  const std::vector<std::string> base = {"scount", "--j", "1", "--beta", "golden", "--gamma", "0.6,0.75",
                                         "--n-grid", "1e3:3e4:4"};
  auto one = base, many = base;
  one.insert(one.end(), {"--threads", "1", "--out", out("t1")});
  many.insert(many.end(), {"--threads", "8", "--out", out("t8")});
  ASSERT_EQ(invoke(one).code, 0);
  ASSERT_EQ(invoke(many).code, 0);
  EXPECT_EQ(slurp(dir_ / "t1" / "cells.csv"), slurp(dir_ / "t8" / "cells.csv"));
  EXPECT_EQ(slurp(dir_ / "t1" / "summary.json"), slurp(dir_ / "t8" / "summary.json"));
  EXPECT_EQ(read_manifest(dir_ / "t1")->hash, read_manifest(dir_ / "t8")->hash);
}

TEST_F(CliRun, WeylTable) {
  const auto r = invoke({"weyl", "--j", "1", "--beta", "0", "--n-grid", "10,100", "--freq", "1,2", "--out", out("w")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir_ / "w" / "weyl.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[3][4], "100");
}
