#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "run_tool.hpp"
#include "sphkern/kernels.hpp"

using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kData = SPHKERN_TEST_DATA;

}  // namespace

TEST(Cli, SpectrumMatchesClosedForm) {
  const auto o = tool::run("spectrum --m 2 --kernel gaussian:sigma=1 --kmax 30");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = parse_csv(o.out);
  ASSERT_EQ(rows.size(), 32u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "lambda_k", "multiplicity"}));
  for (int k = 0; k <= 30; ++k) {
    const double want = sphkern::gaussian_eigenvalue_closed(2, 1.0, k);
    EXPECT_NEAR(std::stod(rows[k + 1][1]), want, 1e-12 * want);
    EXPECT_EQ(rows[k + 1][2], std::to_string(2 * k + 1));
  }
}

TEST(Cli, JsonCarriesMetadataAndSummary) {
  const auto o = tool::run("spectrum --m 3 --kernel gaussian:sigma=1 --kmax 60 --format json");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_EQ(j["metadata"]["tool"], "sphkern");
  EXPECT_EQ(j["metadata"]["config"]["m"], 3);
  EXPECT_EQ(j["rows"].size(), 61u);
  EXPECT_LT(j["summary"]["trace_rel_err"].get<double>(), 1e-10);
  // floats carry 17 significant digits
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", j["rows"][0]["lambda_k"].get<double>());
  EXPECT_NE(o.out.find(buf), std::string::npos);
}

TEST(Cli, WidthsOfConstantKernel) {
  const auto o = tool::run("widths --m 2 --kernel constant:c=2 --kmax 4 --nmax 5");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = parse_csv(o.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_NEAR(std::stod(rows[1][1]), std::sqrt(8 * std::numbers::pi), 1e-14);
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(std::stod(rows[n + 1][1]), 0.0);
}

TEST(Cli, ApproxOperatorVanishesPastJacksonDegree) {
  const auto o = tool::run("approx-op --m 2 --family shifting --l 2 --n 5 --r auto --kmax 20");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto rows = parse_csv(o.out);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[1][4], "1");  // r auto = m - 1
  for (int k = 11; k <= 20; ++k) EXPECT_LE(std::abs(std::stod(rows[k + 1][6])), 1e-12);
}

TEST(Cli, AutoRPerFamily) {
  for (auto [fam, want] : {std::pair{"shifting", 2}, std::pair{"caps", 1}, std::pair{"steklov", 3}}) {
    const auto o = tool::run(std::string("approx-op --m 3 --family ") + fam +
                             " --l 3 --n 2 --kmax 4 --format json");
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = json::parse(o.out);
    EXPECT_EQ(j["rows"][0]["r"], want) << fam;
  }
}

TEST(Cli, CsvKernelInput) {
  const auto p = tool::run("spectrum --m 2 --kernel csv:" + kData +
                           "/power_quadratic.csv --kernel-kind power --kmax 3");
  ASSERT_EQ(p.code, 0) << p.err;
  auto rows = parse_csv(p.out);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(std::stod(rows[1][1]), 13 * pi / 3, 1e-13);
  EXPECT_NEAR(std::stod(rows[2][1]), 2 * pi / 3, 1e-13);
  EXPECT_NEAR(std::stod(rows[3][1]), 2 * pi / 15, 1e-13);
  EXPECT_NEAR(std::stod(rows[4][1]), 0.0, 1e-13);

  const auto e = tool::run("spectrum --m 2 --kernel csv:" + kData +
                           "/eigen_sparse.csv --kernel-kind eigen --kmax 5");
  ASSERT_EQ(e.code, 0) << e.err;
  rows = parse_csv(e.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(std::stod(rows[3][1]), 0.0);  // gap at k = 2 is zero-filled
  EXPECT_NEAR(std::stod(rows[4][1]), 4 * pi / 70, 1e-15);
  EXPECT_EQ(std::stod(rows[6][1]), 0.0);

  const auto dup = tool::run("spectrum --kernel csv:" + kData + "/duplicate.csv");
  EXPECT_EQ(dup.code, 2);
  const auto missing = tool::run("spectrum --kernel csv:" + kData + "/no_such_file.csv");
  EXPECT_EQ(missing.code, 2);
}

TEST(Cli, InvalidConfigExitsTwoWithJsonDiagnostics) {
  for (const std::string args :
       {"spectrum --m 1", "spectrum --kernel gaussian:sigma=-1", "widths --nmax 1000 --kmax 3",
        "approx-op --family steklov --r 0", "multiplier --t 4.0", "bogus", "spectrum --format xml",
        "spectrum --kernel dotpower:eps=0.5", "oracle-compare --m 3", "spectrum --kmax -1"}) {
    const auto o = tool::run(args);
    EXPECT_EQ(o.code, 2) << args << "\n" << o.err;
    ASSERT_FALSE(o.err.empty()) << args;
    const auto j = json::parse(o.err);
    EXPECT_EQ(j["kind"], "invalid_config") << args;
  }
}

TEST(Cli, NumericalFailureExitsThree) {
  // the deviation of a constant kernel vanishes, so no exponent can be fitted
  const auto neg = tool::run("holder-fit --m 2 --kernel constant:c=1 --kmax 10");
  EXPECT_EQ(neg.code, 3) << neg.err;
  const auto j = json::parse(neg.err);
  EXPECT_EQ(j["kind"], "numerical");
}

TEST(Cli, ByteDeterministicAcrossRunsAndThreads) {
  const std::string args =
      "oracle-compare --m 2 --kernel gaussian:sigma=1.5 --ntheta 12 --nphi 24 --count 20 "
      "--format json";
  const auto a = tool::run(args);
  const auto b = tool::run(args);
  const auto c = tool::run(args, "SPHKERN_THREADS=1");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, HolderFitReportsExponent) {
  const auto o = tool::run("holder-fit --m 2 --kernel gaussian:sigma=1 --kmax 40 --format json");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_NEAR(j["summary"]["rho_hat"].get<double>(), 2.0, 0.1);
  EXPECT_EQ(j["rows"].size(), 20u);
}

TEST(Cli, HsDefectAndDecayCheck) {
  const auto h = tool::run("hs-defect --m 2 --kernel gaussian:sigma=1 --kmax 60 --format json");
  ASSERT_EQ(h.code, 0) << h.err;
  const auto hj = json::parse(h.out);
  EXPECT_TRUE(hj["summary"]["chain_holds"].get<bool>());
  EXPECT_TRUE(hj["summary"]["strictly_decreasing"].get<bool>());

  const auto d =
      tool::run("decay-check --m 2 --kernel gaussian:sigma=1 --kmax 40 --nmax 500 --format json");
  ASSERT_EQ(d.code, 0) << d.err;
  const auto dj = json::parse(d.out);
  EXPECT_TRUE(dj["summary"]["bounded"].get<bool>());
}

TEST(Cli, MultiplierRowsAndOutputFile) {
  const std::string path = "/tmp/sphkern_cli_mult.csv";
  const auto o =
      tool::run("multiplier --m 2 --family caps --t 0.5 --t 1.0 --kmax 3 --out " + path);
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto rows = parse_csv(ss.str());
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[1][4], "1");
  std::remove(path.c_str());
}
