#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qfast/cli.hpp"

using qfast::cli::main_entry;

namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qfast");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

std::string temp_path(const std::string& name) { return std::string(QFAST_TEST_TMPDIR) + "/" + name; }

}  // namespace

TEST(ParseGrid, Forms) {
  auto g = qfast::cli::parse_grid("1:10:5");
  EXPECT_EQ(g.lo, 1.0);
  EXPECT_EQ(g.hi, 10.0);
  EXPECT_EQ(g.n, 5u);
  EXPECT_FALSE(g.log_spaced);
  EXPECT_TRUE(qfast::cli::parse_grid("1:1e4:20:log").log_spaced);
  EXPECT_THROW(qfast::cli::parse_grid("1:10"), std::invalid_argument);
  EXPECT_THROW(qfast::cli::parse_grid("1:10:2.5"), std::invalid_argument);
  EXPECT_THROW(qfast::cli::parse_grid("1:10:5:lin"), std::invalid_argument);
  EXPECT_THROW(qfast::cli::parse_grid("a:10:5"), std::invalid_argument);
}

TEST(ParseList, Commas) {
  auto v = qfast::cli::parse_list("0.1,0.5,0.9");
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[1], 0.5);
  EXPECT_THROW(qfast::cli::parse_list("0.1,,x"), std::invalid_argument);
}

TEST(Validate, Invariants) {
  qfast::cli::RunConfig c;
  c.subcommand = "modulus";
  EXPECT_NO_THROW(c.validate());
  c.grid = qfast::cli::GridSpec{5.0, 1.0, 4, false};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.grid.reset();
  c.eps = {1.0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.eps = {0.5};
  c.depth = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.depth = 3;
  c.format = "xml";
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Cli, MinmodHoldsForExp) {
  Result r = run({"regularity", "--criterion", "minmod", "--function", "exp", "--grid", "16:1000:64"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(parse(r)["status"], "holds-on-grid");
}

TEST(Cli, Example62Report) {
  Result r = run({"example", "--which", "6.2", "--a", "0.25", "--b", "0.75", "--lags", "5", "--depth", "40"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = parse(r);
  EXPECT_EQ(j["report"]["all_passed"], true);
  bool found = false;
  for (const auto& v : j["report"]["verdicts"]) {
    if (v["params"]["eps"] == 0.25 && v["status"] == "violation-all-lags") found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Cli, ModulusCsv) {
  Result r = run({"modulus", "--function", "exp", "--grid", "1:10:10", "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,M,m,log_M,log_m");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string r_s;
    std::string m_s;
    std::getline(cells, r_s, ',');
    std::getline(cells, m_s, ',');
    EXPECT_NEAR(std::stod(m_s) / std::exp(std::stod(r_s)), 1.0, 1e-15);
  }
  EXPECT_EQ(rows, 10);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).status, 0);
  EXPECT_EQ(run({}).status, 1);
  EXPECT_EQ(run({"modulus", "--function", "exp", "--grid", "1:10:3", "--bogus"}).status, 1);
  EXPECT_EQ(run({"modulus", "--function", "nope", "--grid", "1:10:3"}).status, 1);
  EXPECT_EQ(run({"modulus", "--function", "e62model", "--grid", "1:10:3"}).status, 1);
  EXPECT_EQ(run({"modulus", "--function", "exp", "--grid", "10:1:3"}).status, 1);
  EXPECT_EQ(run({"regularity", "--function", "exp", "--criterion", "eps", "--eps", "1.5"}).status, 1);
  EXPECT_EQ(run({"regularity", "--function", "exp", "--criterion", "hadamard", "--grid", "1:2:3"}).status, 1);
  EXPECT_EQ(run({"cascade", "--function", "exp", "--r1", "100", "--k", "2"}).status, 1);
  EXPECT_EQ(run({"example", "--which", "7.1"}).status, 1);
  EXPECT_EQ(run({"modulus", "--descriptor", temp_path("missing.json"), "--grid", "1:2:2"}).status, 1);
}

TEST(Cli, StrictExitCode) {
  std::vector<std::string> ok{"regularity", "--criterion", "minmod", "--function", "exp", "--grid", "16:1000:8"};
  std::vector<std::string> bad{"regularity", "--criterion", "minmod", "--function", "exp", "--grid", "10:12:3"};
  EXPECT_EQ(run(ok).status, 0);
  EXPECT_EQ(run(bad).status, 0);
  ok.push_back("--strict");
  bad.push_back("--strict");
  EXPECT_EQ(run(ok).status, 0);
  EXPECT_EQ(run(bad).status, 2);
  EXPECT_EQ(run({"example", "--which", "lacunary", "--lags", "3", "--depth", "40", "--strict"}).status, 2);
}

TEST(Cli, ExitCodeCorpus) {
  struct Case {
    std::vector<std::string> args;
    int expect;
  };
  std::vector<Case> corpus{
      {{"modulus", "--function", "lacunary5", "--grid", "1:1e4:20:log"}, 0},
      {{"orbit", "--function", "exp", "--grid", "0.5:2:4", "--depth", "6", "--strict"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "convexity", "--grid", "0.1:5:32"}, 0},
      {{"regularity", "--function", "e62model", "--criterion", "convexity", "--grid", "1:100:64", "--strict"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "logreg", "--k", "2", "--d", "2", "--grid", "2:10:16"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "hadamard", "--k", "2", "--d", "2", "--grid", "0.1:1:8", "--strict"}, 2},
      {{"regularity", "--function", "exp", "--criterion", "weak", "--depth", "6", "--lags", "6", "--strict"}, 0},
      {{"regularity", "--function", "e62model", "--criterion", "eps", "--eps", "0.25", "--r1", "2980.9579870417283", "--depth", "40", "--strict"}, 2},
      {{"regularity", "--function", "exp", "--criterion", "psi", "--k", "2", "--m", "2", "--grid", "2:8:8"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "sequence", "--k", "2", "--m", "2", "--depth", "4"}, 0},
      {{"regularity", "--function", "e61model", "--criterion", "tower", "--m", "1", "--k", "0.25", "--grid", "20:1e4:16:log"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "fr", "--k", "2", "--alpha", "0.2", "--beta", "0.8", "--grid", "10:10:1", "--strict"}, 2},
      {{"regularity", "--function", "exp", "--criterion", "doubling", "--grid", "2:1000:16:log"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "order", "--grid", "10:1e4:16:log"}, 0},
      {{"regularity", "--function", "exp", "--criterion", "nope", "--grid", "1:2:2"}, 1},
      {{"beurling", "--function", "exp", "--r1", "10", "--r2", "20", "--mu", "1", "--strict"}, 0},
      {{"beurling", "--function", "exp", "--r1", "1", "--r2", "2", "--mu", "100"}, 1},
      {{"cascade", "--function", "exp", "--r1", "1e6", "--k", "2", "--d", "2"}, 0},
      {{"example", "--which", "6.1"}, 0},
      {{"thm43", "--function", "exp", "--k", "2", "--d", "2", "--grid", "1.3862943611198906:20:32", "--strict"}, 0},
      {{"thm43", "--function", "exp", "--grid", "1:2:4"}, 1},
  };
  for (const auto& c : corpus) {
    Result r = run(c.args);
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    EXPECT_EQ(r.status, c.expect) << joined << "\n" << r.err;
  }
}

TEST(Cli, DeterministicAcrossJobs) {
  std::vector<std::vector<std::string>> runs{
      {"regularity", "--criterion", "minmod", "--function", "lacunary5", "--grid", "2:1e4:200:log"},
      {"regularity", "--criterion", "weak", "--function", "exp", "--depth", "8"},
      {"regularity", "--criterion", "convexity", "--function", "e61model", "--grid", "1:5000:256"},
      {"example", "--which", "6.2", "--lags", "5", "--depth", "40"},
      {"example", "--which", "lacunary", "--lags", "3", "--depth", "40"},
      {"thm43", "--function", "exp", "--k", "2", "--d", "2", "--grid", "1.4:20:64"},
  };
  for (auto args : runs) {
    auto a = args;
    auto b = args;
    a.insert(a.end(), {"--jobs", "1"});
    b.insert(b.end(), {"--jobs", "4"});
    Result ra = run(a);
    Result rb = run(b);
    ASSERT_EQ(ra.status, 0) << ra.err;
    EXPECT_EQ(ra.out, rb.out) << args[0] << " " << args[1];
    EXPECT_FALSE(ra.out.empty());
  }
}

TEST(Cli, DescriptorAndOutFile) {
  std::string desc = temp_path("desc_exp2.json");
  {
    std::ofstream f(desc);
    f << R"({"variant": "exp", "lambda": 2.0})";
  }
  std::string out = temp_path("modulus_out.json");
  Result r = run({"modulus", "--descriptor", desc, "--grid", "1:2:2", "--out", out});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  auto j = nlohmann::json::parse(in);
  double log_m = j["rows"][0]["M"]["log_value"];
  EXPECT_NEAR(log_m, std::log(2.0) + 1.0, 1e-12);

  std::string bad = temp_path("desc_bad.json");
  {
    std::ofstream f(bad);
    f << R"({"variant": "lacunary", "zeros": [1, 3]})";
  }
  EXPECT_EQ(run({"modulus", "--descriptor", bad, "--grid", "1:2:2"}).status, 1);
}

TEST(Cli, OrbitSeedsFile) {
  std::string seeds = temp_path("seeds.json");
  {
    std::ofstream f(seeds);
    f << "[0, [0.5, 0.25], 2]";
  }
  Result r = run({"orbit", "--function", "exp", seeds, "--depth", "5", "--eps", "0.5,0.9"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = parse(r);
  ASSERT_EQ(j["records"].size(), 3u);
  EXPECT_EQ(j["records"][0]["classification"]["certificates"].size(), 5u);

  Result csv = run({"orbit", "--function", "exp", seeds, "--depth", "2", "--format", "csv"});
  ASSERT_EQ(csv.status, 0) << csv.err;
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "seed,n,h,x,zero");
}
