#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hurwitz/cli.hpp"

using namespace hurwitz::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hurwitz_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST(GitHash, MatchesGitHashObject) {
  // printf 'hello' | git hash-object --stdin
  EXPECT_EQ(git_blob_hash("hello"), "b6fc4c620b67d95f953a5c1c1230aaab5db5a1b0");
  // empty blob
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Cli, EnumerateThreeFour) {
  const auto dir = scratch("enum");
  const auto r = call({"enumerate", "--n", "3", "--b", "4", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = load(dir / "enumerate.json");
  EXPECT_EQ(doc["result"]["count"], 4);
  EXPECT_EQ(doc["result"]["classes"].size(), 4u);
  EXPECT_EQ(doc["result"]["classes"][0]["transpositions"][0], json::array({1, 2}));
  EXPECT_EQ(doc["provenance"]["config"]["n"], 3);
  EXPECT_EQ(doc["provenance"]["input_hash"].get<std::string>().size(), 40u);
  EXPECT_EQ(json::parse(r.out), doc);
}

TEST(Cli, DimsProfile) {
  const auto dir = scratch("dims");
  const auto r = call({"dims", "--n", "2", "--h", "0", "--b", "6", "--out", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto res = load(dir / "dims.json")["result"];
  EXPECT_EQ(res["profile"]["profile"], json::array({3, 6, 3, 0}));
  EXPECT_EQ(res["determined"]["h1_pullback"], true);
  EXPECT_EQ(res["exact"], true);
}

TEST(Cli, IdentityCheck) {
  const auto dir = scratch("ident");
  const auto r = call({"identity-check", "--samples", "1000", "--seed", "7", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = load(dir / "identity-check.json")["result"];
  EXPECT_LE(res["max_residual"].get<double>(), 1e-12);
  EXPECT_EQ(res["pass"], true);
}

TEST(Cli, OrbitsAreConnected) {
  const auto dir = scratch("orbits");
  const auto r = call({"orbits", "--n", "3", "--b", "4", "--out", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = load(dir / "orbits.json")["result"];
  EXPECT_EQ(res["orbit_count"], 1);
  EXPECT_EQ(res["orbits"][0], json::array({0, 1, 2, 3}));
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# enumeration\nn = 4\nb = 4\nmax-degree = 6\n";
  auto r = call({"enumerate", "--config", cfg.string(), "--out", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load(dir / "enumerate.json")["provenance"]["config"]["n"], 4);
  r = call({"enumerate", "--config", cfg.string(), "--n", "3", "--out", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = load(dir / "enumerate.json");
  EXPECT_EQ(doc["provenance"]["config"]["n"], 3);
  EXPECT_EQ(doc["result"]["count"], 4);
}

TEST(Cli, HashDependsOnInputsOnly) {
  const auto a = scratch("hash_a"), b = scratch("hash_b");
  ASSERT_EQ(call({"dims", "--out", a.string(), "--quiet"}).code, 0);
  ASSERT_EQ(call({"dims", "--out", b.string(), "--quiet"}).code, 0);
  EXPECT_EQ(load(a / "dims.json")["provenance"]["input_hash"], load(b / "dims.json")["provenance"]["input_hash"]);
  ASSERT_EQ(call({"dims", "--b", "8", "--out", b.string(), "--quiet"}).code, 0);
  EXPECT_NE(load(a / "dims.json")["provenance"]["input_hash"], load(b / "dims.json")["provenance"]["input_hash"]);
}

TEST(Cli, EnvironmentSetsTheOutputDirectory) {
  const auto dir = scratch("env");
  ::setenv("HURWITZ_OUT_DIR", dir.string().c_str(), 1);
  const auto r = call({"dims", "--quiet"});
  ::unsetenv("HURWITZ_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "dims.json"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  const std::string out = dir.string();
  auto r = call({"enumerate", "--bogus", "1"});
  EXPECT_EQ(r.code, exit_invalid_config);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "invalid_config");

  EXPECT_EQ(call({"dims", "--b", "5", "--out", out}).code, exit_invalid_config);  // parity
  EXPECT_EQ(call({"dims", "--b", "4", "--out", out}).code, exit_invalid_config);  // genus 1
  EXPECT_EQ(call({"identity-check", "--samples", "0", "--out", out}).code, exit_invalid_config);
  EXPECT_EQ(call({"convergence", "--levels", "2,1,3", "--out", out}).code, exit_invalid_config);
  EXPECT_EQ(call({"convergence", "--levels", "1,2", "--out", out}).code, exit_invalid_config);
  EXPECT_EQ(call({"wp-norm", "--k", "6", "--refinement", "1", "--out", out}).code, exit_invalid_config);
  EXPECT_EQ(call({"solve-metric", "--transpositions", "1 2; 1 2; 1 2", "--b", "3", "--out", out}).code,
            exit_invalid_config);

  r = call({"enumerate", "--n", "7", "--b", "4", "--out", out});
  EXPECT_EQ(r.code, exit_budget);
  const auto report = load(dir / "enumerate.error.json");
  EXPECT_EQ(report["error"]["kind"], "budget_exceeded");
  EXPECT_EQ(report["error"]["exit_code"], 3);

  r = call({"solve-metric", "--refinement", "1", "--max-iterations", "1", "--out", out});
  EXPECT_EQ(r.code, exit_solver);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "solver_failure");

  // the hexagon disks overlap on the coarsest mesh
  EXPECT_EQ(call({"solve-metric", "--refinement", "0", "--out", out}).code, exit_solver);
}

TEST(Cli, UnknownConfigKeyIsRejected) {
  const auto dir = scratch("badkey");
  const auto cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "n = 3\nlevels = 1,2,3\n";
  const auto r = call({"enumerate", "--config", cfg.string(), "--out", dir.string()});
  EXPECT_EQ(r.code, exit_invalid_config);
  EXPECT_NE(r.err.find("unknown key"), std::string::npos);
}

TEST(Cli, SolveMetricWithSidecars) {
  const auto dir = scratch("solve");
  const auto r = call({"solve-metric", "--refinement", "1", "--mesh-out", "mesh.json", "--dump-fields", "fields.csv",
                       "--out", dir.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = load(dir / "solve-metric.json")["result"];
  EXPECT_LT(res["area_error"].get<double>(), 1e-8);
  EXPECT_LT(res["init_independence"].get<double>(), 1e-8);

  const auto mesh = load(dir / "mesh.json");
  EXPECT_EQ(mesh["format"], "hurwitz-mesh/1");
  EXPECT_EQ(mesh["vertices"].size(), res["surface"]["vertices"].get<std::size_t>());
  EXPECT_EQ(mesh["cones"].size(), 6u);
  EXPECT_TRUE(mesh.contains("provenance"));

  std::ifstream csv(dir / "fields.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# config: ", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# input_hash: ", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("vertex,sheet,chart,re,im,u,", 0), 0u);
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, res["surface"]["vertices"].get<int>());
}

TEST(Cli, InputFileAndExplicitPoints) {
  const auto dir = scratch("input");
  const auto in = dir / "cfg.json";
  std::ofstream(in) << R"({"datum": {"n": 3, "h": 0, "transpositions": [[1,2],[1,2],[1,3],[1,3]]},
                          "points": [[1,0],[0,1],[-1,0],[0,-1]]})";
  auto r = call({"solve-metric", "--input", in.string(), "--refinement", "1", "--out", dir.string(), "--quiet"});
  // genus 0: no hyperbolic metric exists
  EXPECT_EQ(r.code, exit_invalid_config);
  EXPECT_NE(r.err.find("genus 0"), std::string::npos);

  r = call({"wp-norm", "--points", "1 0; 0.5 0.8660254037844386; -0.5 0.8660254037844387; -1 0; -0.5 -0.8660254037844386; 0.5 -0.8660254037844386",
            "--refinement", "1", "--k", "1", "--out", dir.string(), "--quiet", "--dump-fields", "wp.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = load(dir / "wp-norm.json")["result"];
  EXPECT_GT(res["wp"]["wp_total"].get<double>(), 0.0);
  EXPECT_LE(res["fiber_gap"].get<double>(), 1e-10);
  EXPECT_TRUE(fs::exists(dir / "wp.csv"));
}

TEST(Cli, ConvergenceIsReproducibleAcrossWorkers) {
  const auto a = scratch("conv1"), b = scratch("conv4");
  auto r = call({"convergence", "--levels", "1,2,3", "--workers", "1", "--richardson-tolerance", "0", "--out",
                 a.string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = call({"convergence", "--levels", "1,2,3", "--workers", "4", "--richardson-tolerance", "0", "--out", b.string(),
            "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ra = load(a / "convergence.json")["result"], rb = load(b / "convergence.json")["result"];
  EXPECT_EQ(ra["rows"], rb["rows"]);
  EXPECT_EQ(ra["monotone"], rb["monotone"]);
  EXPECT_EQ(ra["complete"], true);
  EXPECT_EQ(ra["rows"].size(), 3u);
  for (const char* flag : {"area_error_nonincreasing", "ell_residual_decreasing", "g0_gap_decreasing"})
    EXPECT_EQ(ra["monotone"][flag], true) << flag;
  EXPECT_TRUE(fs::exists(a / "convergence.csv"));
}

TEST(Cli, ConvergenceBudgetGivesPartialReport) {
  const auto dir = scratch("budget");
  const auto r = call({"convergence", "--levels", "1,2,3", "--budget-seconds", "1e-9", "--out", dir.string(),
                       "--quiet"});
  EXPECT_EQ(r.code, exit_budget);
  const auto res = load(dir / "convergence.json")["result"];
  EXPECT_EQ(res["complete"], false);
  EXPECT_EQ(res["stopped_by"]["kind"], "budget_exceeded");
}
