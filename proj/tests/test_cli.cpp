#include "cli.hpp"
#include "smoothsafe/trajectory_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using smoothsafe::cli::run_cli;

namespace {

const std::string kDir = SMOOTHSAFE_SCENARIO_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smoothsafe");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("smoothsafe_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run writes a trajectory and a report and exits 0") {
  const fs::path out = scratch("run");
  const Result r = cli({"run", kDir + "/single_integrator_penalty.json", "--out", out.string(), "--duration", "8"});
  CHECK(r.code == 0);
  const json report = json::parse(slurp(out / "single_integrator_penalty.report.json"));
  CHECK(report["metrics"]["violations"] == 0);
  CHECK(report["scenario"]["duration"] == 8.0);
  CHECK(json::parse(r.out) == report);
  const smoothsafe::TrajectoryLog log = smoothsafe::read_csv_file(out / "single_integrator_penalty.csv");
  CHECK(log.size() == 8001);

  // Same inputs give byte-identical files.
  const std::string first = slurp(out / "single_integrator_penalty.csv");
  CHECK(cli({"run", kDir + "/single_integrator_penalty.json", "--out", out.string(), "--duration", "8"}).code == 0);
  CHECK(slurp(out / "single_integrator_penalty.csv") == first);
  fs::remove_all(out);
}

TEST_CASE("configuration errors exit 2 with a message naming the parameter") {
  const fs::path out = scratch("config");
  Result r = cli({"run", kDir + "/single_integrator_gated.json", "--out", out.string(), "--set",
                  "filter.gate.delta=0.01", "--set", "filter.gate.epsilon=0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("GateParams") != std::string::npos);
  CHECK(r.err.find("filter.gate") != std::string::npos);

  r = cli({"run", kDir + "/drone_feedforward.json", "--out", out.string(), "--set", "filter.kind=ClassicalQP"});
  CHECK(r.code == 2);
  CHECK(r.err.find("feedforward") != std::string::npos);

  CHECK(cli({"run", kDir + "/nope.json"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"run", kDir + "/single_integrator_penalty.json", "--set", "gains.zeta=1"}).code == 2);
  CHECK(cli({"eval", kDir + "/single_integrator_penalty.json", "--state", "1,2,3"}).code == 2);
  CHECK(cli({"eval", kDir + "/single_integrator_penalty.json", "--state", "1,x"}).code == 2);
  CHECK_FALSE(fs::exists(out / "drone_feedforward.csv"));
}

TEST_CASE("eval reports the filter at one state") {
  const std::string sc = kDir + "/single_integrator_penalty.json";
  Result r = cli({"eval", sc, "--state", "-4,3"});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["correction"][0] == 0.0);
  CHECK(doc["correction"][1] == 0.0);
  CHECK(doc["constraint_active"] == false);
  CHECK(doc["u_star"] == doc["u0"]);

  // On the boundary h = 0 heading inward.
  r = cli({"eval", sc, "--state", "-1.2,0"});
  REQUIRE(r.code == 0);
  doc = json::parse(r.out);
  CHECK(doc["constraint_active"] == true);
  CHECK(doc["cbf_residual"][0].get<double>() >= -1e-9);
  CHECK(cli({"eval", sc, "--state", "-1.2,0"}).out == r.out);

  r = cli({"eval", kDir + "/multi_obstacle.json", "--state", "[-1.0, 1.1]"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["cbf_residual"].size() == 3);
}

TEST_CASE("compare runs several kinds and tabulates them") {
  const fs::path out = scratch("compare");
  CHECK(cli({"compare", kDir + "/obstacle_transit.json", "--kinds", "Penalty", "--out", out.string()}).code == 2);
  CHECK(cli({"compare", kDir + "/obstacle_transit.json", "--kinds", "Penalty,Magic", "--out", out.string()}).code ==
        2);

  const Result r = cli({"compare", kDir + "/obstacle_transit.json", "--kinds", "ClassicalQP,Penalty", "--out",
                        out.string()});
  CHECK(r.code == 0);
  const json report = json::parse(slurp(out / "obstacle_transit.compare.json"));
  REQUIRE(report["runs"].size() == 2);
  CHECK(report["runs"][0]["kind"] == "ClassicalQP");
  const double qp_rate = report["runs"][0]["metrics"]["control_rate_max"];
  const double pen_rate = report["runs"][1]["metrics"]["control_rate_max"];
  CHECK(pen_rate <= qp_rate);
  CHECK(r.out.find("Penalty") != std::string::npos);
  const std::string header = slurp(out / "obstacle_transit.compare.csv");
  CHECK(header.find("ClassicalQP:u1") != std::string::npos);
  CHECK(header.find("Penalty:u1") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("beyond sensing range the gated run equals the unfiltered run") {
  const fs::path out = scratch("far");
  const Result r = cli({"compare", kDir + "/far_obstacle.json", "--kinds", "GatedQP,Penalty", "--out", out.string(),
                        "--duration", "10"});
  CHECK(r.code == 0);
  const json report = json::parse(slurp(out / "far_obstacle.compare.json"));
  for (const json& run : report["runs"]) {
    CHECK(run["metrics"]["goal_error_final"] == report["runs"][0]["metrics"]["goal_error_final"]);
    bool freedom = false;
    for (const json& v : run["verdicts"])
      if (v["name"] == "perception_freedom") freedom = v["applicable"] && v["pass"];
    CHECK(freedom);
  }
  fs::remove_all(out);
}
