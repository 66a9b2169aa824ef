#include "smoothsafe/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace smoothsafe;
using nlohmann::json;

namespace {

const std::string kDir = SMOOTHSAFE_SCENARIO_DIR;

std::string error_key(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_scenario(text, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

const char* kMinimal = R"({"system": "SingleIntegrator", "x0": [-2, 0.1], "goal": [2, 0],
                           "obstacles": [{"center": [0, 0], "radius": 0.5}]})";

}  // namespace

TEST_CASE("every bundled scenario loads and survives a dump round trip") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const Scenario sc = load_scenario(entry.path());
    const std::string text = dump_scenario(sc);
    const Scenario back = parse_scenario(text);
    CHECK(dump_scenario(back) == text);
    CHECK(back.x0 == sc.x0);
    CHECK(back.filter.kind == sc.filter.kind);
    CHECK(back.filter.weight.matrix() == sc.filter.weight.matrix());
    ++count;
  }
  CHECK(count >= 10);
}

TEST_CASE("defaults fill omitted keys") {
  const Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.dt == 1e-3);
  CHECK(sc.duration == 10.0);
  CHECK(sc.filter.kind == FilterKind::Penalty);
  CHECK(sc.obstacles.front().margin == 0.0);
  CHECK(sc.gains.gravity == 9.81);
  CHECK_FALSE(sc.feedforward);
}

TEST_CASE("unknown keys and wrong types name the offending key") {
  CHECK(error_key(R"({"system": "SingleIntegrator", "x0": [0, 0], "goal": [1, 0], "speed": 3})") == "speed");
  CHECK(error_key(R"({"system": "SingleIntegrator", "x0": [0, 0], "goal": [1, 0], "gains": {"kk": 1}})") ==
        "gains.kk");
  CHECK(error_key(R"({"system": "SingleIntegrator", "x0": [0, 0], "goal": [1, 0], "dt": "fast"})") == "dt");
  CHECK(error_key(R"({"system": "SingleIntegrator", "x0": [0, "a"], "goal": [1, 0]})") == "x0.1");
  CHECK(error_key(R"({"system": "Boat", "x0": [0, 0], "goal": [1, 0]})") == "system");
  CHECK(error_key("{not json") == "<file>");
  CHECK_THROWS_AS(load_scenario(kDir + "/does_not_exist.json"), ConfigError);
}

TEST_CASE("overrides edit nested values and reject unknown paths") {
  const Scenario sc = parse_scenario(kMinimal, {"obstacles.0.radius=0.75", "filter.kind=GatedQP", "dt=0.002",
                                                "filter.gate.delta=1.5"});
  CHECK(sc.obstacles.front().radius == 0.75);
  CHECK(sc.filter.kind == FilterKind::GatedQP);
  CHECK(sc.dt == 0.002);
  CHECK(sc.filter.gate.delta == 1.5);
  CHECK(error_key(kMinimal, {"filter.nope=1"}) == "filter.nope");
  CHECK(error_key(kMinimal, {"obstacles.3.radius=1"}) == "obstacles.3.radius");
  CHECK(error_key(kMinimal, {"radius"}) == "radius");

  json doc = json::parse(kMinimal);
  apply_override(doc, "goal=[3, 1]");
  CHECK(doc["goal"][0] == 3);
}

TEST_CASE("validation failures are config errors naming the parameter") {
  CHECK(error_key(kMinimal, {"filter.gate.delta=0.01"}).rfind("filter.gate", 0) == 0);
  CHECK(error_key(kMinimal, {"dt=-1"}) == "dt");
  CHECK(error_key(kMinimal, {"filter.weight=[[1, 2], [0, 1]]"}) == "filter.weight");
  CHECK(error_key(kMinimal, {"obstacles.0.radius=0"}).rfind("obstacles.0", 0) == 0);
  CHECK(error_key(kMinimal, {"feedforward=true"}) == "feedforward");
  try {
    parse_scenario(kMinimal, {"filter.gate.delta=0.01"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("GateParams") != std::string::npos);
  }
}
