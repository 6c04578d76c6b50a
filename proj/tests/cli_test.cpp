#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "scenario.hpp"
#include "suites.hpp"
#include "screenlab/errors.hpp"

using namespace screenlab;
using namespace screenlab::cli;

namespace {

const std::string kCli = SCREENLAB_CLI_PATH;
const std::string kScenarios = SCREENLAB_SCENARIO_DIR;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tmp(const std::string& name) { return ::testing::TempDir() + "/" + name; }

std::string write(const std::string& name, const std::string& text) {
  const std::string path = tmp(name);
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal() {
  return json::parse(R"({
    "schema": "screenlab/1",
    "wedge": {"theta": 60, "apex": [0, 0], "rotation": 0},
    "mechanisms": [{"type": "simultaneous", "tA": "h_A+", "tB": "h_B+"}],
    "distribution": {"kind": "uniform", "lo": [-2, -2], "hi": [2, 2]},
    "n": 1000
  })");
}

void expect_schema_error(const json& j, const std::string& pointer) {
  try {
    parse_scenario(j);
    FAIL() << "expected SchemaError at " << pointer;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaError);
    EXPECT_NE(std::string(e.what()).find(pointer), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Scenario, ParsesNamedTests) {
  const Scenario s = parse_scenario(minimal());
  ASSERT_TRUE(s.wedge.has_value());
  EXPECT_NEAR(s.wedge->theta, 60.0, 1e-9);
  ASSERT_EQ(s.mechanisms.size(), 1u);
  const auto& sim = std::get<Simultaneous>(s.mechanisms[0].mechanism);
  EXPECT_NEAR(sim.tA.offset, 1.0, 1e-12);
  EXPECT_EQ(s.n, 1000u);
}

TEST(Scenario, SchemaErrorsCarryPointers) {
  json j = minimal();
  j["mechanisms"][0]["type"] = "teleport";
  expect_schema_error(j, "/mechanisms/0/type");

  j = minimal();
  j["mechanisms"] = json::parse(R"([{"type": "sequential", "tA": "h_A", "tB": "h_B", "q": 1.5}])");
  expect_schema_error(j, "/mechanisms/0");

  j = minimal();
  j["mechanisms"] = json::parse(R"([{"type": "mixture", "components": [
      {"prob": 0.6, "mechanism": {"type": "simultaneous", "tA": "h_A", "tB": "h_B"}},
      {"prob": 0.5, "mechanism": {"type": "simultaneous", "tA": "h_A", "tB": "h_B"}}]}])");
  expect_schema_error(j, "/mechanisms/0");

  j = minimal();
  j["wedge"] = json::parse(R"({"a": {"normal": [1, 0], "offset": 0}, "b": {"normal": [1, 0], "offset": 1}})");
  expect_schema_error(j, "/wedge");
}

TEST(Scenario, BundledScenariosLoad) {
  for (const char* name : {"fig-zigzag", "stringency", "cheap-talk-60", "investment-45", "perfect-hexagon"}) {
    EXPECT_NO_THROW(load_scenario(kScenarios + "/" + name + ".json")) << name;
  }
  try {
    load_scenario(tmp("missing.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("evaluate " + write("bad.json", "{bad")), 2);
  json j = minimal();
  j["mechanisms"][0]["type"] = "teleport";
  EXPECT_EQ(run("evaluate " + write("unknown.json", j.dump())), 2);
  EXPECT_EQ(run("evaluate " + tmp("does-not-exist.json")), 2);
  EXPECT_EQ(run("verify nonexistent"), 2);
  EXPECT_EQ(run("region " + kScenarios + "/stringency.json --set Zq"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("evaluate " + write("ok.json", minimal().dump())), 0);
}

TEST(Cli, EvaluateIsDeterministic) {
  const std::string sc = kScenarios + "/investment-45.json";
  ASSERT_EQ(run("evaluate " + sc + " --n 5000 --seed 4 --out " + tmp("e1.json")), 0);
  ASSERT_EQ(run("evaluate " + sc + " --n 5000 --seed 4 --out " + tmp("e2.json")), 0);
  const std::string a = slurp(tmp("e1.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(tmp("e2.json")));
  const json r = json::parse(a);
  EXPECT_EQ(r["schema"], kSchemaVersion);
}

TEST(Cli, PlotIsDeterministic) {
  const std::string sc = kScenarios + "/cheap-talk-60.json";
  const std::string layers = "--layers wedge,tests,shifted,markers,cheap-talk";
  ASSERT_EQ(run("plot " + sc + " " + layers + " --out " + tmp("p1.svg")), 0);
  ASSERT_EQ(run("plot " + sc + " " + layers + " --out " + tmp("p2.svg")), 0);
  const std::string a = slurp(tmp("p1.svg"));
  EXPECT_NE(a.find("<svg"), std::string::npos);
  EXPECT_EQ(a, slurp(tmp("p2.svg")));
}

TEST(Cli, RegionLayersNeedALeafMechanism) {
  EXPECT_EQ(run("plot " + kScenarios + "/stringency.json --layers wedge,Mq:0.5 --out " + tmp("mq.svg")), 0);
  EXPECT_NE(slurp(tmp("mq.svg")).find("<polygon"), std::string::npos);
  EXPECT_EQ(run("plot " + kScenarios + "/cheap-talk-60.json --layers Mq:0.5 --out " + tmp("bad.svg")), 2);
}

TEST(Cli, EmptyLayerListGivesAxesOnly) {
  ASSERT_EQ(run("plot " + kScenarios + "/stringency.json --layers '' --out " + tmp("axes.svg")), 0);
  const std::string svg = slurp(tmp("axes.svg"));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_EQ(svg.find("<polygon"), std::string::npos);
}

TEST(Suites, UnknownSuite) {
  try {
    run_suite("nonexistent", 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSuite);
  }
}

TEST(Suites, AxiomsPassAndSerialize) {
  const SuiteResult r = run_suite("axioms", 7, SuiteOptions{2000});
  EXPECT_TRUE(r.pass());
  const json j = to_json(r);
  EXPECT_EQ(j["suite"], "axioms");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_FALSE(j["claims"].empty());
}

TEST(Suites, ThresholdsAt45) {
  const SuiteResult r = run_suite("thresholds", 7);
  bool found = false;
  for (const auto& c : r.claims)
    if (c.id == "thresholds/theta=45/q=0.70-0.72") {
      found = true;
      EXPECT_TRUE(c.pass);
    }
  EXPECT_TRUE(found);
}
