#include <filesystem>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "delegation/reference_cases.hpp"
#include "delegation/scenario_io.hpp"

using namespace delegation;
using nlohmann::json;

namespace {

json ex1_doc() {
  return json::parse(R"({
    "acts": {"pr_f_H": 0.4, "pr_f_L": 0.2, "pr_g_H": 0.9, "pr_g_L": 0.5},
    "tastes": {"pi_L": 0.3, "pi_H": 0.7},
    "mgmt": {"kind": "fixed_plus_quadratic", "epsilon": 0.03, "k_V": 2.0},
    "info": {"exponent": 2, "k_P": 11.0},
    "prior": 0.5
  })");
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("delegation_io_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ScenarioIo, ParsesMinimalDocument) {
  const Scenario s = scenario_from_json(ex1_doc());
  EXPECT_DOUBLE_EQ(s.k_v(), 2.0);
  EXPECT_DOUBLE_EQ(s.pi_high(), 0.7);
  EXPECT_EQ(s.inner_mode(), InnerMode::BangBang);
  EXPECT_EQ(s.grid().points, 10001u);
  EXPECT_EQ(scenario_hash(s), scenario_hash(reference_ex1().scenario));
}

TEST(ScenarioIo, RoundTripIsIdempotent) {
  for (const Scenario& s : {reference_ex1().scenario, reference_ex2().scenario.with_seed(99)}) {
    const json once = scenario_to_json(s);
    const json twice = scenario_to_json(scenario_from_json(once));
    EXPECT_EQ(once.dump(), twice.dump());
  }
}

TEST(ScenarioIo, RejectsUnknownKeys) {
  json doc = ex1_doc();
  doc["mgmt"]["kv"] = 1.0;
  try {
    scenario_from_json(doc);
    FAIL() << "accepted an unknown key";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("mgmt.kv"), std::string::npos);
  }
  json top = ex1_doc();
  top["extra"] = true;
  EXPECT_THROW(scenario_from_json(top), ScenarioError);
}

TEST(ScenarioIo, RejectsInvalidValues) {
  json prior = ex1_doc();
  prior["prior"] = 1.5;
  try {
    scenario_from_json(prior);
    FAIL() << "accepted prior 1.5";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("prior"), std::string::npos);
  }
  json eq = ex1_doc();
  eq["tastes"] = {{"pi_L", 0.5}, {"pi_H", 0.5}};
  EXPECT_THROW(scenario_from_json(eq), ScenarioError);
  json both = ex1_doc();
  both["tastes"]["c_L"] = 0.36;
  EXPECT_THROW(scenario_from_json(both), ScenarioError);
  json eps = ex1_doc();
  eps["mgmt"]["kind"] = "quadratic";
  EXPECT_THROW(scenario_from_json(eps), ScenarioError);
  json exponent = ex1_doc();
  exponent["info"]["exponent"] = 3;
  EXPECT_THROW(scenario_from_json(exponent), ScenarioError);
  json grid = ex1_doc();
  grid["grid"] = {{"points", 3}};
  EXPECT_THROW(scenario_from_json(grid), ScenarioError);
  json mode = ex1_doc();
  mode["inner_mode"] = "fancy";
  EXPECT_THROW(scenario_from_json(mode), ScenarioError);
  EXPECT_THROW(scenario_from_json(json::array()), ScenarioError);
}

TEST(ScenarioIo, LoadReportsIoErrors) {
  EXPECT_THROW(load_scenario("/nonexistent/dir/scenario.json"), IoError);
  const auto bad = temp_path("bad.json");
  write_file_atomic(bad, "{ not json");
  EXPECT_THROW(load_scenario(bad), ScenarioError);
  const auto good = temp_path("good.json");
  write_file_atomic(good, ex1_doc().dump());
  EXPECT_DOUBLE_EQ(load_scenario(good).prior(), 0.5);
  std::filesystem::remove(bad);
  std::filesystem::remove(good);
}

TEST(ScenarioIo, AtomicWriteLeavesNoTemporary) {
  const auto p = temp_path("atomic.csv");
  write_file_atomic(p, "a,b\n1,2\n");
  EXPECT_EQ(slurp(p), "a,b\n1,2\n");
  EXPECT_FALSE(std::filesystem::exists(p.string() + ".tmp"));
  write_file_atomic(p, "x\n");
  EXPECT_EQ(slurp(p), "x\n");
  std::filesystem::remove(p);
  EXPECT_THROW(write_file_atomic("/nonexistent/dir/out.csv", "x"), IoError);
}

TEST(ScenarioIo, ResultTableFormat) {
  const std::vector<SolveRow> rows{solve_point(reference_ex1().scenario)};
  const std::string csv = result_table_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), std::string(kResultHeader));
  EXPECT_NE(csv.find("2.0000,0.4529,0.5886,"), std::string::npos);
  EXPECT_NE(csv.find("informative,high_only"), std::string::npos);
  EXPECT_EQ(csv, result_table_csv(rows));
}

TEST(ScenarioIo, ThresholdJsonEncodesUnbounded) {
  ThresholdReport r;
  r.k_v_nm = std::numeric_limits<double>::infinity();
  const json doc = to_json(r);
  EXPECT_EQ(doc.at("k_V_nm"), "unbounded");
  EXPECT_TRUE(doc.at("k_V_on").is_null());
}

TEST(ScenarioIo, HashDistinguishesScenarios) {
  const Scenario s = reference_ex1().scenario;
  EXPECT_NE(scenario_hash(s), scenario_hash(s.with_k_v(2.5)));
  EXPECT_EQ(scenario_hash(s), scenario_hash(s.with_k_v(2.0)));
}
