#include <gtest/gtest.h>

#include "mcs/config.hpp"

using namespace mcs;

namespace {

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptyDocumentIsDeskProfile) {
  const auto c = parse_config("{}");
  const auto d = desk_profile();
  EXPECT_EQ(config_to_json(c), config_to_json(d));
  EXPECT_EQ(c.scenario.mcsps, 2);
  EXPECT_EQ(c.scenario.mus, 20);
  EXPECT_EQ(c.scenario.types, 5);
  EXPECT_EQ(c.steps, 5000);
  EXPECT_EQ(c.runs, 20);
}

TEST(Config, PartialDocumentOverridesOnlyItsKeys) {
  const auto c = parse_config(R"({"scenario": {"mus": 7, "tasks_per_type": [1, 3]}, "run": {"seed": 42}})");
  EXPECT_EQ(c.scenario.mus, 7);
  EXPECT_EQ(c.scenario.tasks_per_type_min, 1);
  EXPECT_EQ(c.scenario.tasks_per_type_max, 3);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.scenario.types, 5);
}

TEST(Config, UnknownKeyNamesItsPath) {
  EXPECT_NE(error_of(R"({"scenario": {"muss": 3}})").find("scenario.muss"), std::string::npos);
  EXPECT_NE(error_of(R"({"bogus": {}})").find("bogus"), std::string::npos);
}

TEST(Config, WrongTypeNamesItsPath) {
  EXPECT_NE(error_of(R"({"scenario": {"mus": "many"}})").find("scenario.mus"), std::string::npos);
  EXPECT_NE(error_of(R"({"scenario": {"mus": 2.5}})").find("scenario.mus"), std::string::npos);
  EXPECT_NE(error_of(R"({"task": {"data_mbit": [1]}})").find("task.data_mbit"), std::string::npos);
}

TEST(Config, OutOfRangeValuesRejected) {
  EXPECT_NE(error_of(R"({"scenario": {"mus": 0}})").find("scenario.mus"), std::string::npos);
  EXPECT_NE(error_of(R"({"prism": {"epsilon": 1.5}})").find("prism.epsilon"), std::string::npos);
  EXPECT_NE(error_of(R"({"run": {"strategies": ["prism", "oracle"]}})").find("oracle"), std::string::npos);
  EXPECT_NE(error_of("not json").find("JSON"), std::string::npos);
}

TEST(Config, DottedOverrides) {
  const auto c = parse_config("{}", {"scenario.mus=9", "pacmab.ucb_c=1.5", "run.strategies=[\"copt\",\"mgs\"]"});
  EXPECT_EQ(c.scenario.mus, 9);
  EXPECT_DOUBLE_EQ(c.params.pacmab.ucb_c, 1.5);
  EXPECT_EQ(c.strategies, (std::vector<std::string>{"copt", "mgs"}));
  EXPECT_NE(error_of("{}", {"scenario.nothing=1"}).find("scenario.nothing"), std::string::npos);
  EXPECT_THROW(parse_config("{}", {"noequals"}), ConfigError);
}

TEST(Config, SweepForms) {
  const auto s = parse_sweep("K=50,100,150");
  EXPECT_EQ(s.axis, "K");
  EXPECT_EQ(s.values, (std::vector<int>{50, 100, 150}));
  EXPECT_THROW(parse_sweep("K=5,x"), ConfigError);
  EXPECT_THROW(parse_sweep("K"), ConfigError);
  const auto c = parse_config(R"({"run": {"sweep": "Z=3,4"}})");
  EXPECT_EQ(c.sweep.axis, "Z");
  EXPECT_EQ(c.sweep.values, (std::vector<int>{3, 4}));
  EXPECT_THROW(parse_config(R"({"run": {"sweep": "P=3"}})"), ConfigError);
  EXPECT_EQ(with_axis(c, "K", 33).scenario.mus, 33);
  EXPECT_TRUE(with_axis(c, "K", 33).sweep.axis.empty());
}

TEST(Config, RoundTripAndHash) {
  const auto c = parse_config(R"({"scenario": {"mus": 11}, "noise": {"time_cv": 0.3}})");
  const auto back = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
  EXPECT_NE(config_hash(c), config_hash(desk_profile()));
}

TEST(Config, FullProfile) {
  const auto p = full_profile();
  EXPECT_EQ(p.scenario.mus, 50);
  EXPECT_EQ(p.scenario.tasks_per_type_min * p.scenario.types * p.scenario.mcsps, 50);
  EXPECT_NO_THROW(p.validate());
}
