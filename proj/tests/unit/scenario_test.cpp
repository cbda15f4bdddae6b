#include <gtest/gtest.h>

#include "idsbed/scenario.hpp"
#include "support.hpp"

using namespace idsbed;

namespace {

Error parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << text;
  return Error(ErrorKind::Io, "");
}

}  // namespace

TEST(Scenario, HappyPath) {
  const auto c = parse_scenario(R"({
    "seed": 9, "records": 100,
    "clients": [
      {"id": "wald", "components": [
        {"type": "generator", "distribution": "wald", "params": {"mean": 2, "scale": 3},
         "intrusion": "off_value", "level": "easy"}]},
      {"id": "car", "components": [{"type": "sim2d"}]}
    ]})");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.mode, RunMode::VirtualTime);
  EXPECT_EQ(c.records, 100u);
  ASSERT_EQ(c.clients.size(), 2u);
  const auto& g = std::get<GeneratorConfig>(c.clients[0].components[0]);
  EXPECT_EQ(g.spec.kind, DistributionKind::Wald);
  EXPECT_EQ(g.spec.params[0], 2.0);
  EXPECT_EQ(g.spec.params[1], 3.0);
  EXPECT_EQ(g.intrusion, NumericIntrusion::OffValue);
  const auto& s = std::get<Sim2dConfig>(c.clients[1].components[0]);
  EXPECT_FALSE(s.flags.any());
  EXPECT_NO_THROW(validate(c));
}

TEST(Scenario, FullSim2dAndEnvironment) {
  const auto c = parse_scenario(R"({
    // comments are allowed
    "seed": 1, "mode": "realtime", "duration_ms": 500,
    "environment": {"width": 300, "height": 200, "illegal_zone": null,
                    "move_period_ms": 20, "speed": 3, "max_turn": 0.1},
    "clients": [{"id": "u", "repeat": 3, "components": [
      {"type": "sim2d", "level": "hard", "flags": ["color_area", "route"],
       "periods": {"color": 50, "country_code": 0, "poi": 60, "route": 70}}]}]})");
  EXPECT_EQ(c.mode, RunMode::RealTime);
  ASSERT_EQ(c.clients.size(), 3u);
  EXPECT_EQ(c.clients[0].id, "u-0");
  EXPECT_EQ(c.clients[2].id, "u-2");
  const auto& s = std::get<Sim2dConfig>(c.clients[1].components[0]);
  EXPECT_EQ(s.width, 300);
  EXPECT_EQ(s.height, 200);
  EXPECT_FALSE(s.illegal_zone.has_value());
  EXPECT_EQ(s.move_period_ms, 20);
  EXPECT_EQ(s.movement.speed, 3.0);
  EXPECT_EQ(s.level, DifficultyLevel::Hard);
  EXPECT_TRUE(s.flags.color_area);
  EXPECT_TRUE(s.flags.route);
  EXPECT_FALSE(s.flags.poi);
  EXPECT_EQ(s.color_period_ms, 50);
  EXPECT_EQ(s.request_period_ms, (std::array<std::int64_t, 3>{0, 60, 70}));
}

TEST(Scenario, PositionalParams) {
  const auto c = parse_scenario(R"({"records": 1, "clients": [{"id": "a", "components": [
      {"type": "generator", "distribution": "gaussian", "params": [5, 2]}]}]})");
  const auto& g = std::get<GeneratorConfig>(c.clients[0].components[0]);
  EXPECT_EQ(g.spec.params[0], 5.0);
  EXPECT_EQ(g.spec.params[1], 2.0);
}

TEST(Scenario, DuplicateClientId) {
  const auto e = parse_error(R"({"records": 1, "clients": [
      {"id": "dup", "components": [{"type": "sim2d"}]},
      {"id": "dup", "components": [{"type": "sim2d"}]}]})");
  EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
  EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
}

TEST(Scenario, ParetoWithoutMean) {
  const auto e = parse_error(R"({"records": 1, "clients": [{"id": "p", "components": [
      {"type": "generator", "distribution": "pareto", "params": {"shape": 0.5, "scale": 1}}]}]})");
  EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
  EXPECT_NE(std::string(e.what()).find("UndefinedMean"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("clients[0].components[0]"), std::string::npos);
}

TEST(Scenario, SyntaxErrorIsConfigParseError) {
  EXPECT_EQ(parse_error("{\"seed\": ").kind(), ErrorKind::ConfigParseError);
}

TEST(Scenario, ValidationErrors) {
  const char* bad[] = {
      R"({"records": 1, "clients": []})",
      R"({"clients": [{"id": "a", "components": [{"type": "sim2d"}]}]})",
      R"({"records": 1, "bogus": 1, "clients": [{"id": "a", "components": [{"type": "sim2d"}]}]})",
      R"({"records": 1, "clients": [{"id": "a b", "components": [{"type": "sim2d"}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": [{"type": "robot"}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": [{"type": "sim2d", "flags": ["x"]}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": [{"type": "sim2d", "level": "extreme"}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": [{"type": "generator", "distribution": "cauchy"}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": [{"type": "generator", "distribution": "gaussian", "params": {"sigma": -1}}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": [{"type": "generator", "distribution": "gaussian", "period_ms": 0}]}]})",
      R"({"records": 1, "mode": "later", "clients": [{"id": "a", "components": [{"type": "sim2d"}]}]})",
      R"({"records": -5, "clients": [{"id": "a", "components": [{"type": "sim2d"}]}]})",
      R"({"records": 1, "clients": [{"id": "a", "components": []}]})",
  };
  for (const auto* text : bad) {
    EXPECT_EQ(parse_error(text).kind(), ErrorKind::ValidationError) << text;
  }
}

TEST(Scenario, RealtimeWithoutBudgetIsValid) {
  EXPECT_NO_THROW(parse_scenario(
      R"({"mode": "realtime", "clients": [{"id": "a", "components": [{"type": "sim2d"}]}]})"));
}

TEST(Scenario, LoadMissingFile) {
  try {
    load_scenario("/nonexistent/scenario.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Scenario, ShippedScenariosLoad) {
  for (const auto* name : {"default.json", "repro_generator.json", "repro_sim2d.json", "demo.json"}) {
    EXPECT_NO_THROW(load_scenario(std::filesystem::path(IDSBED_SCENARIO_DIR) / name)) << name;
  }
}
