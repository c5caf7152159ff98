#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "shapeservo/config.hpp"

using namespace shapeservo;
using config::parse_config;
using config::PlantKind;
using config::ScenarioConfig;

TEST_CASE("empty document yields the valid defaults") {
  const ScenarioConfig cfg = parse_config("");
  CHECK(cfg.dt == 1e-3);
  CHECK(cfg.duration == 10.0);
  CHECK(cfg.p == 6);
  CHECK(cfg.plant == PlantKind::kLinear);
  CHECK(cfg.u_max[0] == 5.0);
  CHECK(cfg.u_min[0] == -6.0);
}

TEST_CASE("positivity constraints carry the line number") {
  try {
    parse_config("# comment\ngains.gamma1 = -1\n");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("positive") != std::string::npos);
  }
}

TEST_CASE("per-axis limit lists are accepted") {
  const ScenarioConfig cfg = parse_config(
      "limits.u_max = 5,5,5,5,5,5\n"
      "limits.u_min = -6,-6,-6,-6,-6,-6\n");
  for (int i = 0; i < 6; ++i) {
    CHECK(cfg.u_max[i] == 5.0);
    CHECK(cfg.u_min[i] == -6.0);
  }
}

TEST_CASE("unknown keys, bad types, and malformed lines are errors") {
  CHECK_THROWS_WITH_AS(parse_config("no.such.key = 1\n"),
                       doctest::Contains("unknown key"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("dt = banana\n"),
                       doctest::Contains("line 1"), std::invalid_argument);
  CHECK_THROWS(parse_config("just some words\n"));
  CHECK_THROWS(parse_config("dt =\n"));
  CHECK_THROWS(parse_config("limits.u_max = 1,2,3\n"));  // not 1 or 6 values
}

TEST_CASE("comments and blank lines are ignored") {
  const ScenarioConfig cfg = parse_config(
      "# full-line comment\n"
      "\n"
      "dt = 0.002   # trailing comment\n");
  CHECK(cfg.dt == 0.002);
}

TEST_CASE("dotted namespaces reach nested settings") {
  const ScenarioConfig cfg = parse_config(
      "plant.kind = chain\n"
      "chain.nodes = 12\n"
      "gains.eps1 = 0.25\n"
      "target.kind = sinusoid\n");
  CHECK(cfg.plant == PlantKind::kChain);
  CHECK(cfg.chain_nodes == 12);
  CHECK(cfg.eps1 == 0.25);
  CHECK(cfg.target == config::TargetKind::kSinusoid);
}

TEST_CASE("limits must bracket zero") {
  CHECK_THROWS(parse_config("limits.u_min = 1\n"));
  CHECK_THROWS(parse_config("limits.u_max = -2\n"));
}

TEST_CASE("duration zero is allowed, negative is not") {
  CHECK(parse_config("duration = 0\n").duration == 0.0);
  CHECK_THROWS(parse_config("duration = -1\n"));
}

TEST_CASE("presets") {
  CHECK(config::preset("regulation-linear").plant == PlantKind::kLinear);
  CHECK(config::preset("tracking-linear").target ==
        config::TargetKind::kSinusoid);
  CHECK(config::preset("regulation-chain").plant == PlantKind::kChain);
  CHECK(config::preset("fig1-saturation").kind ==
        config::ScenarioKind::kSaturationDemo);
  CHECK_THROWS(config::preset("no-such-preset"));
}

TEST_CASE("parsing layers on top of a base config") {
  ScenarioConfig base = config::preset("regulation-chain");
  const ScenarioConfig cfg = parse_config("chain.gravity = 0\n", base);
  CHECK(cfg.plant == PlantKind::kChain);
  CHECK(cfg.chain_gravity == 0.0);
}

TEST_CASE("jdot_max parses and must be positive") {
  const ScenarioConfig cfg = parse_config("gains.jdot_max = 5.5\n");
  CHECK(cfg.jdot_max == 5.5);
  CHECK(parse_config("").jdot_max == 2.0);
  CHECK_THROWS_WITH_AS(parse_config("gains.jdot_max = 0\n"),
                       doctest::Contains("positive"), std::invalid_argument);
}

TEST_CASE("sigma guard defaults to 1e-8 * eps") {
  const ScenarioConfig cfg = parse_config("gains.eps1 = 0.5\n");
  CHECK(cfg.effective_sigma_guard(cfg.eps1) == doctest::Approx(5e-9));
  const ScenarioConfig cfg2 = parse_config("gains.sigma_guard = 1e-7\n");
  CHECK(cfg2.effective_sigma_guard(cfg2.eps1) == 1e-7);
}
