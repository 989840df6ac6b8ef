#include <algorithm>

#include "doctest.h"
#include "leosim/scenario.hpp"

using namespace leosim;

TEST_CASE("defaults validate") {
  const ScenarioConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.constellation.total() == 66);
  CHECK(cfg.scheduler.service_rate == 500.0);
  CHECK(cfg.scheduler.capacity == 50);
  CHECK(cfg.congestion.alpha == 250.0);
  CHECK(cfg.congestion.beta == 450.0);
  CHECK(cfg.traffic.packet_bits == 1000);
  REQUIRE(cfg.traffic.flows.size() == 1);
  CHECK(cfg.traffic.flows[0].rate == 100.0);
}

TEST_CASE("a minimal file overrides only what it names") {
  const ScenarioConfig cfg =
      parse_scenario("# comment\n; another\n[run]\nduration = 60  # trailing\nseed=7\n");
  ScenarioConfig expected;
  expected.run.duration = 60.0;
  expected.run.seed = 7;
  CHECK(cfg == expected);
}

TEST_CASE("bundled scenarios load") {
  const std::string dir = LEOSIM_SOURCE_DIR "/scenarios/";
  for (const char* name : {"iridium_pqwrr.ini", "iridium_composite.ini", "smoke.ini"}) {
    CAPTURE(name);
    const ScenarioConfig cfg = load_scenario(dir + name);
    CHECK_NOTHROW(validate(cfg));
    CHECK(cfg.constellation.inclination_deg == 86.4);
    CHECK(cfg.constellation.lat_threshold_deg == 60.0);
    CHECK(cfg.constellation.min_elevation_deg == 8.2);
  }
  const ScenarioConfig pq = load_scenario(dir + "iridium_pqwrr.ini");
  const ScenarioConfig co = load_scenario(dir + "iridium_composite.ini");
  CHECK(pq.routing.strategy == RoutingStrategy::PqwrrOnly);
  CHECK(co.routing.strategy == RoutingStrategy::Composite);
  CHECK(pq.run.duration == 1800.0);
  CHECK(pq.scheduler.weights == std::array<int, 3>{4, 2, 1});
  REQUIRE(pq.traffic.flows.size() == 1);
  CHECK(pq.traffic.flows[0].src.latitude_deg == -56.0);
  CHECK(pq.traffic.flows[0].dst.longitude_deg == -58.0);
  // The two runs differ only in strategy and output directory.
  ScenarioConfig aligned = co;
  aligned.routing.strategy = pq.routing.strategy;
  aligned.run.output_dir = pq.run.output_dir;
  CHECK(aligned == pq);
}

TEST_CASE("serialize and parse round-trip") {
  ScenarioConfig cfg;
  cfg.traffic.flows.push_back({{1.5, -2.25, 0.0}, {-33.0, 151.0, 0.0}, 12.5, {}});
  cfg.traffic.class_mix.fraction = {0.1, 0.2, 0.3, 0.4};
  // One mix governs every flow.
  for (FlowSpec& f : cfg.traffic.flows) f.mix = cfg.traffic.class_mix;
  cfg.scheduler.scope = BufferScope::Shared;
  cfg.scheduler.weights = {9, 3, 1};
  cfg.congestion.window = 0.37;
  cfg.congestion.count_uplink = false;
  cfg.routing.strategy = RoutingStrategy::PqwrrOnly;
  cfg.routing.dump_tables = true;
  cfg.run.seed = 18446744073709551615ull;
  cfg.run.output_dir = "some dir";
  cfg.run.trace = true;
  cfg.constellation.phase_offset_deg = 1.0 / 3.0;
  const ScenarioConfig back = parse_scenario(serialize_scenario(cfg));
  CHECK(back == cfg);
  CHECK(serialize_scenario(back) == serialize_scenario(cfg));
}

TEST_CASE("every key appears in the serialized form") {
  const std::string text = serialize_scenario(ScenarioConfig{});
  for (const std::string& key : scenario_keys()) {
    const auto dot = key.find('.');
    CAPTURE(key);
    CHECK(text.find("[" + key.substr(0, dot) + "]") != std::string::npos);
    CHECK(text.find("\n" + key.substr(dot + 1) + " = ") != std::string::npos);
  }
}

TEST_CASE("invalid settings are rejected with the key named") {
  const auto message = [](const std::string& text) {
    try {
      validate(parse_scenario(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("[congestion]\nalpha = 500\nbeta = 450\n").find("congestion") != std::string::npos);
  CHECK(message("[run]\nbogus = 1\n").find("run.bogus") != std::string::npos);
  CHECK(message("[nowhere]\nx = 1\n") != "");
  CHECK(message("[run]\nduration = -5\n").find("run.duration") != std::string::npos);
  CHECK(message("[run]\nduration = abc\n").find("run.duration") != std::string::npos);
  CHECK(message("[scheduler]\nweights = 1,2,4\n").find("scheduler.weights") != std::string::npos);
  CHECK(message("[routing]\nstrategy = fastest\n").find("routing.strategy") != std::string::npos);
  CHECK(message("[traffic]\nclass_mix = 0.5,0.5,0.5\n") != "");
  CHECK(message("[traffic]\nflows = 95,0 -> 0,0 @ 10\n").find("traffic.flows") != std::string::npos);
  CHECK(message("[constellation]\ninclination_deg = 0\n") != "");
  CHECK(message("no section here\n") != "");
}

TEST_CASE("apply_setting changes one value") {
  ScenarioConfig cfg;
  apply_setting(cfg, "routing.strategy", "pqwrr_only");
  CHECK(cfg.routing.strategy == RoutingStrategy::PqwrrOnly);
  apply_setting(cfg, "scheduler.buffer_capacity", "12");
  CHECK(cfg.scheduler.capacity == 12);
  CHECK_THROWS_AS(apply_setting(cfg, "scheduler.buffer_capacity", "12.5"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "nope", "1"), ConfigError);
}

TEST_CASE("missing files are I/O errors") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), IoError);
  ScenarioConfig cfg;
  cfg.traffic.grid_file = "/nonexistent/grid.txt";
  CHECK_THROWS_AS(make_traffic_spec(cfg), IoError);
}
