#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leosim/congestion.hpp"
#include "leosim/constellation.hpp"
#include "leosim/routing.hpp"
#include "leosim/scheduling.hpp"
#include "leosim/traffic.hpp"

namespace leosim {

struct TrafficConfig {
  std::vector<FlowSpec> flows = {FlowSpec{{-56.0, 26.0, 0.0}, {65.2, -58.0, 0.0}, 100.0, {}}};
  double background_rate = 2000.0;
  std::string grid_file;   ///< empty: bundled grid
  std::string ratio_file;  ///< empty: bundled table
  ClassMix class_mix;      ///< applies to background and flows alike
  std::uint32_t packet_bits = 1000;

  bool operator==(const TrafficConfig&) const = default;
};

struct RoutingConfig {
  RoutingStrategy strategy = RoutingStrategy::Composite;
  double slot_length = 60.0;
  int wait_capacity = 1000;
  bool dump_tables = false;

  bool operator==(const RoutingConfig&) const = default;
};

struct RunConfig {
  double duration = 1800.0;
  std::uint64_t seed = 20240601;
  std::string output_dir = "report";
  double stats_bucket = 60.0;
  /// Re-evaluation cadence for lambda expiry when no arrivals occur.
  double congestion_tick = 0.1;
  /// Access-satellite cache lifetime per terminal.
  double access_refresh = 1.0;
  bool trace = false;

  bool operator==(const RunConfig&) const = default;
};

struct ScenarioConfig {
  ConstellationParams constellation;
  TrafficConfig traffic;
  SchedulerConfig scheduler;
  CongestionConfig congestion;
  RoutingConfig routing;
  RunConfig run;

  bool operator==(const ScenarioConfig&) const = default;
};

const char* strategy_name(RoutingStrategy s);

/// Checks every section against its module's preconditions. Throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// Sets one dotted key ("scheduler.weights", "run.seed", ...). Throws
/// ConfigError for unknown keys or malformed values. Relative file paths are
/// resolved against base_dir.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                   const std::string& base_dir = "");

/// INI-style text: [section] headers, key = value lines, '#' or ';' comments.
ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir = "");
ScenarioConfig load_scenario(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Loads the grid and ratio files named by the config (or the bundled ones).
TrafficSpec make_traffic_spec(const ScenarioConfig& cfg);

std::vector<std::string> scenario_keys();

}  // namespace leosim
