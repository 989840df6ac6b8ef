#include "leosim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace leosim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(d)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return d;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return n;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || v[0] == '-' || used != v.size()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return n;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string resolve_path(const std::string& base_dir, const std::string& v) {
  if (v.empty() || base_dir.empty()) return v;
  const std::filesystem::path p(v);
  if (p.is_absolute()) return v;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::vector<FlowSpec> parse_flows(const std::string& key, const std::string& v,
                                  const ClassMix& mix) {
  std::vector<FlowSpec> flows;
  for (const std::string& item : split(v, ';')) {
    if (item.empty()) continue;
    // "src_lat,src_lon -> dst_lat,dst_lon @ rate"
    const auto arrow = item.find("->");
    const auto at = item.find('@');
    if (arrow == std::string::npos || at == std::string::npos || at < arrow) {
      throw ConfigError(key + ": expected 'lat,lon -> lat,lon @ rate', got '" + item + "'");
    }
    const auto src = split(item.substr(0, arrow), ',');
    const auto dst = split(item.substr(arrow + 2, at - arrow - 2), ',');
    if (src.size() != 2 || dst.size() != 2) {
      throw ConfigError(key + ": endpoints need 'lat,lon', got '" + item + "'");
    }
    FlowSpec f;
    f.src = {parse_double(key, src[0]), parse_double(key, src[1]), 0.0};
    f.dst = {parse_double(key, dst[0]), parse_double(key, dst[1]), 0.0};
    f.rate = parse_double(key, trim(item.substr(at + 1)));
    f.mix = mix;
    flows.push_back(f);
  }
  return flows;
}

std::string format_flows(const std::vector<FlowSpec>& flows) {
  std::string out;
  for (const FlowSpec& f : flows) {
    if (!out.empty()) out += "; ";
    out += fmt(f.src.latitude_deg) + "," + fmt(f.src.longitude_deg) + " -> " +
           fmt(f.dst.latitude_deg) + "," + fmt(f.dst.longitude_deg) + " @ " + fmt(f.rate);
  }
  return out;
}

struct Setting {
  const char* key;
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define LEOSIM_DOUBLE(KEY, FIELD)                                                        \
  Setting {                                                                              \
    KEY, [](ScenarioConfig& c, const std::string& v, const std::string&) {               \
      c.FIELD = parse_double(KEY, v);                                                    \
    },                                                                                   \
        [](const ScenarioConfig& c) { return fmt(c.FIELD); }                             \
  }

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = {
      {"constellation.planes",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.constellation.planes = static_cast<int>(parse_int("constellation.planes", v));
       },
       [](const ScenarioConfig& c) { return std::to_string(c.constellation.planes); }},
      {"constellation.sats_per_plane",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.constellation.sats_per_plane =
             static_cast<int>(parse_int("constellation.sats_per_plane", v));
       },
       [](const ScenarioConfig& c) { return std::to_string(c.constellation.sats_per_plane); }},
      LEOSIM_DOUBLE("constellation.altitude_km", constellation.altitude_km),
      LEOSIM_DOUBLE("constellation.inclination_deg", constellation.inclination_deg),
      LEOSIM_DOUBLE("constellation.lat_threshold_deg", constellation.lat_threshold_deg),
      LEOSIM_DOUBLE("constellation.min_elevation_deg", constellation.min_elevation_deg),
      LEOSIM_DOUBLE("constellation.raan_spread_deg", constellation.raan_spread_deg),
      LEOSIM_DOUBLE("constellation.phase_offset_deg", constellation.phase_offset_deg),

      {"traffic.flows",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.traffic.flows = parse_flows("traffic.flows", v, c.traffic.class_mix);
       },
       [](const ScenarioConfig& c) { return format_flows(c.traffic.flows); }},
      LEOSIM_DOUBLE("traffic.background_rate", traffic.background_rate),
      {"traffic.grid_file",
       [](ScenarioConfig& c, const std::string& v, const std::string& base) {
         c.traffic.grid_file = resolve_path(base, v);
       },
       [](const ScenarioConfig& c) { return c.traffic.grid_file; }},
      {"traffic.ratio_file",
       [](ScenarioConfig& c, const std::string& v, const std::string& base) {
         c.traffic.ratio_file = resolve_path(base, v);
       },
       [](const ScenarioConfig& c) { return c.traffic.ratio_file; }},
      {"traffic.class_mix",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         const auto parts = split(v, ',');
         if (parts.size() != kClassCount) {
           throw ConfigError("traffic.class_mix: expected 4 fractions for A,B2,B1,B0");
         }
         for (int i = 0; i < kClassCount; ++i) {
           c.traffic.class_mix.fraction[i] = parse_double("traffic.class_mix", parts[i]);
         }
         for (FlowSpec& f : c.traffic.flows) f.mix = c.traffic.class_mix;
       },
       [](const ScenarioConfig& c) {
         const auto& f = c.traffic.class_mix.fraction;
         return fmt(f[0]) + "," + fmt(f[1]) + "," + fmt(f[2]) + "," + fmt(f[3]);
       }},
      {"traffic.packet_bits",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         const long long n = parse_int("traffic.packet_bits", v);
         if (n <= 0) throw ConfigError("traffic.packet_bits: must satisfy packet_bits > 0");
         c.traffic.packet_bits = static_cast<std::uint32_t>(n);
       },
       [](const ScenarioConfig& c) { return std::to_string(c.traffic.packet_bits); }},

      LEOSIM_DOUBLE("scheduler.service_rate", scheduler.service_rate),
      {"scheduler.buffer_capacity",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.scheduler.capacity = static_cast<int>(parse_int("scheduler.buffer_capacity", v));
       },
       [](const ScenarioConfig& c) { return std::to_string(c.scheduler.capacity); }},
      {"scheduler.buffer_scope",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         if (v == "per_class") {
           c.scheduler.scope = BufferScope::PerClass;
         } else if (v == "shared") {
           c.scheduler.scope = BufferScope::Shared;
         } else {
           throw ConfigError("scheduler.buffer_scope: expected per_class or shared, got '" + v +
                             "'");
         }
       },
       [](const ScenarioConfig& c) {
         return std::string(c.scheduler.scope == BufferScope::PerClass ? "per_class" : "shared");
       }},
      {"scheduler.weights",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         const auto parts = split(v, ',');
         if (parts.size() != 3) throw ConfigError("scheduler.weights: expected 3 integers w2,w1,w0");
         for (int i = 0; i < 3; ++i) {
           c.scheduler.weights[i] = static_cast<int>(parse_int("scheduler.weights", parts[i]));
         }
       },
       [](const ScenarioConfig& c) {
         const auto& w = c.scheduler.weights;
         return std::to_string(w[0]) + "," + std::to_string(w[1]) + "," + std::to_string(w[2]);
       }},
      LEOSIM_DOUBLE("scheduler.channel_rate", scheduler.channel_rate),

      LEOSIM_DOUBLE("congestion.alpha", congestion.alpha),
      LEOSIM_DOUBLE("congestion.beta", congestion.beta),
      LEOSIM_DOUBLE("congestion.window", congestion.window),
      {"congestion.count_uplink",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.congestion.count_uplink = parse_bool("congestion.count_uplink", v);
       },
       [](const ScenarioConfig& c) {
         return std::string(c.congestion.count_uplink ? "true" : "false");
       }},

      {"routing.strategy",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         if (v == "composite") {
           c.routing.strategy = RoutingStrategy::Composite;
         } else if (v == "pqwrr_only") {
           c.routing.strategy = RoutingStrategy::PqwrrOnly;
         } else {
           throw ConfigError("routing.strategy: expected pqwrr_only or composite, got '" + v + "'");
         }
       },
       [](const ScenarioConfig& c) { return std::string(strategy_name(c.routing.strategy)); }},
      LEOSIM_DOUBLE("routing.slot_length", routing.slot_length),
      {"routing.wait_capacity",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.routing.wait_capacity = static_cast<int>(parse_int("routing.wait_capacity", v));
       },
       [](const ScenarioConfig& c) { return std::to_string(c.routing.wait_capacity); }},
      {"routing.dump_tables",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.routing.dump_tables = parse_bool("routing.dump_tables", v);
       },
       [](const ScenarioConfig& c) { return std::string(c.routing.dump_tables ? "true" : "false"); }},

      LEOSIM_DOUBLE("run.duration", run.duration),
      {"run.seed",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.run.seed = parse_u64("run.seed", v);
       },
       [](const ScenarioConfig& c) { return std::to_string(c.run.seed); }},
      {"run.output_dir",
       [](ScenarioConfig& c, const std::string& v, const std::string&) { c.run.output_dir = v; },
       [](const ScenarioConfig& c) { return c.run.output_dir; }},
      LEOSIM_DOUBLE("run.stats_bucket", run.stats_bucket),
      LEOSIM_DOUBLE("run.congestion_tick", run.congestion_tick),
      LEOSIM_DOUBLE("run.access_refresh", run.access_refresh),
      {"run.trace",
       [](ScenarioConfig& c, const std::string& v, const std::string&) {
         c.run.trace = parse_bool("run.trace", v);
       },
       [](const ScenarioConfig& c) { return std::string(c.run.trace ? "true" : "false"); }},
  };
  return table;
}

#undef LEOSIM_DOUBLE

void require(bool ok, const std::string& key, const char* constraint) {
  if (!ok) throw ConfigError(key + ": must satisfy " + constraint);
}

}  // namespace

const char* strategy_name(RoutingStrategy s) {
  return s == RoutingStrategy::Composite ? "composite" : "pqwrr_only";
}

void validate(const ScenarioConfig& cfg) {
  cfg.constellation.validate();
  cfg.scheduler.validate();
  cfg.congestion.validate();

  const TrafficConfig& t = cfg.traffic;
  cfg.traffic.class_mix.validate();
  require(t.background_rate >= 0.0, "traffic.background_rate", "background_rate >= 0");
  for (const FlowSpec& f : t.flows) {
    require(f.rate >= 0.0, "traffic.flows", "rate >= 0");
    for (const GeoPosition& g : {f.src, f.dst}) {
      require(g.latitude_deg >= -90.0 && g.latitude_deg <= 90.0, "traffic.flows",
              "-90 <= latitude <= 90");
      require(g.longitude_deg >= -180.0 && g.longitude_deg < 180.0, "traffic.flows",
              "-180 <= longitude < 180");
    }
  }

  require(cfg.routing.slot_length > 0.0, "routing.slot_length", "slot_length > 0");
  require(cfg.routing.wait_capacity >= 0, "routing.wait_capacity", "wait_capacity >= 0");

  require(cfg.run.duration > 0.0, "run.duration", "duration > 0");
  require(cfg.run.stats_bucket > 0.0, "run.stats_bucket", "stats_bucket > 0");
  require(cfg.run.congestion_tick > 0.0, "run.congestion_tick", "congestion_tick > 0");
  require(cfg.run.access_refresh > 0.0, "run.access_refresh", "access_refresh > 0");
  require(!cfg.run.output_dir.empty(), "run.output_dir", "a nonempty path");

  // Input files must load and satisfy their own invariants.
  (void)make_traffic_spec(cfg);
}

void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                   const std::string& base_dir) {
  for (const Setting& s : settings()) {
    if (key == s.key) {
      s.set(cfg, trim(value), base_dir);
      return;
    }
  }
  throw ConfigError(key + ": unknown key");
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir) {
  ScenarioConfig cfg;
  std::string section;
  std::istringstream in(text);
  int lineno = 0;
  // class_mix must be applied before flows so each flow inherits it.
  std::vector<std::pair<std::string, std::string>> entries;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    // ';' separates flows, so it only starts a comment at the beginning of a line.
    if (const auto first = line.find_first_not_of(" \t"); first != std::string::npos &&
                                                           line[first] == ';') {
      line.clear();
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  std::stable_partition(entries.begin(), entries.end(),
                        [](const auto& e) { return e.first == "traffic.class_mix"; });
  for (const auto& [key, value] : entries) apply_setting(cfg, key, value, base_dir);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  // Absolute so a serialized config stays loadable from anywhere.
  const auto base = std::filesystem::absolute(path).parent_path().lexically_normal();
  return parse_scenario(ss.str(), base.string());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  std::string out;
  std::string section;
  for (const Setting& s : settings()) {
    const std::string key = s.key;
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + s.get(cfg) + "\n";
  }
  return out;
}

TrafficSpec make_traffic_spec(const ScenarioConfig& cfg) {
  TrafficSpec spec;
  spec.flows = cfg.traffic.flows;
  spec.background_rate = cfg.traffic.background_rate;
  spec.background_mix = cfg.traffic.class_mix;
  if (!cfg.traffic.grid_file.empty()) spec.grid = DemandGrid::load(cfg.traffic.grid_file);
  if (!cfg.traffic.ratio_file.empty()) {
    spec.ratios = ContinentRatioTable::load(cfg.traffic.ratio_file);
  }
  return spec;
}

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const Setting& s : settings()) keys.emplace_back(s.key);
  return keys;
}

}  // namespace leosim
