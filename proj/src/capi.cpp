#include "leosim/leosim.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "leosim/compare.hpp"
#include "leosim/engine.hpp"
#include "leosim/scenario.hpp"

struct leosim_scenario {
  leosim::ScenarioConfig config;
};

struct leosim_report {
  leosim::SimulationReport report;
  leosim::ReportSummary summary;
};

namespace {

thread_local std::string g_last_error;

leosim_status fail(leosim_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the core's exception types onto status codes.
template <class Fn>
leosim_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const leosim::ConfigError& e) {
    return fail(LEOSIM_ERR_VALIDATION, e.what());
  } catch (const leosim::IoError& e) {
    return fail(LEOSIM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LEOSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LEOSIM_ERR_INTERNAL, e.what());
  }
}

leosim_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf == nullptr || cap < s.size() + 1) {
    if (buf == nullptr && needed != nullptr) return LEOSIM_OK;
    return fail(LEOSIM_ERR_ARGUMENT, "output buffer too small");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return LEOSIM_OK;
}

double or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

bool valid_class(leosim_class c) { return c >= LEOSIM_CLASS_A && c <= LEOSIM_CLASS_B0; }

}  // namespace

extern "C" {

const char* leosim_version(void) { return "1.0.0"; }

const char* leosim_last_error(void) { return g_last_error.c_str(); }

const char* leosim_status_name(leosim_status status) {
  switch (status) {
    case LEOSIM_OK: return "ok";
    case LEOSIM_ERR_VALIDATION: return "validation error";
    case LEOSIM_ERR_AUDIT: return "audit failure";
    case LEOSIM_ERR_IO: return "i/o error";
    case LEOSIM_ERR_ARGUMENT: return "invalid argument";
    case LEOSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

leosim_status leosim_scenario_default(leosim_scenario** out) {
  if (out == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "out is NULL");
  return guarded([&] {
    *out = new leosim_scenario{};
    return LEOSIM_OK;
  });
}

leosim_status leosim_scenario_load(const char* path, leosim_scenario** out) {
  if (path == nullptr || out == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "path or out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new leosim_scenario{leosim::load_scenario(path)};
    return LEOSIM_OK;
  });
}

leosim_status leosim_scenario_parse(const char* text, const char* base_dir,
                                    leosim_scenario** out) {
  if (text == nullptr || out == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "text or out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new leosim_scenario{leosim::parse_scenario(text, base_dir ? base_dir : "")};
    return LEOSIM_OK;
  });
}

leosim_status leosim_scenario_set(leosim_scenario* scenario, const char* key, const char* value) {
  if (scenario == nullptr || key == nullptr || value == nullptr) {
    return fail(LEOSIM_ERR_ARGUMENT, "scenario, key or value is NULL");
  }
  return guarded([&] {
    // Apply to a copy so a rejected value leaves the scenario untouched.
    leosim::ScenarioConfig copy = scenario->config;
    leosim::apply_setting(copy, key, value);
    scenario->config = std::move(copy);
    return LEOSIM_OK;
  });
}

leosim_status leosim_scenario_get(const leosim_scenario* scenario, const char* key, char* buf,
                                  size_t cap, size_t* needed) {
  if (scenario == nullptr || key == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "NULL argument");
  return guarded([&] {
    // serialize_scenario is the single source of key formatting.
    const std::string text = leosim::serialize_scenario(scenario->config);
    const std::string k = key;
    const auto dot = k.find('.');
    if (dot == std::string::npos) return fail(LEOSIM_ERR_VALIDATION, k + ": unknown key");
    const std::string section = "[" + k.substr(0, dot) + "]";
    const std::string name = k.substr(dot + 1) + " = ";
    bool in_section = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto eol = text.find('\n', pos);
      const std::string line = text.substr(pos, eol - pos);
      pos = eol == std::string::npos ? text.size() : eol + 1;
      if (!line.empty() && line.front() == '[') {
        in_section = line == section;
      } else if (in_section && line.rfind(name, 0) == 0) {
        return copy_out(line.substr(name.size()), buf, cap, needed);
      }
    }
    return fail(LEOSIM_ERR_VALIDATION, k + ": unknown key");
  });
}

leosim_status leosim_scenario_validate(const leosim_scenario* scenario) {
  if (scenario == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "scenario is NULL");
  return guarded([&] {
    leosim::validate(scenario->config);
    return LEOSIM_OK;
  });
}

leosim_status leosim_scenario_serialize(const leosim_scenario* scenario, char* buf, size_t cap,
                                        size_t* needed) {
  if (scenario == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "scenario is NULL");
  return guarded(
      [&] { return copy_out(leosim::serialize_scenario(scenario->config), buf, cap, needed); });
}

void leosim_scenario_free(leosim_scenario* scenario) { delete scenario; }

leosim_status leosim_run(const leosim_scenario* scenario, leosim_report** out) {
  if (scenario == nullptr || out == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    leosim::validate(scenario->config);
    auto* r = new leosim_report{leosim::run(scenario->config), {}};
    r->summary = leosim::ReportSummary::from_report(r->report);
    *out = r;
    return LEOSIM_OK;
  });
}

leosim_status leosim_run_experiment(const leosim_scenario* scenario, const char* out_dir) {
  if (scenario == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "scenario is NULL");
  return guarded([&] {
    leosim::validate(scenario->config);
    const leosim::SimulationReport report = leosim::run(scenario->config);
    leosim::export_report(report, out_dir ? out_dir : scenario->config.run.output_dir);
    const leosim::AuditResult audit = leosim::conservation_audit(report);
    if (!audit.pass) return fail(LEOSIM_ERR_AUDIT, "conservation audit failed: " + audit.detail);
    return LEOSIM_OK;
  });
}

leosim_status leosim_report_audit(const leosim_report* report) {
  if (report == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "report is NULL");
  return guarded([&] {
    const leosim::AuditResult audit = leosim::conservation_audit(report->report);
    if (!audit.pass) return fail(LEOSIM_ERR_AUDIT, "conservation audit failed: " + audit.detail);
    return LEOSIM_OK;
  });
}

leosim_status leosim_report_export(const leosim_report* report, const char* out_dir) {
  if (report == nullptr || out_dir == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "NULL argument");
  return guarded([&] {
    leosim::export_report(report->report, out_dir);
    return LEOSIM_OK;
  });
}

leosim_status leosim_report_class_metrics(const leosim_report* report, leosim_scope scope,
                                          leosim_class cls, leosim_class_metrics* out) {
  if (report == nullptr || out == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "NULL argument");
  if (!valid_class(cls) || (scope != LEOSIM_SCOPE_ALL && scope != LEOSIM_SCOPE_FLOW)) {
    return fail(LEOSIM_ERR_ARGUMENT, "scope or class out of range");
  }
  const auto* row = report->summary.find(static_cast<leosim::Scope>(scope),
                                         static_cast<leosim::TrafficClass>(cls));
  if (row == nullptr) return fail(LEOSIM_ERR_INTERNAL, "missing summary row");
  out->generated = row->generated;
  out->delivered = row->delivered;
  out->dropped = row->dropped;
  out->throughput_ratio = or_nan(row->throughput_ratio);
  out->mean_delay_ms = or_nan(row->mean_delay_ms);
  out->p90_delay_ms = or_nan(row->p90_delay_ms);
  out->mean_hops = or_nan(row->mean_hops);
  return LEOSIM_OK;
}

leosim_status leosim_report_counters(const leosim_report* report, leosim_counters* out) {
  if (report == nullptr || out == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "NULL argument");
  const leosim::SimulationReport& r = report->report;
  out->events_processed = r.events_processed;
  out->state_changes = r.state_changes.size();
  out->backup_recomputations = r.backup_recomputations;
  out->wait_for_route = r.wait_for_route;
  out->backup_forwards = r.backup_forwards;
  out->residual = 0;
  for (std::uint64_t v : r.residual) out->residual += v;
  return LEOSIM_OK;
}

void leosim_report_free(leosim_report* report) { delete report; }

leosim_status leosim_compare_dirs(const char* dir_a, const char* dir_b, char* buf, size_t cap,
                                  size_t* needed) {
  if (dir_a == nullptr || dir_b == nullptr) return fail(LEOSIM_ERR_ARGUMENT, "NULL directory");
  return guarded([&] {
    const auto a = leosim::ReportSummary::load(dir_a);
    const auto b = leosim::ReportSummary::load(dir_b);
    return copy_out(leosim::format_comparison(leosim::compare(a, b)), buf, cap, needed);
  });
}

}  // extern "C"
