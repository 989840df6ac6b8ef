// Command-line front end. Talks to the simulator only through the C API.

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leosim/leosim.h"

namespace {

struct ScenarioDeleter {
  void operator()(leosim_scenario* s) const { leosim_scenario_free(s); }
};
struct ReportDeleter {
  void operator()(leosim_report* r) const { leosim_report_free(r); }
};
using ScenarioPtr = std::unique_ptr<leosim_scenario, ScenarioDeleter>;
using ReportPtr = std::unique_ptr<leosim_report, ReportDeleter>;

int report_error(leosim_status status) {
  std::fprintf(stderr, "leosim: %s: %s\n", leosim_status_name(status), leosim_last_error());
  return static_cast<int>(status);
}

// flag > file > default
leosim_status load_with_overrides(const std::string& path, const std::vector<std::string>& sets,
                                  ScenarioPtr& out) {
  leosim_scenario* raw = nullptr;
  leosim_status st = leosim_scenario_load(path.c_str(), &raw);
  out.reset(raw);
  if (st != LEOSIM_OK) return st;
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "leosim: --set expects key=value, got '%s'\n", kv.c_str());
      return LEOSIM_ERR_VALIDATION;
    }
    st = leosim_scenario_set(out.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != LEOSIM_OK) return st;
  }
  return leosim_scenario_validate(out.get());
}

std::string get_key(const leosim_scenario* s, const char* key) {
  size_t needed = 0;
  leosim_scenario_get(s, key, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  if (leosim_scenario_get(s, key, buf.data(), buf.size(), nullptr) != LEOSIM_OK) return {};
  buf.resize(needed ? needed - 1 : 0);
  return buf;
}

void print_metric(double v, const char* fmt) {
  if (std::isnan(v)) {
    std::printf("%10s", "n/a");
  } else {
    std::printf(fmt, v);
  }
}

void print_summary(const leosim_report* report) {
  static const char* kNames[] = {"A", "B2", "B1", "B0"};
  for (leosim_scope scope : {LEOSIM_SCOPE_FLOW, LEOSIM_SCOPE_ALL}) {
    std::printf("%s traffic\n", scope == LEOSIM_SCOPE_FLOW ? "foreground flow" : "all");
    std::printf("  class  generated  delivered    dropped  tput_ratio   mean_ms    p90_ms  mean_hops\n");
    for (int c = 0; c < 4; ++c) {
      leosim_class_metrics m{};
      leosim_report_class_metrics(report, scope, static_cast<leosim_class>(c), &m);
      std::printf("  %-5s %10llu %10llu %10llu  ", kNames[c],
                  static_cast<unsigned long long>(m.generated),
                  static_cast<unsigned long long>(m.delivered),
                  static_cast<unsigned long long>(m.dropped));
      print_metric(m.throughput_ratio, "%10.4f");
      print_metric(m.mean_delay_ms, "%10.2f");
      print_metric(m.p90_delay_ms, "%10.2f");
      print_metric(m.mean_hops, "%11.3f");
      std::printf("\n");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO constellation QoS routing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(leosim_version()));

  std::string scenario_path;
  std::vector<std::string> sets;

  auto* validate = app.add_subcommand("validate", "Load and validate a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();
  validate->add_option("--set", sets, "Override a key: section.key=value (repeatable)");
  bool print_config = false;
  validate->add_flag("--print", print_config, "Print the fully resolved scenario");

  auto* run = app.add_subcommand("run", "Run a scenario and export its report directory");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--set", sets, "Override a key: section.key=value (repeatable)");
  std::string out_dir, strategy, seed, duration;
  run->add_option("--out", out_dir, "Report directory (run.output_dir)");
  run->add_option("--strategy", strategy, "pqwrr_only or composite (routing.strategy)");
  run->add_option("--seed", seed, "RNG seed (run.seed)");
  run->add_option("--duration", duration, "Simulated seconds (run.duration)");
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "Do not print the summary table");

  auto* cmp = app.add_subcommand("compare", "Per-class deltas between two report directories (b - a)");
  std::string dir_a, dir_b;
  cmp->add_option("report_a", dir_a, "Baseline report directory")->required();
  cmp->add_option("report_b", dir_b, "Report directory to compare")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(LEOSIM_ERR_VALIDATION);
  }

  if (*validate) {
    ScenarioPtr s;
    const leosim_status st = load_with_overrides(scenario_path, sets, s);
    if (st != LEOSIM_OK) return report_error(st);
    if (print_config) {
      size_t needed = 0;
      leosim_scenario_serialize(s.get(), nullptr, 0, &needed);
      std::string text(needed, '\0');
      leosim_scenario_serialize(s.get(), text.data(), text.size(), nullptr);
      std::fputs(text.c_str(), stdout);
    } else {
      std::printf("%s: ok\n", scenario_path.c_str());
    }
    return 0;
  }

  if (*run) {
    if (!out_dir.empty()) sets.push_back("run.output_dir=" + out_dir);
    if (!strategy.empty()) sets.push_back("routing.strategy=" + strategy);
    if (!seed.empty()) sets.push_back("run.seed=" + seed);
    if (!duration.empty()) sets.push_back("run.duration=" + duration);
    ScenarioPtr s;
    leosim_status st = load_with_overrides(scenario_path, sets, s);
    if (st != LEOSIM_OK) return report_error(st);

    leosim_report* raw = nullptr;
    st = leosim_run(s.get(), &raw);
    ReportPtr report(raw);
    if (st != LEOSIM_OK) return report_error(st);

    const std::string dir = get_key(s.get(), "run.output_dir");
    st = leosim_report_export(report.get(), dir.c_str());
    if (st != LEOSIM_OK) return report_error(st);
    if (!quiet) {
      std::printf("strategy %s, report written to %s\n",
                  get_key(s.get(), "routing.strategy").c_str(), dir.c_str());
      print_summary(report.get());
    }
    st = leosim_report_audit(report.get());
    if (st != LEOSIM_OK) return report_error(st);
    return 0;
  }

  if (*cmp) {
    size_t needed = 0;
    leosim_status st = leosim_compare_dirs(dir_a.c_str(), dir_b.c_str(), nullptr, 0, &needed);
    if (st != LEOSIM_OK) return report_error(st);
    std::string text(needed, '\0');
    st = leosim_compare_dirs(dir_a.c_str(), dir_b.c_str(), text.data(), text.size(), nullptr);
    if (st != LEOSIM_OK) return report_error(st);
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  return 0;
}
