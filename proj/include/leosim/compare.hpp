#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leosim/stats.hpp"

namespace leosim {

struct ClassSummary {
  Scope scope = Scope::All;
  TrafficClass cls = TrafficClass::A;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::optional<double> throughput_ratio;
  std::optional<double> mean_delay_ms;
  std::optional<double> p90_delay_ms;
  std::optional<double> mean_hops;
};

/// The per-class rows of summary.csv.
struct ReportSummary {
  double horizon = 0.0;
  std::vector<ClassSummary> rows;

  const ClassSummary* find(Scope s, TrafficClass c) const;

  static ReportSummary from_report(const SimulationReport& report);
  /// Reads <dir>/summary.csv. Throws IoError / ConfigError.
  static ReportSummary load(const std::string& dir);
};

struct ClassDelta {
  Scope scope = Scope::All;
  TrafficClass cls = TrafficClass::A;
  std::optional<double> p90_delay_ms;
  std::optional<double> mean_delay_ms;
  std::optional<double> throughput_ratio;
  std::optional<double> mean_hops;
};

/// Per-class deltas, b minus a. Rejects reports with different horizons or class sets.
std::vector<ClassDelta> compare(const ReportSummary& a, const ReportSummary& b);

std::string format_comparison(const std::vector<ClassDelta>& deltas);

}  // namespace leosim
