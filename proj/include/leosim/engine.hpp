#pragma once

#include <string>

#include "leosim/scenario.hpp"
#include "leosim/stats.hpp"

namespace leosim {

/// Test-only fault injection. Never set by the CLI.
struct EngineHooks {
  /// Counts the first drop of the run twice.
  bool double_count_first_drop = false;
};

/// Runs one scenario to its horizon. The scenario must already be validated.
///
/// Packet lifecycle: user arrival -> uplink to the source access satellite ->
/// PQWRR queue -> service -> forwarding decision -> link propagation -> next
/// satellite's queue (hop + 1) -> ... -> downlink once the serving satellite
/// is the destination user's current access satellite.
SimulationReport run(const ScenarioConfig& cfg, const EngineHooks& hooks = {});

struct AuditResult {
  bool pass = true;
  std::string detail;
};

/// generated = delivered + dropped + residual, per class, and agreement between
/// the report counters and the stats collector.
AuditResult conservation_audit(const SimulationReport& report);

}  // namespace leosim
