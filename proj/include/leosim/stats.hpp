#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leosim/congestion.hpp"
#include "leosim/traffic.hpp"
#include "leosim/types.hpp"

namespace leosim {

/// "flow" restricts a metric to the tagged foreground flows; "all" covers every packet.
enum class Scope : std::uint8_t { All = 0, Flow = 1 };
inline constexpr int kScopeCount = 2;
const char* scope_name(Scope s);

/// Empirical CDF over delay samples (seconds).
class DelayCdf {
 public:
  DelayCdf() = default;
  explicit DelayCdf(std::vector<double> samples);

  bool empty() const { return sorted_.empty(); }
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  /// Smallest sample s with CDF(s) >= q, for 0 < q <= 1. Absent when empty.
  std::optional<double> quantile(double q) const;
  /// Fraction of samples <= x.
  double cdf(double x) const;

 private:
  std::vector<double> sorted_;
};

struct BucketStats {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t hop_sum = 0;
  int hop_max = 0;
  double delay_sum = 0.0;
  double delay_max = 0.0;
  std::uint64_t detoured = 0;  ///< deliveries that used a backup-table hop
};

struct ClassStats {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t hop_sum = 0;
  std::vector<double> delays;  ///< seconds, delivery order
  std::vector<BucketStats> buckets;
};

struct StateChange {
  double time = 0.0;
  SatelliteId satellite;
  CongestionLabel label = CongestionLabel::Idle;
  double lambda = 0.0;
};

/// Fed by the event loop; every packet produces exactly one generated event
/// and at most one terminal (delivery or drop) event.
class StatsCollector {
 public:
  StatsCollector() = default;
  StatsCollector(double bucket_s, double horizon_s, int satellites);

  double bucket_length() const { return bucket_; }
  double horizon() const { return horizon_; }
  int bucket_count() const { return buckets_; }
  int satellites() const { return satellites_; }
  int bucket_of(double t) const;

  void record_generated(TrafficClass cls, bool flow, double t);
  void record_delivery(const Packet& pkt, double t);
  void record_drop(const DropRecord& drop, NodeIndex satellite, bool flow);
  /// Highest count of simultaneously Busy satellites seen in the bucket.
  void record_busy_count(double t, int busy);

  const ClassStats& get(Scope s, TrafficClass c) const {
    return stats_[static_cast<int>(s)][class_index(c)];
  }
  std::uint64_t sat_drops(int bucket, NodeIndex sat, TrafficClass c) const;
  int busy_count(int bucket) const { return busy_[bucket]; }

  DelayCdf delay_cdf(Scope s, TrafficClass c) const;
  /// delivered / generated over buckets intersecting [t0, t1). Absent if nothing generated.
  std::optional<double> throughput_ratio(Scope s, TrafficClass c, double t0, double t1) const;
  std::optional<double> throughput_ratio(Scope s, TrafficClass c) const;
  std::optional<double> mean_delay(Scope s, TrafficClass c) const;
  std::optional<double> mean_hops(Scope s, TrafficClass c) const;

 private:
  ClassStats& at(Scope s, TrafficClass c) { return stats_[static_cast<int>(s)][class_index(c)]; }

  double bucket_ = 60.0;
  double horizon_ = 0.0;
  int buckets_ = 0;
  int satellites_ = 0;
  std::array<std::array<ClassStats, kClassCount>, kScopeCount> stats_;
  std::vector<std::uint64_t> sat_drops_;  ///< [bucket][sat][class]
  std::vector<int> busy_;
};

/// One line of the optional per-packet trace.
struct TraceRecord {
  double time = 0.0;
  const char* event = "";
  std::uint64_t packet = 0;
  TrafficClass cls = TrafficClass::A;
  NodeIndex satellite = kNoNode;
  int hop = 0;
  int flow = -1;  ///< foreground flow index, -1 for background
};

struct SimulationReport {
  ConstellationParams constellation;
  StatsCollector stats;
  std::vector<DropRecord> drop_log;
  std::vector<StateChange> state_changes;
  std::vector<TraceRecord> trace;
  std::string route_tables_csv;  ///< body rows only; empty unless requested

  std::array<std::uint64_t, kClassCount> generated{};
  std::array<std::uint64_t, kClassCount> delivered{};
  std::array<std::uint64_t, kClassCount> dropped{};
  std::array<std::uint64_t, kClassCount> residual{};
  std::uint64_t events_processed = 0;
  std::uint64_t backup_recomputations = 0;
  std::uint64_t wait_for_route = 0;
  std::uint64_t backup_forwards = 0;
};

/// Writes the CSV report family into out_dir (created if missing). Throws IoError.
void export_report(const SimulationReport& report, const std::string& out_dir);

}  // namespace leosim
