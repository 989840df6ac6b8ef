#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "leosim/types.hpp"

namespace leosim {

/// Opaque reference to a packet owned elsewhere (the engine's packet pool).
using PacketHandle = std::uint32_t;

enum class BufferScope : std::uint8_t { PerClass, Shared };

struct SchedulerConfig {
  double service_rate = 500.0;  ///< packets/s, one PQWRR server per satellite
  int capacity = 50;            ///< packets, per class queue or per node (see scope)
  BufferScope scope = BufferScope::PerClass;
  std::array<int, 3> weights = {4, 2, 1};  ///< B2, B1, B0
  double channel_rate = 10000.0;           ///< per-link transmitter, packets/s

  void validate() const;
  bool operator==(const SchedulerConfig&) const = default;
};

struct QueuedPacket {
  PacketHandle handle = 0;
  TrafficClass cls = TrafficClass::A;
};

struct EnqueueOutcome {
  bool accepted = true;
  DropRecord drop;  ///< meaningful only when !accepted
};

/// Strict priority for class A over a count-based weighted round-robin across
/// B2, B1, B0. A round gives each backlogged B queue up to its weight in
/// consecutive services; an empty queue forfeits what is left of its quota.
class PqwrrScheduler {
 public:
  explicit PqwrrScheduler(const SchedulerConfig& cfg, SatelliteId owner = {});

  EnqueueOutcome enqueue(PacketHandle handle, TrafficClass cls, double t);
  std::optional<QueuedPacket> dequeue();

  std::size_t size(TrafficClass cls) const { return queues_[class_index(cls)].size(); }
  std::size_t total() const;
  bool empty() const { return total() == 0; }
  int credits(TrafficClass cls) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& q : queues_)
      for (const QueuedPacket& p : q) fn(p);
  }

 private:
  bool has_room(TrafficClass cls) const;
  bool b_empty() const;
  void start_round();

  SchedulerConfig cfg_;
  SatelliteId owner_;
  std::array<std::deque<QueuedPacket>, kClassCount> queues_;
  std::array<int, 3> credits_{};
  int cursor_ = 0;  ///< 0..2 over B2, B1, B0; 3 means round finished
};

struct ScriptedArrival {
  double t = 0.0;
  TrafficClass cls = TrafficClass::A;
  PacketHandle handle = 0;
};

struct ServiceCompletion {
  double started = 0.0;
  double finished = 0.0;
  PacketHandle handle = 0;
  TrafficClass cls = TrafficClass::A;
  /// Class A backlog at the instant service began.
  std::size_t a_backlog_at_start = 0;
};

struct SingleNodeTrace {
  std::vector<ServiceCompletion> completions;
  std::vector<DropRecord> drops;
  std::array<std::uint64_t, kClassCount> offered{};
  std::array<std::uint64_t, kClassCount> dropped{};
  std::size_t residual = 0;
};

/// Runs one isolated PQWRR node: a non-preemptive server that dequeues one
/// packet every 1/service_rate seconds while anything is queued. Arrivals must
/// be sorted by time; arrivals tie before completions.
SingleNodeTrace run_service_process(const SchedulerConfig& cfg,
                                    std::span<const ScriptedArrival> arrivals, double horizon);

}  // namespace leosim
