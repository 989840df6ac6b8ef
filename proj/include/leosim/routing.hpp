#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "leosim/constellation.hpp"
#include "leosim/types.hpp"

namespace leosim {

/// One flag per NodeIndex; true marks a satellite whose last notification was Busy.
using NodeMask = std::vector<bool>;

/// Link weights are integral nanoseconds so that path costs compare exactly
/// regardless of summation order.
std::int64_t link_weight_ns(double delay_s);

class RouteTable {
 public:
  RouteTable() = default;
  RouteTable(std::int64_t slot_index, int node_count);

  std::int64_t slot_index() const { return slot_index_; }
  int node_count() const { return nodes_; }

  std::optional<NodeIndex> next_hop(NodeIndex current, NodeIndex destination) const;
  std::optional<std::int64_t> cost_ns(NodeIndex current, NodeIndex destination) const;

  void set(NodeIndex current, NodeIndex destination, NodeIndex next, std::int64_t cost);

  bool operator==(const RouteTable&) const = default;

 private:
  std::size_t at(NodeIndex c, NodeIndex d) const {
    return static_cast<std::size_t>(c) * static_cast<std::size_t>(nodes_) +
           static_cast<std::size_t>(d);
  }

  std::int64_t slot_index_ = 0;
  int nodes_ = 0;
  std::vector<NodeIndex> next_;
  std::vector<std::int64_t> cost_;
};

RouteTable compute_shortest_path_table(const TopologySnapshot& snapshot);

/// Shortest paths on the snapshot with busy nodes deleted. A busy node still
/// gets entries as a source but never appears as a next hop or destination.
RouteTable compute_backup_table(const TopologySnapshot& snapshot, const NodeMask& busy);

enum class RoutingStrategy : std::uint8_t { PqwrrOnly, Composite };
enum class RouteVia : std::uint8_t { Primary, Backup };

struct ForwardDecision {
  enum class Kind : std::uint8_t { Deliver, Forward, WaitForRoute };

  Kind kind = Kind::WaitForRoute;
  NodeIndex next = kNoNode;
  RouteVia via = RouteVia::Primary;

  static ForwardDecision deliver() { return {Kind::Deliver, kNoNode, RouteVia::Primary}; }
  static ForwardDecision wait() { return {Kind::WaitForRoute, kNoNode, RouteVia::Primary}; }
  static ForwardDecision forward(NodeIndex n, RouteVia via) { return {Kind::Forward, n, via}; }

  bool operator==(const ForwardDecision&) const = default;
};

/// Per-hop forwarding rule. Class A always follows the primary table; class B
/// detours through the backup table when the primary next hop is Busy, and
/// waits when no admissible backup hop exists. Under PqwrrOnly every class
/// follows the class-A rule. A class-B packet that has already been detoured
/// keeps following the backup table while its backup hop is usable.
ForwardDecision decide_forward(TrafficClass cls, NodeIndex here, NodeIndex destination,
                               const RouteTable& primary, const RouteTable& backup,
                               const NodeMask& busy,
                               RoutingStrategy strategy = RoutingStrategy::Composite,
                               bool detoured = false);

/// The idealized routing control center: owns the current snapshot and both
/// tables, recomputing on slot boundaries (both) and busy-set changes (backup).
class RouteCenter {
 public:
  RouteCenter(const ConstellationParams& params, double slot_length);

  struct Update {
    bool primary_changed = false;
    bool backup_changed = false;
    bool any() const { return primary_changed || backup_changed; }
  };

  Update update_route_tables(double t, const NodeMask& busy);

  const TopologySnapshot& snapshot() const { return snapshot_; }
  const RouteTable& primary() const { return primary_; }
  const RouteTable& backup() const { return backup_; }
  const NodeMask& busy() const { return busy_; }
  std::int64_t current_slot() const { return slot_; }
  std::uint64_t backup_recomputations() const { return backup_recomputations_; }

 private:
  ConstellationParams params_;
  double slot_length_;
  std::int64_t slot_ = -1;
  TopologySnapshot snapshot_;
  RouteTable primary_;
  RouteTable backup_;
  NodeMask busy_;
  std::uint64_t backup_recomputations_ = 0;
};

/// CSV rows: slot,src,dst,next_hop,cost_seconds (unreachable pairs omitted).
void write_route_table_csv(std::ostream& out, const RouteTable& table,
                           const ConstellationParams& params);

}  // namespace leosim
