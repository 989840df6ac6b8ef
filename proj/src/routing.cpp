#include "leosim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace leosim {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

// Dense O(V^2) Dijkstra from `source` over nodes not excluded. Constellations
// are small (tens of nodes), so a heap buys nothing.
void dijkstra(const TopologySnapshot& g, const NodeMask& excluded, NodeIndex source,
              std::vector<std::int64_t>& dist) {
  const int n = g.node_count();
  dist.assign(static_cast<std::size_t>(n), kInf);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  dist[source] = 0;
  for (int iter = 0; iter < n; ++iter) {
    NodeIndex u = kNoNode;
    for (NodeIndex v = 0; v < n; ++v) {
      if (!done[v] && dist[v] != kInf && (u == kNoNode || dist[v] < dist[u])) u = v;
    }
    if (u == kNoNode) break;
    done[u] = 1;
    for (const Link& l : g.links(u)) {
      if (excluded[l.neighbor]) continue;
      const std::int64_t cand = dist[u] + link_weight_ns(l.delay_s);
      if (cand < dist[l.neighbor]) dist[l.neighbor] = cand;
    }
  }
}

RouteTable build_table(const TopologySnapshot& g, const NodeMask& excluded) {
  const int n = g.node_count();
  RouteTable table(g.slot_index(), n);
  std::vector<std::int64_t> dist;
  for (NodeIndex dst = 0; dst < n; ++dst) {
    if (excluded[dst]) continue;
    // Undirected graph: distances from dst are distances to dst.
    dijkstra(g, excluded, dst, dist);
    for (NodeIndex cur = 0; cur < n; ++cur) {
      if (cur == dst) continue;
      // Adjacency is sorted, so the first minimal neighbor is the
      // lexicographically smallest one among equal-cost options.
      NodeIndex best = kNoNode;
      std::int64_t best_cost = kInf;
      for (const Link& l : g.links(cur)) {
        if (excluded[l.neighbor] || dist[l.neighbor] == kInf) continue;
        const std::int64_t c = link_weight_ns(l.delay_s) + dist[l.neighbor];
        if (c < best_cost) {
          best_cost = c;
          best = l.neighbor;
        }
      }
      if (best != kNoNode) table.set(cur, dst, best, best_cost);
    }
  }
  return table;
}

}  // namespace

std::int64_t link_weight_ns(double delay_s) {
  return std::max<std::int64_t>(1, std::llround(delay_s * 1e9));
}

RouteTable::RouteTable(std::int64_t slot_index, int node_count)
    : slot_index_(slot_index),
      nodes_(node_count),
      next_(static_cast<std::size_t>(node_count) * node_count, kNoNode),
      cost_(static_cast<std::size_t>(node_count) * node_count, kInf) {}

std::optional<NodeIndex> RouteTable::next_hop(NodeIndex current, NodeIndex destination) const {
  const NodeIndex n = next_[at(current, destination)];
  if (n == kNoNode) return std::nullopt;
  return n;
}

std::optional<std::int64_t> RouteTable::cost_ns(NodeIndex current, NodeIndex destination) const {
  if (current == destination) return 0;
  const std::int64_t c = cost_[at(current, destination)];
  if (c == kInf) return std::nullopt;
  return c;
}

void RouteTable::set(NodeIndex current, NodeIndex destination, NodeIndex next, std::int64_t cost) {
  next_[at(current, destination)] = next;
  cost_[at(current, destination)] = cost;
}

RouteTable compute_shortest_path_table(const TopologySnapshot& snapshot) {
  return build_table(snapshot, NodeMask(static_cast<std::size_t>(snapshot.node_count()), false));
}

RouteTable compute_backup_table(const TopologySnapshot& snapshot, const NodeMask& busy) {
  NodeMask excluded(static_cast<std::size_t>(snapshot.node_count()), false);
  for (std::size_t i = 0; i < excluded.size() && i < busy.size(); ++i) excluded[i] = busy[i];
  return build_table(snapshot, excluded);
}

ForwardDecision decide_forward(TrafficClass cls, NodeIndex here, NodeIndex destination,
                               const RouteTable& primary, const RouteTable& backup,
                               const NodeMask& busy, RoutingStrategy strategy,
                               bool detoured) {
  if (here == destination) return ForwardDecision::deliver();
  // A detoured packet stays on the backup table while it can; handing it back
  // to the primary table mid-detour lets two neighbours bounce it forever.
  if (detoured && !is_real_time(cls) && strategy == RoutingStrategy::Composite) {
    const auto alt = backup.next_hop(here, destination);
    if (alt && !busy[*alt]) return ForwardDecision::forward(*alt, RouteVia::Backup);
  }
  const auto next = primary.next_hop(here, destination);
  if (!next) return ForwardDecision::wait();
  if (!busy[*next] || is_real_time(cls) || strategy == RoutingStrategy::PqwrrOnly) {
    return ForwardDecision::forward(*next, RouteVia::Primary);
  }
  const auto alt = backup.next_hop(here, destination);
  if (alt && !busy[*alt]) return ForwardDecision::forward(*alt, RouteVia::Backup);
  return ForwardDecision::wait();
}

RouteCenter::RouteCenter(const ConstellationParams& params, double slot_length)
    : params_(params),
      slot_length_(slot_length),
      busy_(static_cast<std::size_t>(params.total()), false) {}

RouteCenter::Update RouteCenter::update_route_tables(double t, const NodeMask& busy) {
  Update u;
  const std::int64_t slot = time_slot_index(t, slot_length_);
  if (slot != slot_) {
    slot_ = slot;
    snapshot_ = build_topology_snapshot(params_, static_cast<double>(slot) * slot_length_, slot);
    primary_ = compute_shortest_path_table(snapshot_);
    u.primary_changed = true;
  }
  if (u.primary_changed || busy != busy_) {
    busy_ = busy;
    backup_ = compute_backup_table(snapshot_, busy_);
    ++backup_recomputations_;
    u.backup_changed = true;
  }
  return u;
}

void write_route_table_csv(std::ostream& out, const RouteTable& table,
                           const ConstellationParams& params) {
  char buf[64];
  for (NodeIndex s = 0; s < table.node_count(); ++s) {
    for (NodeIndex d = 0; d < table.node_count(); ++d) {
      const auto next = table.next_hop(s, d);
      if (!next) continue;
      std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(*table.cost_ns(s, d)) * 1e-9);
      out << table.slot_index() << ',' << satellite_label(params.id(s)) << ','
          << satellite_label(params.id(d)) << ',' << satellite_label(params.id(*next)) << ','
          << buf << '\n';
    }
  }
}

}  // namespace leosim
