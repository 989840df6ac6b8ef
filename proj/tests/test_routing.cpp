#include <random>
#include <sstream>

#include "doctest.h"
#include "leosim/routing.hpp"
#include "oracles.hpp"

using namespace leosim;

namespace {

const ConstellationParams kDefault{};

NodeMask random_busy(std::mt19937_64& rng, int n, int count) {
  NodeMask busy(n, false);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < count; ++i) busy[pick(rng)] = true;
  return busy;
}

// Chain 0 - 1 - 2 - 3 with a slower bypass 0 - 4 - 2.
TopologySnapshot chain() {
  TopologySnapshot g(0, 5);
  g.add_link(0, 1, 0.010, LinkKind::Isl);
  g.add_link(1, 2, 0.010, LinkKind::Isl);
  g.add_link(2, 3, 0.010, LinkKind::Isl);
  g.add_link(0, 4, 0.015, LinkKind::Iol);
  g.add_link(4, 2, 0.015, LinkKind::Iol);
  g.finalize();
  return g;
}

}  // namespace

TEST_CASE("primary table matches Floyd-Warshall") {
  for (double t : {0.0, 1234.0, 5000.0}) {
    const TopologySnapshot g = build_topology_snapshot(kDefault, t);
    const RouteTable table = compute_shortest_path_table(g);
    const oracle::Matrix d = oracle::floyd_warshall(g, NodeMask(g.node_count(), false));
    for (int s = 0; s < g.node_count(); ++s) {
      for (int t2 = 0; t2 < g.node_count(); ++t2) {
        const oracle::Walk w = oracle::walk(table, g, s, t2);
        REQUIRE(w.ok);
        REQUIRE(w.cost);
        CHECK(*w.cost == d[s][t2]);
        CHECK(table.cost_ns(s, t2) == d[s][t2]);
      }
    }
  }
}

TEST_CASE("backup table matches the oracle with busy nodes deleted") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const TopologySnapshot g = build_topology_snapshot(kDefault, trial * 431.0);
    const NodeMask busy = random_busy(rng, g.node_count(), 1 + trial % 8);
    const RouteTable table = compute_backup_table(g, busy);
    const oracle::Matrix d = oracle::backup_costs(g, busy);
    for (int s = 0; s < g.node_count(); ++s) {
      for (int t = 0; t < g.node_count(); ++t) {
        if (s == t) continue;
        const auto nh = table.next_hop(s, t);
        if (busy[t] || d[s][t] == oracle::kInf) {
          CHECK_FALSE(nh);
          continue;
        }
        REQUIRE(nh);
        CHECK_FALSE(busy[*nh]);
        const oracle::Walk w = oracle::walk(table, g, s, t);
        REQUIRE(w.ok);
        REQUIRE(w.cost);
        CHECK(*w.cost == d[s][t]);
      }
    }
  }
}

TEST_CASE("backup paths never beat primary paths") {
  std::mt19937_64 rng(5);
  const TopologySnapshot g = build_topology_snapshot(kDefault, 900.0);
  const RouteTable primary = compute_shortest_path_table(g);
  NodeMask busy(g.node_count(), false);
  RouteTable previous = compute_backup_table(g, busy);
  CHECK(previous == primary);
  // Growing the busy set can only lengthen or remove backup routes.
  std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
  for (int step = 0; step < 8; ++step) {
    busy[pick(rng)] = true;
    const RouteTable next = compute_backup_table(g, busy);
    for (int s = 0; s < g.node_count(); ++s)
      for (int t = 0; t < g.node_count(); ++t) {
        const auto now = next.cost_ns(s, t);
        if (!now) continue;
        REQUIRE(primary.cost_ns(s, t));
        CHECK(*now >= *primary.cost_ns(s, t));
        REQUIRE(previous.cost_ns(s, t));
        CHECK(*now >= *previous.cost_ns(s, t));
      }
    previous = next;
  }
}

TEST_CASE("a source whose neighbours are all busy has no backup route") {
  const TopologySnapshot g = build_topology_snapshot(kDefault, 0.0);
  const int src = 10;
  NodeMask busy(g.node_count(), false);
  for (const Link& l : g.links(src)) busy[l.neighbor] = true;
  const RouteTable table = compute_backup_table(g, busy);
  for (int t = 0; t < g.node_count(); ++t) {
    if (t != src) CHECK_FALSE(table.next_hop(src, t));
  }
}

TEST_CASE("small graph routes") {
  const TopologySnapshot g = chain();
  const RouteTable primary = compute_shortest_path_table(g);
  CHECK(primary.next_hop(0, 3) == 1);
  CHECK(primary.cost_ns(0, 3) == 30'000'000);

  NodeMask busy(5, false);
  busy[1] = true;
  const RouteTable backup = compute_backup_table(g, busy);
  CHECK(backup.next_hop(0, 3) == 4);
  CHECK(backup.cost_ns(0, 3) == 40'000'000);
  CHECK_FALSE(backup.next_hop(0, 1));
  // The busy node itself still routes out through idle neighbours.
  CHECK(backup.next_hop(1, 3) == 2);
}

TEST_CASE("forwarding decisions") {
  const TopologySnapshot g = chain();
  const RouteTable primary = compute_shortest_path_table(g);
  NodeMask busy(5, false);
  busy[1] = true;
  const RouteTable backup = compute_backup_table(g, busy);
  using K = ForwardDecision::Kind;

  SUBCASE("at the destination") {
    CHECK(decide_forward(TrafficClass::B0, 3, 3, primary, backup, busy) ==
          ForwardDecision::deliver());
  }
  SUBCASE("class A ignores congestion") {
    CHECK(decide_forward(TrafficClass::A, 0, 3, primary, backup, busy) ==
          ForwardDecision::forward(1, RouteVia::Primary));
  }
  SUBCASE("class B detours around a busy next hop") {
    for (TrafficClass c : {TrafficClass::B2, TrafficClass::B1, TrafficClass::B0}) {
      CHECK(decide_forward(c, 0, 3, primary, backup, busy) ==
            ForwardDecision::forward(4, RouteVia::Backup));
    }
  }
  SUBCASE("PQWRR-only follows the primary table") {
    CHECK(decide_forward(TrafficClass::B0, 0, 3, primary, backup, busy,
                         RoutingStrategy::PqwrrOnly) ==
          ForwardDecision::forward(1, RouteVia::Primary));
  }
  SUBCASE("idle next hop takes the primary route") {
    CHECK(decide_forward(TrafficClass::B1, 2, 0, primary, backup, busy).kind == K::Forward);
    CHECK(decide_forward(TrafficClass::B1, 3, 0, primary, backup, busy).via == RouteVia::Primary);
  }
  SUBCASE("busy destination leaves class B waiting") {
    CHECK(decide_forward(TrafficClass::B2, 0, 1, primary, backup, busy).kind == K::WaitForRoute);
    CHECK(decide_forward(TrafficClass::A, 0, 1, primary, backup, busy).kind == K::Forward);
  }
  SUBCASE("no primary route") {
    TopologySnapshot lonely(0, 2);
    lonely.finalize();
    const RouteTable empty = compute_shortest_path_table(lonely);
    const NodeMask idle(2, false);
    CHECK(decide_forward(TrafficClass::A, 0, 1, empty, empty, idle) == ForwardDecision::wait());
  }
  SUBCASE("a detoured packet stays on the backup path") {
    // Primary and backup agree on 0 -> 1 here; the detour flag picks the backup table.
    NodeMask busy4(5, false);
    busy4[4] = true;
    const RouteTable backup4 = compute_backup_table(g, busy4);
    CHECK(decide_forward(TrafficClass::B0, 0, 3, primary, backup4, busy4, RoutingStrategy::Composite,
                         true) == ForwardDecision::forward(1, RouteVia::Backup));
    // Class A and PQWRR-only ignore the detour flag.
    CHECK(decide_forward(TrafficClass::A, 0, 3, primary, backup4, busy4, RoutingStrategy::Composite,
                         true)
              .via == RouteVia::Primary);
    CHECK(decide_forward(TrafficClass::B0, 0, 3, primary, backup4, busy4,
                         RoutingStrategy::PqwrrOnly, true)
              .via == RouteVia::Primary);
  }
}

TEST_CASE("forwarding under random congestion never loops") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const TopologySnapshot g = build_topology_snapshot(kDefault, trial * 97.0);
    const NodeMask busy = random_busy(rng, g.node_count(), 6);
    const RouteTable primary = compute_shortest_path_table(g);
    const RouteTable backup = compute_backup_table(g, busy);
    for (int s = 0; s < g.node_count(); ++s) {
      for (int d = 0; d < g.node_count(); ++d) {
        int here = s;
        bool detoured = false;
        int steps = 0;
        while (steps <= g.node_count()) {
          const ForwardDecision f = decide_forward(TrafficClass::B1, here, d, primary, backup, busy,
                                                   RoutingStrategy::Composite, detoured);
          if (f.kind != ForwardDecision::Kind::Forward) break;
          CHECK(g.adjacent(here, f.next));
          detoured = detoured || f.via == RouteVia::Backup;
          here = f.next;
          ++steps;
        }
        CHECK(steps <= g.node_count());
      }
    }
  }
}

TEST_CASE("route center recomputes on slot change and busy change") {
  RouteCenter rc(kDefault, 60.0);
  NodeMask busy(66, false);
  auto u = rc.update_route_tables(0.0, busy);
  CHECK(u.primary_changed);
  CHECK(rc.current_slot() == 0);
  u = rc.update_route_tables(30.0, busy);
  CHECK_FALSE(u.any());
  busy[5] = true;
  u = rc.update_route_tables(31.0, busy);
  CHECK_FALSE(u.primary_changed);
  CHECK(u.backup_changed);
  CHECK(rc.backup_recomputations() >= 1);
  u = rc.update_route_tables(60.0, busy);
  CHECK(u.primary_changed);
  CHECK(rc.current_slot() == 1);
}

TEST_CASE("route table CSV lists reachable pairs") {
  const TopologySnapshot g = build_topology_snapshot(kDefault, 0.0);
  const RouteTable table = compute_shortest_path_table(g);
  std::ostringstream os;
  write_route_table_csv(os, table, kDefault);
  int rows = 0;
  std::istringstream in(os.str());
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 66 * 65);
}
