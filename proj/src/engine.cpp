#include "leosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>

namespace leosim {

namespace {

enum class EventKind : std::uint8_t {
  TrafficArrival,
  UplinkArrive,
  ServiceComplete,
  LinkDeliver,
  ChannelFree,
  Downlink,
  SlotBoundary,
  CongestionTick,
  RouteRecompute,
};

bool carries_packet(EventKind k) {
  return k == EventKind::UplinkArrive || k == EventKind::LinkDeliver || k == EventKind::Downlink;
}

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::TrafficArrival;
  PacketHandle packet = 0;
  NodeIndex node = kNoNode;
  NodeIndex aux = kNoNode;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

/// Per-link transmitter with its FIFO send queue.
struct Channel {
  NodeIndex neighbor = kNoNode;
  double busy_until = -1.0;
  bool free_pending = false;
  std::deque<PacketHandle> queue;
};

struct SatelliteNode {
  explicit SatelliteNode(const SchedulerConfig& cfg, SatelliteId id) : scheduler(cfg, id) {}

  PqwrrScheduler scheduler;
  std::optional<PacketHandle> in_service;
  NodeCongestionState congestion;
  std::deque<PacketHandle> wait_queue;
  std::vector<Channel> channels;
};

struct AccessCache {
  double valid_until = -1.0;
  NodeIndex satellite = kNoNode;
};

class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, const EngineHooks& hooks)
      : cfg_(cfg),
        hooks_(hooks),
        params_(cfg.constellation),
        generator_(make_traffic_spec(cfg), cfg.run.seed, cfg.run.duration),
        routes_(cfg.constellation, cfg.routing.slot_length),
        busy_(static_cast<std::size_t>(cfg.constellation.total()), false),
        access_(generator_.terminals().size()) {
    for (NodeIndex n = 0; n < params_.total(); ++n) {
      nodes_.emplace_back(cfg.scheduler, params_.id(n));
    }
    report_.constellation = params_;
    report_.stats = StatsCollector(cfg.run.stats_bucket, cfg.run.duration, params_.total());
  }

  SimulationReport run();

 private:
  // Event queue
  void schedule(double t, EventKind kind, PacketHandle p = 0, NodeIndex node = kNoNode,
                NodeIndex aux = kNoNode) {
    heap_.push_back({t, seq_++, kind, p, node, aux});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
  }
  Event pop() {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event e = heap_.back();
    heap_.pop_back();
    return e;
  }

  // Packet pool
  PacketHandle allocate(Packet pkt) {
    if (!free_.empty()) {
      const PacketHandle h = free_.back();
      free_.pop_back();
      pool_[h] = pkt;
      return h;
    }
    pool_.push_back(pkt);
    return static_cast<PacketHandle>(pool_.size() - 1);
  }
  void release(PacketHandle h) { free_.push_back(h); }

  void on_traffic_arrival(double t);
  void on_uplink_arrive(double t, PacketHandle h, NodeIndex sat);
  void on_service_complete(double t, NodeIndex sat);
  void on_link_deliver(double t, PacketHandle h, NodeIndex sat);
  void on_channel_free(double t, NodeIndex sat, NodeIndex neighbor);
  void on_downlink(double t, PacketHandle h);
  void on_slot_boundary(double t);
  void on_congestion_tick(double t);
  void on_route_recompute(double t);

  void enqueue_at(double t, PacketHandle h, NodeIndex sat);
  void start_service(double t, NodeIndex sat);
  void forward(double t, PacketHandle h, NodeIndex sat);
  void transmit(double t, PacketHandle h, NodeIndex from, NodeIndex to);
  void send_now(double t, Channel& ch, PacketHandle h, NodeIndex from);
  void count_arrival(double t, NodeIndex sat);
  void observe(double t, NodeIndex sat);
  void reevaluate_wait_queues(double t);
  void drop(PacketHandle h, const DropRecord& rec, NodeIndex sat);
  void record_drop(const DropRecord& rec, NodeIndex sat, bool flow);
  NodeIndex access_of(TerminalId term, double t);
  double slant_delay(TerminalId term, NodeIndex sat, double t) const;
  void trace(double t, const char* what, PacketHandle h, NodeIndex sat);
  void compute_residual();

  const ScenarioConfig& cfg_;
  EngineHooks hooks_;
  ConstellationParams params_;
  TrafficGenerator generator_;
  RouteCenter routes_;
  NodeMask busy_;
  int busy_count_ = 0;
  bool recompute_pending_ = false;
  bool fault_injected_ = false;

  std::vector<SatelliteNode> nodes_;
  std::vector<AccessCache> access_;
  std::vector<Packet> pool_;
  std::vector<PacketHandle> free_;
  std::vector<Event> heap_;
  std::uint64_t seq_ = 0;
  std::uint64_t next_packet_id_ = 0;
  std::optional<Arrival> pending_arrival_;

  SimulationReport report_;
};

SimulationReport Simulation::run() {
  const double horizon = cfg_.run.duration;
  routes_.update_route_tables(0.0, busy_);
  if (cfg_.routing.dump_tables) {
    std::ostringstream os;
    write_route_table_csv(os, routes_.primary(), params_);
    report_.route_tables_csv += os.str();
  }
  if (cfg_.routing.slot_length <= horizon) {
    schedule(cfg_.routing.slot_length, EventKind::SlotBoundary);
  }
  if (cfg_.run.congestion_tick <= horizon) {
    schedule(cfg_.run.congestion_tick, EventKind::CongestionTick);
  }
  pending_arrival_ = generator_.next();
  if (pending_arrival_) schedule(pending_arrival_->time, EventKind::TrafficArrival);

  while (!heap_.empty() && heap_.front().time <= horizon) {
    const Event e = pop();
    ++report_.events_processed;
    switch (e.kind) {
      case EventKind::TrafficArrival: on_traffic_arrival(e.time); break;
      case EventKind::UplinkArrive: on_uplink_arrive(e.time, e.packet, e.node); break;
      case EventKind::ServiceComplete: on_service_complete(e.time, e.node); break;
      case EventKind::LinkDeliver: on_link_deliver(e.time, e.packet, e.node); break;
      case EventKind::ChannelFree: on_channel_free(e.time, e.node, e.aux); break;
      case EventKind::Downlink: on_downlink(e.time, e.packet); break;
      case EventKind::SlotBoundary: on_slot_boundary(e.time); break;
      case EventKind::CongestionTick: on_congestion_tick(e.time); break;
      case EventKind::RouteRecompute: on_route_recompute(e.time); break;
    }
  }
  compute_residual();
  report_.backup_recomputations = routes_.backup_recomputations();
  return std::move(report_);
}

void Simulation::trace(double t, const char* what, PacketHandle h, NodeIndex sat) {
  if (!cfg_.run.trace) return;
  const Packet& p = pool_[h];
  report_.trace.push_back({t, what, p.id, p.tos, sat, p.hop, p.flow});
}

NodeIndex Simulation::access_of(TerminalId term, double t) {
  AccessCache& c = access_[term];
  if (t >= c.valid_until) {
    const auto acc = access_satellite(generator_.terminals()[term], params_, t);
    c.satellite = acc ? params_.index(acc->satellite) : kNoNode;
    const double step = cfg_.run.access_refresh;
    c.valid_until = (std::floor(t / step) + 1.0) * step;
  }
  return c.satellite;
}

double Simulation::slant_delay(TerminalId term, NodeIndex sat, double t) const {
  const Vec3 ground = ground_position(generator_.terminals()[term], t);
  const Vec3 pos = satellite_position(params_.id(sat), params_, t).position_km;
  return distance_km(ground, pos) / kSpeedOfLightKmS;
}

void Simulation::record_drop(const DropRecord& rec, NodeIndex sat, bool flow) {
  report_.stats.record_drop(rec, sat, flow);
  report_.drop_log.push_back(rec);
  ++report_.dropped[class_index(rec.cls)];
  if (hooks_.double_count_first_drop && !fault_injected_) {
    fault_injected_ = true;
    report_.stats.record_drop(rec, sat, flow);
    report_.drop_log.push_back(rec);
    ++report_.dropped[class_index(rec.cls)];
  }
}

void Simulation::drop(PacketHandle h, const DropRecord& rec, NodeIndex sat) {
  trace(rec.time, "drop", h, sat);
  record_drop(rec, sat, pool_[h].flow >= 0);
  release(h);
}

void Simulation::on_traffic_arrival(double t) {
  const Arrival a = *pending_arrival_;
  pending_arrival_ = generator_.next();
  if (pending_arrival_) schedule(pending_arrival_->time, EventKind::TrafficArrival);

  Packet pkt;
  pkt.id = next_packet_id_++;
  pkt.tos = a.cls;
  pkt.src_user = a.src;
  pkt.dst_user = a.dst;
  pkt.size_bits = cfg_.traffic.packet_bits;
  pkt.created_at = t;
  pkt.flow = a.flow;
  ++report_.generated[class_index(a.cls)];
  report_.stats.record_generated(a.cls, a.flow >= 0, t);

  const PacketHandle h = allocate(pkt);
  trace(t, "generated", h, kNoNode);
  const NodeIndex src = access_of(a.src, t);
  if (src == kNoNode) {
    drop(h, DropRecord{t, SatelliteId{-1, -1}, a.cls, DropReason::AccessBlocked}, kNoNode);
    return;
  }
  schedule(t + slant_delay(a.src, src, t), EventKind::UplinkArrive, h, src);
}

void Simulation::count_arrival(double t, NodeIndex sat) {
  nodes_[sat].congestion.record_arrival(t, cfg_.congestion);
  observe(t, sat);
}

void Simulation::observe(double t, NodeIndex sat) {
  NodeCongestionState& cs = nodes_[sat].congestion;
  const auto note = cs.observe(cfg_.congestion);
  if (!note) return;
  const bool now_busy = *note == CongestionLabel::Busy;
  busy_[sat] = now_busy;
  busy_count_ += now_busy ? 1 : -1;
  report_.state_changes.push_back({t, params_.id(sat), *note, cs.lambda()});
  report_.stats.record_busy_count(t, busy_count_);
  // Zero-latency notification to neighbors and the routing center; coalesce
  // all changes at one instant into a single recomputation.
  if (!recompute_pending_) {
    recompute_pending_ = true;
    schedule(t, EventKind::RouteRecompute);
  }
}

void Simulation::on_uplink_arrive(double t, PacketHandle h, NodeIndex sat) {
  trace(t, "uplink", h, sat);
  if (cfg_.congestion.count_uplink) count_arrival(t, sat);
  enqueue_at(t, h, sat);
}

void Simulation::on_link_deliver(double t, PacketHandle h, NodeIndex sat) {
  ++pool_[h].hop;
  trace(t, "link_deliver", h, sat);
  count_arrival(t, sat);
  enqueue_at(t, h, sat);
}

void Simulation::enqueue_at(double t, PacketHandle h, NodeIndex sat) {
  SatelliteNode& node = nodes_[sat];
  const EnqueueOutcome out = node.scheduler.enqueue(h, pool_[h].tos, t);
  if (!out.accepted) {
    drop(h, out.drop, sat);
    return;
  }
  if (!node.in_service) start_service(t, sat);
}

void Simulation::start_service(double t, NodeIndex sat) {
  SatelliteNode& node = nodes_[sat];
  const auto next = node.scheduler.dequeue();
  if (!next) return;
  node.in_service = next->handle;
  schedule(t + 1.0 / cfg_.scheduler.service_rate, EventKind::ServiceComplete, 0, sat);
}

void Simulation::on_service_complete(double t, NodeIndex sat) {
  SatelliteNode& node = nodes_[sat];
  const PacketHandle h = *node.in_service;
  node.in_service.reset();
  trace(t, "service", h, sat);
  forward(t, h, sat);
  start_service(t, sat);
}

void Simulation::forward(double t, PacketHandle h, NodeIndex sat) {
  Packet& p = pool_[h];
  p.dst = access_of(p.dst_user, t);
  ForwardDecision d = ForwardDecision::wait();
  if (p.dst != kNoNode) {
    d = decide_forward(p.tos, sat, p.dst, routes_.primary(), routes_.backup(), busy_,
                       cfg_.routing.strategy, p.detoured);
  }
  switch (d.kind) {
    case ForwardDecision::Kind::Deliver:
      trace(t, "downlink", h, sat);
      schedule(t + slant_delay(p.dst_user, sat, t), EventKind::Downlink, h, sat);
      break;
    case ForwardDecision::Kind::Forward:
      if (p.hop >= params_.total()) {
        drop(h, DropRecord{t, params_.id(sat), p.tos, DropReason::HopLimit}, sat);
        break;
      }
      if (d.via == RouteVia::Backup) {
        p.detoured = true;
        ++report_.backup_forwards;
      }
      p.next = d.next;
      trace(t, d.via == RouteVia::Backup ? "forward_backup" : "forward", h, sat);
      transmit(t, h, sat, d.next);
      break;
    case ForwardDecision::Kind::WaitForRoute: {
      ++report_.wait_for_route;
      SatelliteNode& node = nodes_[sat];
      if (node.wait_queue.size() >= static_cast<std::size_t>(cfg_.routing.wait_capacity)) {
        drop(h, DropRecord{t, params_.id(sat), p.tos, DropReason::RouteWaitOverflow}, sat);
      } else {
        trace(t, "wait", h, sat);
        node.wait_queue.push_back(h);
      }
      break;
    }
  }
}

void Simulation::transmit(double t, PacketHandle h, NodeIndex from, NodeIndex to) {
  auto& channels = nodes_[from].channels;
  auto it = std::find_if(channels.begin(), channels.end(),
                         [to](const Channel& c) { return c.neighbor == to; });
  if (it == channels.end()) {
    channels.push_back(Channel{to, -1.0, false, {}});
    it = channels.end() - 1;
  }
  Channel& ch = *it;
  if (ch.busy_until <= t && ch.queue.empty()) {
    send_now(t, ch, h, from);
    return;
  }
  ch.queue.push_back(h);
  if (!ch.free_pending) {
    ch.free_pending = true;
    schedule(std::max(ch.busy_until, t), EventKind::ChannelFree, 0, from, to);
  }
}

void Simulation::send_now(double t, Channel& ch, PacketHandle h, NodeIndex from) {
  ch.busy_until = t + 1.0 / cfg_.scheduler.channel_rate;
  const Vec3 a = satellite_position(params_.id(from), params_, t).position_km;
  const Vec3 b = satellite_position(params_.id(ch.neighbor), params_, t).position_km;
  schedule(t + distance_km(a, b) / kSpeedOfLightKmS, EventKind::LinkDeliver, h, ch.neighbor);
}

void Simulation::on_channel_free(double t, NodeIndex sat, NodeIndex neighbor) {
  auto& channels = nodes_[sat].channels;
  auto it = std::find_if(channels.begin(), channels.end(),
                         [neighbor](const Channel& c) { return c.neighbor == neighbor; });
  Channel& ch = *it;
  ch.free_pending = false;
  if (ch.queue.empty()) return;
  const PacketHandle h = ch.queue.front();
  ch.queue.pop_front();
  send_now(t, ch, h, sat);
  if (!ch.queue.empty()) {
    ch.free_pending = true;
    schedule(ch.busy_until, EventKind::ChannelFree, 0, sat, neighbor);
  }
}

void Simulation::on_downlink(double t, PacketHandle h) {
  Packet& p = pool_[h];
  p.delivered_at = t;
  trace(t, "deliver", h, kNoNode);
  ++report_.delivered[class_index(p.tos)];
  report_.stats.record_delivery(p, t);
  release(h);
}

void Simulation::on_slot_boundary(double t) {
  const auto u = routes_.update_route_tables(t, busy_);
  if (cfg_.routing.dump_tables && u.primary_changed) {
    std::ostringstream os;
    write_route_table_csv(os, routes_.primary(), params_);
    report_.route_tables_csv += os.str();
  }
  reevaluate_wait_queues(t);
  const double next = t + cfg_.routing.slot_length;
  if (next <= cfg_.run.duration) schedule(next, EventKind::SlotBoundary);
}

void Simulation::on_congestion_tick(double t) {
  for (NodeIndex n = 0; n < params_.total(); ++n) {
    nodes_[n].congestion.advance(t, cfg_.congestion);
    observe(t, n);
  }
  report_.stats.record_busy_count(t, busy_count_);
  const double next = t + cfg_.run.congestion_tick;
  if (next <= cfg_.run.duration) schedule(next, EventKind::CongestionTick);
}

void Simulation::on_route_recompute(double t) {
  recompute_pending_ = false;
  if (routes_.update_route_tables(t, busy_).any()) reevaluate_wait_queues(t);
}

void Simulation::reevaluate_wait_queues(double t) {
  for (NodeIndex n = 0; n < params_.total(); ++n) {
    auto& q = nodes_[n].wait_queue;
    for (std::size_t k = q.size(); k > 0; --k) {
      const PacketHandle h = q.front();
      q.pop_front();
      // forward() re-queues at the back when still blocked; order is preserved
      // because every entry is visited exactly once.
      forward(t, h, n);
    }
  }
}

void Simulation::compute_residual() {
  const auto add = [this](PacketHandle h) { ++report_.residual[class_index(pool_[h].tos)]; };
  for (const SatelliteNode& node : nodes_) {
    node.scheduler.for_each([&](const QueuedPacket& q) { add(q.handle); });
    if (node.in_service) add(*node.in_service);
    for (PacketHandle h : node.wait_queue) add(h);
    for (const Channel& ch : node.channels) {
      for (PacketHandle h : ch.queue) add(h);
    }
  }
  for (const Event& e : heap_) {
    if (carries_packet(e.kind)) add(e.packet);
  }
}

}  // namespace

SimulationReport run(const ScenarioConfig& cfg, const EngineHooks& hooks) {
  Simulation sim(cfg, hooks);
  return sim.run();
}

AuditResult conservation_audit(const SimulationReport& report) {
  AuditResult r;
  std::ostringstream why;
  const StatsCollector& st = report.stats;
  for (TrafficClass c : kAllClasses) {
    const int i = class_index(c);
    const std::uint64_t accounted = report.delivered[i] + report.dropped[i] + report.residual[i];
    if (report.generated[i] != accounted) {
      r.pass = false;
      why << "class " << class_name(c) << ": generated " << report.generated[i]
          << " != delivered " << report.delivered[i] << " + dropped " << report.dropped[i]
          << " + residual " << report.residual[i] << "; ";
    }
    const ClassStats& cs = st.get(Scope::All, c);
    if (cs.generated != report.generated[i] || cs.delivered != report.delivered[i] ||
        cs.dropped != report.dropped[i]) {
      r.pass = false;
      why << "class " << class_name(c) << ": collector totals disagree with counters; ";
    }
    std::uint64_t bucket_delivered = 0;
    for (const BucketStats& b : cs.buckets) bucket_delivered += b.delivered;
    if (bucket_delivered != cs.delivered) {
      r.pass = false;
      why << "class " << class_name(c) << ": bucket deliveries do not sum to total; ";
    }
  }
  r.detail = why.str();
  return r;
}

}  // namespace leosim
