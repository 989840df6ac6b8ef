#include "leosim/scheduling.hpp"

#include <cmath>
#include <limits>

namespace leosim {

void SchedulerConfig::validate() const {
  if (!(service_rate > 0.0) || !std::isfinite(service_rate)) {
    throw ConfigError("scheduler.service_rate: must satisfy service_rate > 0");
  }
  if (capacity < 0) throw ConfigError("scheduler.buffer_capacity: must satisfy capacity >= 0");
  if (!(weights[0] > weights[1] && weights[1] > weights[2] && weights[2] >= 1)) {
    throw ConfigError("scheduler.weights: must satisfy w2 > w1 > w0 >= 1");
  }
  if (!(channel_rate > 0.0) || !std::isfinite(channel_rate)) {
    throw ConfigError("scheduler.channel_rate: must satisfy channel_rate > 0");
  }
}

PqwrrScheduler::PqwrrScheduler(const SchedulerConfig& cfg, SatelliteId owner)
    : cfg_(cfg), owner_(owner) {
  start_round();
}

std::size_t PqwrrScheduler::total() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

int PqwrrScheduler::credits(TrafficClass cls) const {
  if (cls == TrafficClass::A) return 0;
  return credits_[class_index(cls) - 1];
}

bool PqwrrScheduler::has_room(TrafficClass cls) const {
  const auto cap = static_cast<std::size_t>(cfg_.capacity);
  if (cfg_.scope == BufferScope::Shared) return total() < cap;
  return queues_[class_index(cls)].size() < cap;
}

bool PqwrrScheduler::b_empty() const {
  return queues_[1].empty() && queues_[2].empty() && queues_[3].empty();
}

void PqwrrScheduler::start_round() {
  credits_ = cfg_.weights;
  cursor_ = 0;
}

EnqueueOutcome PqwrrScheduler::enqueue(PacketHandle handle, TrafficClass cls, double t) {
  if (!has_room(cls)) {
    return {false, DropRecord{t, owner_, cls, DropReason::BufferOverflow}};
  }
  queues_[class_index(cls)].push_back({handle, cls});
  return {};
}

std::optional<QueuedPacket> PqwrrScheduler::dequeue() {
  auto& a = queues_[class_index(TrafficClass::A)];
  if (!a.empty()) {
    QueuedPacket p = a.front();
    a.pop_front();
    return p;
  }
  if (b_empty()) {
    start_round();
    return std::nullopt;
  }
  // At most one wrap into a fresh round is needed to reach a backlogged queue.
  for (int step = 0; step < 8; ++step) {
    if (cursor_ >= 3) start_round();
    auto& q = queues_[cursor_ + 1];
    if (!q.empty() && credits_[cursor_] > 0) {
      QueuedPacket p = q.front();
      q.pop_front();
      if (--credits_[cursor_] == 0) ++cursor_;
      return p;
    }
    credits_[cursor_] = 0;
    ++cursor_;
  }
  return std::nullopt;
}

SingleNodeTrace run_service_process(const SchedulerConfig& cfg,
                                    std::span<const ScriptedArrival> arrivals, double horizon) {
  SingleNodeTrace trace;
  PqwrrScheduler sched(cfg);
  const double service_time = 1.0 / cfg.service_rate;
  constexpr double kNever = std::numeric_limits<double>::infinity();

  std::optional<ServiceCompletion> in_service;
  std::size_t next = 0;

  const auto start_service = [&](double now) {
    const std::size_t a_backlog = sched.size(TrafficClass::A);
    if (auto p = sched.dequeue()) {
      in_service = ServiceCompletion{now, now + service_time, p->handle, p->cls, a_backlog};
    }
  };

  while (true) {
    const double t_arr = next < arrivals.size() ? arrivals[next].t : kNever;
    const double t_done = in_service ? in_service->finished : kNever;
    const double now = std::min(t_arr, t_done);
    if (now == kNever || now > horizon) break;

    if (t_arr <= t_done) {
      const ScriptedArrival& a = arrivals[next++];
      ++trace.offered[class_index(a.cls)];
      const EnqueueOutcome out = sched.enqueue(a.handle, a.cls, a.t);
      if (!out.accepted) {
        trace.drops.push_back(out.drop);
        ++trace.dropped[class_index(a.cls)];
      }
      if (!in_service) start_service(now);
    } else {
      trace.completions.push_back(*in_service);
      in_service.reset();
      start_service(now);
    }
  }
  trace.residual = sched.total() + (in_service ? 1 : 0);
  return trace;
}

}  // namespace leosim
