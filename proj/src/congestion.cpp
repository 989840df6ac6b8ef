#include "leosim/congestion.hpp"

#include <cmath>

#include "leosim/types.hpp"

namespace leosim {

const char* congestion_label_name(CongestionLabel l) {
  switch (l) {
    case CongestionLabel::Idle: return "idle";
    case CongestionLabel::Transition: return "transition";
    case CongestionLabel::Busy: return "busy";
  }
  return "?";
}

void CongestionConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("congestion.alpha: must satisfy alpha > 0");
  }
  if (!(beta > alpha) || !std::isfinite(beta)) {
    throw ConfigError("congestion.beta: must satisfy alpha < beta");
  }
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw ConfigError("congestion.window: must satisfy window > 0");
  }
}

CongestionLabel classify(double lambda, const CongestionConfig& cfg) {
  if (lambda > cfg.beta) return CongestionLabel::Busy;
  if (lambda < cfg.alpha) return CongestionLabel::Idle;
  return CongestionLabel::Transition;
}

std::optional<CongestionLabel> maybe_notify(CongestionLabel last_notified, CongestionLabel now) {
  if (now == CongestionLabel::Transition || now == last_notified) return std::nullopt;
  return now;
}

void NodeCongestionState::advance(double t, const CongestionConfig& cfg) {
  // Window is (t - window, t].
  const double horizon = t - cfg.window;
  while (!arrivals_.empty() && arrivals_.front() <= horizon) arrivals_.pop_front();
  lambda_ = static_cast<double>(arrivals_.size()) / cfg.window;
}

void NodeCongestionState::record_arrival(double t, const CongestionConfig& cfg) {
  arrivals_.push_back(t);
  advance(t, cfg);
}

std::optional<CongestionLabel> NodeCongestionState::observe(const CongestionConfig& cfg) {
  label_ = classify(lambda_, cfg);
  auto note = maybe_notify(last_notified_, label_);
  if (note) last_notified_ = *note;
  return note;
}

}  // namespace leosim
