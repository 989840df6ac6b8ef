#pragma once

#include <cstdint>
#include <deque>
#include <optional>

namespace leosim {

enum class CongestionLabel : std::uint8_t { Idle, Transition, Busy };

const char* congestion_label_name(CongestionLabel l);

struct CongestionConfig {
  double alpha = 250.0;  ///< idle threshold, packets/s
  double beta = 450.0;   ///< busy threshold, packets/s
  double window = 1.0;   ///< sliding estimation window, s
  /// Count uplink arrivals from users toward lambda, not only ISL/IOL transit.
  bool count_uplink = true;

  void validate() const;
  bool operator==(const CongestionConfig&) const = default;
};

/// Idle below alpha, Busy above beta, Transition on [alpha, beta].
CongestionLabel classify(double lambda, const CongestionConfig& cfg);

/// Returns the label to broadcast, if any. Only Idle/Busy are ever signalled;
/// Transition keeps whatever was last broadcast.
std::optional<CongestionLabel> maybe_notify(CongestionLabel last_notified, CongestionLabel now);

/// Per-satellite arrival-rate tracker with busy/idle hysteresis.
class NodeCongestionState {
 public:
  double lambda() const { return lambda_; }
  CongestionLabel label() const { return label_; }
  CongestionLabel last_notified() const { return last_notified_; }
  bool busy() const { return last_notified_ == CongestionLabel::Busy; }

  /// Counts one arrival at t (t non-decreasing) and re-estimates lambda.
  void record_arrival(double t, const CongestionConfig& cfg);
  /// Expires arrivals older than the window without counting a new one.
  void advance(double t, const CongestionConfig& cfg);

  /// Re-labels from the current lambda and returns a notification when the
  /// broadcast state flips; last_notified is updated accordingly.
  std::optional<CongestionLabel> observe(const CongestionConfig& cfg);

 private:
  std::deque<double> arrivals_;
  double lambda_ = 0.0;
  CongestionLabel label_ = CongestionLabel::Idle;
  CongestionLabel last_notified_ = CongestionLabel::Idle;
};

}  // namespace leosim
