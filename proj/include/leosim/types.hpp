#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace leosim {

/// Dense satellite index, plane * sats_per_plane + slot.
using NodeIndex = int;
inline constexpr NodeIndex kNoNode = -1;

struct SatelliteId {
  int plane = 0;
  int slot = 0;

  auto operator<=>(const SatelliteId&) const = default;
};

/// "S-<plane>-<slot>", 1-based, the labelling used in every CSV export.
std::string satellite_label(SatelliteId id);

/// Real-time A is served by strict priority; B2 > B1 > B0 share the rest by weight.
enum class TrafficClass : std::uint8_t { A = 0, B2 = 1, B1 = 2, B0 = 3 };
inline constexpr int kClassCount = 4;
inline constexpr std::array<TrafficClass, kClassCount> kAllClasses = {
    TrafficClass::A, TrafficClass::B2, TrafficClass::B1, TrafficClass::B0};

constexpr int class_index(TrafficClass c) { return static_cast<int>(c); }
constexpr bool is_real_time(TrafficClass c) { return c == TrafficClass::A; }
std::string_view class_name(TrafficClass c);
TrafficClass parse_class(std::string_view name);

/// HopLimit caps a packet at P x S inter-satellite transmissions; it only
/// fires when tables change under a packet faster than it can settle.
enum class DropReason : std::uint8_t { BufferOverflow, RouteWaitOverflow, AccessBlocked, HopLimit };
std::string_view drop_reason_name(DropReason r);

struct DropRecord {
  double time = 0.0;
  SatelliteId satellite;
  TrafficClass cls = TrafficClass::A;
  DropReason reason = DropReason::BufferOverflow;
};

/// A scenario value failed validation. The message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace leosim
