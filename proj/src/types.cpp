#include "leosim/types.hpp"

namespace leosim {

std::string satellite_label(SatelliteId id) {
  if (id.plane < 0 || id.slot < 0) return "none";
  return "S-" + std::to_string(id.plane + 1) + "-" + std::to_string(id.slot + 1);
}

std::string_view class_name(TrafficClass c) {
  switch (c) {
    case TrafficClass::A: return "A";
    case TrafficClass::B2: return "B2";
    case TrafficClass::B1: return "B1";
    case TrafficClass::B0: return "B0";
  }
  return "?";
}

TrafficClass parse_class(std::string_view name) {
  for (TrafficClass c : kAllClasses) {
    if (class_name(c) == name) return c;
  }
  throw ConfigError("unknown traffic class '" + std::string(name) + "'");
}

std::string_view drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::BufferOverflow: return "buffer_overflow";
    case DropReason::RouteWaitOverflow: return "route_wait_overflow";
    case DropReason::HopLimit: return "hop_limit";
    case DropReason::AccessBlocked: return "access_blocked";
  }
  return "?";
}

}  // namespace leosim
