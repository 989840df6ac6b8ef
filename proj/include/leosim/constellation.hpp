#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leosim/types.hpp"

namespace leosim {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMuEarthKm3S2 = 398600.44;
inline constexpr double kSpeedOfLightKmS = 299792.458;
/// Sidereal rotation, 360 deg per 86164 s.
inline constexpr double kEarthRotationRadS = 2.0 * 3.14159265358979323846 / 86164.0;

struct ConstellationParams {
  int planes = 6;
  int sats_per_plane = 11;
  double altitude_km = 780.0;
  double inclination_deg = 86.4;
  double lat_threshold_deg = 60.0;
  double min_elevation_deg = 8.2;
  double raan_spread_deg = 180.0;
  /// Phase shift between same-slot satellites of adjacent planes.
  double phase_offset_deg = 360.0 / 22.0;

  int total() const { return planes * sats_per_plane; }
  NodeIndex index(SatelliteId id) const { return id.plane * sats_per_plane + id.slot; }
  SatelliteId id(NodeIndex n) const { return {n / sats_per_plane, n % sats_per_plane}; }
  double orbit_radius_km() const { return kEarthRadiusKm + altitude_km; }

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ConstellationParams&) const = default;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
};

double distance_km(const Vec3& a, const Vec3& b);

struct GeoPosition {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_km = 0.0;
};

struct SatelliteState {
  Vec3 position_km;  ///< inertial (non-rotating) frame
  GeoPosition geo;   ///< latitude, inertial longitude, altitude
};

/// Kepler period of a circular orbit at the configured altitude.
double orbital_period_s(const ConstellationParams& params);

SatelliteState satellite_position(SatelliteId id, const ConstellationParams& params, double t);

/// Sub-satellite point in Earth-fixed longitude (Earth rotation applied).
GeoPosition subsatellite_point(SatelliteId id, const ConstellationParams& params, double t);

/// Inertial position of a point fixed to the rotating Earth.
Vec3 ground_position(const GeoPosition& where, double t);

/// Elevation of a satellite as seen from a ground point, degrees.
double elevation_deg(const Vec3& ground, const Vec3& satellite);

enum class LinkKind : std::uint8_t { Isl, Iol };

struct Link {
  NodeIndex neighbor = kNoNode;
  double delay_s = 0.0;
  LinkKind kind = LinkKind::Isl;
};

/// Static graph for one time slot. Adjacency lists are sorted by neighbor.
class TopologySnapshot {
 public:
  TopologySnapshot() = default;
  TopologySnapshot(std::int64_t slot_index, int node_count);

  void add_link(NodeIndex a, NodeIndex b, double delay_s, LinkKind kind);
  /// Sorts adjacency lists; called once after all links are added.
  void finalize();

  std::int64_t slot_index() const { return slot_index_; }
  int node_count() const { return static_cast<int>(adjacency_.size()); }
  std::span<const Link> links(NodeIndex n) const { return adjacency_[n]; }
  std::optional<double> delay(NodeIndex a, NodeIndex b) const;
  const Link* find(NodeIndex a, NodeIndex b) const;
  bool adjacent(NodeIndex a, NodeIndex b) const { return find(a, b) != nullptr; }
  std::size_t edge_count() const;
  bool connected() const;

 private:
  std::int64_t slot_index_ = 0;
  std::vector<std::vector<Link>> adjacency_;
};

TopologySnapshot build_topology_snapshot(const ConstellationParams& params, double t,
                                         std::int64_t slot_index = 0);

struct AccessResult {
  SatelliteId satellite;
  double elevation_deg = 0.0;
  double slant_range_km = 0.0;
};

/// Highest-elevation satellite at or above min_elevation, ties to the lowest (plane, slot).
std::optional<AccessResult> access_satellite(const GeoPosition& user,
                                             const ConstellationParams& params, double t);

std::int64_t time_slot_index(double t, double slot_length);

}  // namespace leosim
