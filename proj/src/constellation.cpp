#include "leosim/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace leosim {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void require(bool ok, const char* key, const char* constraint) {
  if (!ok) throw ConfigError(std::string("constellation.") + key + ": must satisfy " + constraint);
}

}  // namespace

void ConstellationParams::validate() const {
  require(planes >= 1, "planes", "planes >= 1");
  require(sats_per_plane >= 3, "sats_per_plane", "sats_per_plane >= 3");
  require(altitude_km > 0.0, "altitude_km", "altitude_km > 0");
  require(inclination_deg > 0.0 && inclination_deg <= 90.0, "inclination_deg",
          "0 < inclination_deg <= 90");
  require(lat_threshold_deg >= 0.0 && lat_threshold_deg <= 90.0, "lat_threshold_deg",
          "0 <= lat_threshold_deg <= 90");
  require(min_elevation_deg >= 0.0 && min_elevation_deg <= 90.0, "min_elevation_deg",
          "0 <= min_elevation_deg <= 90");
  require(raan_spread_deg > 0.0 && raan_spread_deg <= 360.0, "raan_spread_deg",
          "0 < raan_spread_deg <= 360");
  require(std::isfinite(phase_offset_deg), "phase_offset_deg", "a finite value");
}

double Vec3::norm() const { return std::sqrt(dot(*this)); }

double distance_km(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

double orbital_period_s(const ConstellationParams& params) {
  const double a = params.orbit_radius_km();
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kMuEarthKm3S2);
}

SatelliteState satellite_position(SatelliteId id, const ConstellationParams& params, double t) {
  const double r = params.orbit_radius_km();
  const double mean_motion = 2.0 * std::numbers::pi / orbital_period_s(params);
  const double raan = id.plane * (params.raan_spread_deg / params.planes) * kDeg;
  const double inc = params.inclination_deg * kDeg;
  const double u = 2.0 * std::numbers::pi * id.slot / params.sats_per_plane +
                   id.plane * params.phase_offset_deg * kDeg + mean_motion * t;

  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);

  SatelliteState s;
  s.position_km = {r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * su * si};
  s.geo.latitude_deg = std::asin(std::clamp(s.position_km.z / r, -1.0, 1.0)) / kDeg;
  s.geo.longitude_deg = std::atan2(s.position_km.y, s.position_km.x) / kDeg;
  s.geo.altitude_km = params.altitude_km;
  return s;
}

GeoPosition subsatellite_point(SatelliteId id, const ConstellationParams& params, double t) {
  GeoPosition g = satellite_position(id, params, t).geo;
  double lon = g.longitude_deg - kEarthRotationRadS * t / kDeg;
  lon = std::fmod(lon + 180.0, 360.0);
  if (lon < 0.0) lon += 360.0;
  g.longitude_deg = lon - 180.0;
  return g;
}

Vec3 ground_position(const GeoPosition& where, double t) {
  const double r = kEarthRadiusKm + where.altitude_km;
  const double lat = where.latitude_deg * kDeg;
  const double lon = where.longitude_deg * kDeg + kEarthRotationRadS * t;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

double elevation_deg(const Vec3& ground, const Vec3& satellite) {
  const Vec3 d = satellite - ground;
  const double range = d.norm();
  const double up = ground.norm();
  if (range == 0.0 || up == 0.0) return 90.0;
  const double s = std::clamp(d.dot(ground) / (range * up), -1.0, 1.0);
  return std::asin(s) / kDeg;
}

TopologySnapshot::TopologySnapshot(std::int64_t slot_index, int node_count)
    : slot_index_(slot_index), adjacency_(static_cast<std::size_t>(node_count)) {}

void TopologySnapshot::add_link(NodeIndex a, NodeIndex b, double delay_s, LinkKind kind) {
  adjacency_[a].push_back({b, delay_s, kind});
  adjacency_[b].push_back({a, delay_s, kind});
}

void TopologySnapshot::finalize() {
  for (auto& links : adjacency_) {
    std::sort(links.begin(), links.end(),
              [](const Link& x, const Link& y) { return x.neighbor < y.neighbor; });
  }
}

const Link* TopologySnapshot::find(NodeIndex a, NodeIndex b) const {
  for (const Link& l : adjacency_[a]) {
    if (l.neighbor == b) return &l;
  }
  return nullptr;
}

std::optional<double> TopologySnapshot::delay(NodeIndex a, NodeIndex b) const {
  if (const Link* l = find(a, b)) return l->delay_s;
  return std::nullopt;
}

std::size_t TopologySnapshot::edge_count() const {
  std::size_t n = 0;
  for (const auto& links : adjacency_) n += links.size();
  return n / 2;
}

bool TopologySnapshot::connected() const {
  if (adjacency_.empty()) return true;
  std::vector<char> seen(adjacency_.size(), 0);
  std::vector<NodeIndex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeIndex n = stack.back();
    stack.pop_back();
    for (const Link& l : adjacency_[n]) {
      if (!seen[l.neighbor]) {
        seen[l.neighbor] = 1;
        ++reached;
        stack.push_back(l.neighbor);
      }
    }
  }
  return reached == adjacency_.size();
}

TopologySnapshot build_topology_snapshot(const ConstellationParams& params, double t,
                                         std::int64_t slot_index) {
  const int total = params.total();
  std::vector<SatelliteState> states(static_cast<std::size_t>(total));
  for (NodeIndex n = 0; n < total; ++n) states[n] = satellite_position(params.id(n), params, t);

  TopologySnapshot snap(slot_index, total);
  const auto link_delay = [&](NodeIndex a, NodeIndex b) {
    return distance_km(states[a].position_km, states[b].position_km) / kSpeedOfLightKmS;
  };

  for (int p = 0; p < params.planes; ++p) {
    for (int s = 0; s < params.sats_per_plane; ++s) {
      const NodeIndex a = params.index({p, s});
      const NodeIndex b = params.index({p, (s + 1) % params.sats_per_plane});
      snap.add_link(a, b, link_delay(a, b), LinkKind::Isl);
    }
  }

  // Planes are adjacent in index order only; plane P-1 and plane 0 face each
  // other across the seam and never get IOLs.
  for (int p = 0; p + 1 < params.planes; ++p) {
    for (int s = 0; s < params.sats_per_plane; ++s) {
      const NodeIndex a = params.index({p, s});
      const NodeIndex b = params.index({p + 1, s});
      if (std::abs(states[a].geo.latitude_deg) > params.lat_threshold_deg ||
          std::abs(states[b].geo.latitude_deg) > params.lat_threshold_deg) {
        continue;
      }
      snap.add_link(a, b, link_delay(a, b), LinkKind::Iol);
    }
  }
  snap.finalize();
  return snap;
}

std::optional<AccessResult> access_satellite(const GeoPosition& user,
                                             const ConstellationParams& params, double t) {
  const Vec3 ground = ground_position(user, t);
  std::optional<AccessResult> best;
  for (NodeIndex n = 0; n < params.total(); ++n) {
    const SatelliteId id = params.id(n);
    const Vec3 sat = satellite_position(id, params, t).position_km;
    const double el = elevation_deg(ground, sat);
    if (el < params.min_elevation_deg) continue;
    if (!best || el > best->elevation_deg) {
      best = AccessResult{id, el, distance_km(ground, sat)};
    }
  }
  return best;
}

std::int64_t time_slot_index(double t, double slot_length) {
  return static_cast<std::int64_t>(std::floor(t / slot_length));
}

}  // namespace leosim
