#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "leosim/constellation.hpp"
#include "leosim/types.hpp"

namespace leosim {

inline constexpr int kContinentCount = 6;

/// 1 North America, 2 Europe, 3 Asia, 4 South America, 5 Africa, 6 Oceania
/// (stored zero-based).
const char* continent_name(int continent);

/// Seeded 64-bit generator with portable uniform and exponential draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double exponential(double rate);
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed; identical inputs give identical seeds.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// 12 latitude bands x 24 longitude bands of 15 degrees. Row 0 is 90N..75N,
/// column 0 is 180W..165W.
struct DemandGrid {
  static constexpr int kRows = 12;
  static constexpr int kCols = 24;
  static constexpr int kCells = kRows * kCols;

  std::array<double, kCells> weight{};
  std::array<int, kCells> continent{};  ///< 0..5

  /// Text format: a [weights] block of 12 rows x 24 numbers and a
  /// [continents] block of 12 rows x 24 labels in 1..6. '#' starts a comment.
  static DemandGrid parse(std::istream& in);
  static DemandGrid load(const std::string& path);
  static const DemandGrid& bundled();
  static const char* bundled_text();

  /// Rejects negative or all-zero weights, then scales them to sum 1.
  void normalize();

  static GeoPosition cell_center(int cell);
  static int cell_of(const GeoPosition& where);

  bool operator==(const DemandGrid&) const = default;
};

/// Row-stochastic (in percent) continent-to-continent destination ratios.
struct ContinentRatioTable {
  std::array<std::array<double, kContinentCount>, kContinentCount> percent{};

  static ContinentRatioTable parse(std::istream& in);
  static ContinentRatioTable load(const std::string& path);
  static const ContinentRatioTable& bundled();
  static const char* bundled_text();

  /// Each row must sum to 100 +/- 0.5 with nonnegative entries.
  void validate() const;

  bool operator==(const ContinentRatioTable&) const = default;
};

/// Fractions for A, B2, B1, B0.
struct ClassMix {
  std::array<double, kClassCount> fraction = {0.25, 0.25, 0.25, 0.25};

  void validate() const;
  TrafficClass draw(Rng& rng) const;

  bool operator==(const ClassMix&) const = default;
};

struct FlowSpec {
  GeoPosition src;
  GeoPosition dst;
  double rate = 0.0;  ///< packets/s
  ClassMix mix;

  bool operator==(const FlowSpec& o) const {
    return src.latitude_deg == o.src.latitude_deg && src.longitude_deg == o.src.longitude_deg &&
           dst.latitude_deg == o.dst.latitude_deg && dst.longitude_deg == o.dst.longitude_deg &&
           rate == o.rate && mix == o.mix;
  }
};

using TerminalId = std::uint32_t;

/// One unit of traffic. tos/dst/next/hop/packet mirror the on-air header.
struct Packet {
  std::uint64_t id = 0;
  TrafficClass tos = TrafficClass::A;
  TerminalId src_user = 0;
  TerminalId dst_user = 0;
  NodeIndex dst = kNoNode;   ///< destination access satellite, re-resolved per hop
  NodeIndex next = kNoNode;  ///< next hop while in transit
  int hop = 0;               ///< satellite-to-satellite transmissions so far
  std::uint32_t size_bits = 1000;
  double created_at = 0.0;
  double delivered_at = -1.0;
  int flow = -1;  ///< foreground flow index, -1 for background
  bool detoured = false;  ///< took at least one backup-table hop
};

struct Arrival {
  double time = 0.0;
  TerminalId src = 0;
  TerminalId dst = 0;
  TrafficClass cls = TrafficClass::A;
  int flow = -1;

  bool operator==(const Arrival&) const = default;
};

/// Background source/destination sampler: source cell proportional to grid
/// weight, destination continent from the source continent's ratio row, then
/// a destination cell within that continent proportional to grid weight.
class BackgroundSampler {
 public:
  BackgroundSampler(const DemandGrid& grid, const ContinentRatioTable& ratios);

  int sample_source(Rng& rng) const;
  int sample_destination_continent(int src_continent, Rng& rng) const;
  int sample_cell_in(int continent, Rng& rng) const;

  const DemandGrid& grid() const { return grid_; }

 private:
  DemandGrid grid_;
  std::vector<double> source_cdf_;
  std::array<std::array<double, kContinentCount>, kContinentCount> continent_cdf_{};
  std::array<std::vector<int>, kContinentCount> cells_;
  std::array<std::vector<double>, kContinentCount> cell_cdf_;
};

struct TrafficSpec {
  std::vector<FlowSpec> flows;
  DemandGrid grid = DemandGrid::bundled();
  ContinentRatioTable ratios = ContinentRatioTable::bundled();
  double background_rate = 0.0;
  ClassMix background_mix;
};

/// Lazy, time-ordered merge of independent Poisson streams: one per
/// foreground flow plus one background stream. Terminals 0..287 are the grid
/// cell centers; each flow appends its source and destination terminal.
class TrafficGenerator {
 public:
  TrafficGenerator(const TrafficSpec& spec, std::uint64_t seed, double horizon);

  const std::vector<GeoPosition>& terminals() const { return terminals_; }
  std::optional<Arrival> next();

 private:
  struct Stream {
    Rng rng;
    double rate = 0.0;
    double next_time = 0.0;
    int flow = -1;
  };

  void advance(Stream& s);

  TrafficSpec spec_;
  BackgroundSampler sampler_;
  double horizon_;
  std::vector<GeoPosition> terminals_;
  std::vector<Stream> streams_;
};

std::vector<Arrival> generate_arrivals(const TrafficSpec& spec, std::uint64_t seed,
                                       double horizon);

struct Endpoints {
  std::optional<AccessResult> src;
  std::optional<AccessResult> dst;
};

Endpoints resolve_endpoints(const GeoPosition& src, const GeoPosition& dst,
                            const ConstellationParams& params, double t);

}  // namespace leosim
