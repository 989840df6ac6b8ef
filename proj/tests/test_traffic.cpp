#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "leosim/traffic.hpp"

using namespace leosim;

namespace {

constexpr double kTable[6][6] = {
    {86.18, 6.74, 4.18, 1.76, 0.45, 0.70},     {25.10, 55.88, 13.52, 1.62, 2.84, 1.04},
    {24.04, 20.89, 47.74, 1.15, 1.75, 4.43},   {52.39, 13.02, 5.96, 25.12, 1.85, 1.66},
    {25.63, 43.34, 17.33, 3.53, 7.95, 2.22},   {26.48, 10.58, 29.22, 2.11, 1.49, 30.12}};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TrafficSpec background_only(double rate) {
  TrafficSpec spec;
  spec.background_rate = rate;
  return spec;
}

}  // namespace

TEST_CASE("bundled ratio table is the published matrix") {
  const ContinentRatioTable& t = ContinentRatioTable::bundled();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(t.percent[i][j] == kTable[i][j]);
  CHECK(t.percent[0][1] == 6.74);  // North America -> Europe
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("bundled data matches the shipped files") {
  const std::string dir = LEOSIM_SOURCE_DIR "/data/";
  CHECK(read_file(dir + "demand_grid.txt") == DemandGrid::bundled_text());
  CHECK(read_file(dir + "continent_ratios.txt") == ContinentRatioTable::bundled_text());
  CHECK(DemandGrid::load(dir + "demand_grid.txt") == DemandGrid::bundled());
  CHECK(ContinentRatioTable::load(dir + "continent_ratios.txt") == ContinentRatioTable::bundled());
}

TEST_CASE("bundled grid is normalized and every cell has a continent") {
  const DemandGrid& g = DemandGrid::bundled();
  double sum = 0.0;
  std::set<int> seen;
  for (int c = 0; c < DemandGrid::kCells; ++c) {
    CHECK(g.weight[c] >= 0.0);
    sum += g.weight[c];
    CHECK(g.continent[c] >= 0);
    CHECK(g.continent[c] < kContinentCount);
    seen.insert(g.continent[c]);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(seen.size() == kContinentCount);
}

TEST_CASE("grid cell geometry") {
  CHECK(DemandGrid::cell_of({89.0, -179.0, 0.0}) == 0);
  CHECK(DemandGrid::cell_of({-89.0, 179.0, 0.0}) == DemandGrid::kCells - 1);
  for (int c = 0; c < DemandGrid::kCells; ++c) CHECK(DemandGrid::cell_of(DemandGrid::cell_center(c)) == c);
}

TEST_CASE("malformed inputs are rejected") {
  DemandGrid g;
  CHECK_THROWS_AS(g.normalize(), ConfigError);
  g.weight[5] = -1.0;
  CHECK_THROWS_AS(g.normalize(), ConfigError);

  ContinentRatioTable t = ContinentRatioTable::bundled();
  t.percent[2][2] += 1.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);

  std::istringstream short_grid("[weights]\n1 2 3\n");
  CHECK_THROWS_AS(DemandGrid::parse(short_grid), ConfigError);
  CHECK_THROWS_AS(DemandGrid::load("/nonexistent/grid.txt"), IoError);

  ClassMix mix;
  mix.fraction = {0.5, 0.5, 0.5, 0.0};
  CHECK_THROWS_AS(mix.validate(), ConfigError);
}

TEST_CASE("destination continents follow the ratio rows") {
  const BackgroundSampler sampler(DemandGrid::bundled(), ContinentRatioTable::bundled());
  Rng rng(2024);
  constexpr int kDraws = 100000;
  for (int src = 0; src < kContinentCount; ++src) {
    std::array<int, kContinentCount> n{};
    for (int i = 0; i < kDraws; ++i) ++n[sampler.sample_destination_continent(src, rng)];
    double row = 0.0;
    for (double v : kTable[src]) row += v;
    for (int dst = 0; dst < kContinentCount; ++dst) {
      const double p = kTable[src][dst] / row;
      const double sigma = std::sqrt(kDraws * p * (1.0 - p));
      // 36 cells are checked at once; 4 sigma keeps the family-wise false
      // alarm rate near 0.2 %.
      CHECK(std::abs(n[dst] - kDraws * p) <= 4.0 * sigma);
    }
  }
}

TEST_CASE("cells drawn within a continent belong to it") {
  const BackgroundSampler sampler(DemandGrid::bundled(), ContinentRatioTable::bundled());
  Rng rng(4);
  for (int c = 0; c < kContinentCount; ++c)
    for (int i = 0; i < 200; ++i) {
      const int cell = sampler.sample_cell_in(c, rng);
      CHECK(DemandGrid::bundled().continent[cell] == c);
      CHECK(DemandGrid::bundled().weight[cell] > 0.0);
    }
}

TEST_CASE("class frequencies") {
  const auto arrivals = generate_arrivals(background_only(1000.0), 8, 100.0);
  REQUIRE(arrivals.size() > 95000);
  std::array<int, kClassCount> n{};
  for (const Arrival& a : arrivals) ++n[class_index(a.cls)];
  for (int c = 0; c < kClassCount; ++c) {
    CHECK(static_cast<double>(n[c]) / arrivals.size() == doctest::Approx(0.25).epsilon(0.02));
  }
}

TEST_CASE("foreground flow arrival count is Poisson") {
  TrafficSpec spec;
  spec.flows.push_back({{-56.0, 26.0, 0.0}, {65.2, -58.0, 0.0}, 100.0, {}});
  const auto arrivals = generate_arrivals(spec, 12, 1800.0);
  CHECK(std::abs(static_cast<double>(arrivals.size()) - 180000.0) <= 3.0 * std::sqrt(180000.0));
  for (const Arrival& a : arrivals) {
    CHECK(a.flow == 0);
    CHECK(a.src == 288);
    CHECK(a.dst == 289);
  }
}

TEST_CASE("arrival stream is ordered and reproducible") {
  TrafficSpec spec = background_only(300.0);
  spec.flows.push_back({{10.0, 10.0, 0.0}, {-10.0, -10.0, 0.0}, 50.0, {}});
  const auto a = generate_arrivals(spec, 77, 60.0);
  const auto b = generate_arrivals(spec, 77, 60.0);
  const auto c = generate_arrivals(spec, 78, 60.0);
  CHECK(a == b);
  CHECK(a != c);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].time <= a[i].time);
  for (const Arrival& x : a) CHECK(x.time < 60.0);
}

TEST_CASE("zero rates generate nothing") {
  CHECK(generate_arrivals(background_only(0.0), 1, 100.0).empty());
}

TEST_CASE("flow endpoints are always reachable over one orbit") {
  const ConstellationParams p;
  const double period = orbital_period_s(p);
  for (double t = 0.0; t < period; t += 5.0) {
    const Endpoints e = resolve_endpoints({-56.0, 26.0, 0.0}, {65.2, -58.0, 0.0}, p, t);
    CHECK(e.src);
    CHECK(e.dst);
  }
}
