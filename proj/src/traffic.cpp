#include "leosim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace leosim {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double to_number(const std::string& tok, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": '" + tok + "' is not a number");
  }
  return v;
}

int draw_from_cdf(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                   static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

const char* continent_name(int continent) {
  static constexpr const char* kNames[kContinentCount] = {
      "North America", "Europe", "Asia", "South America", "Africa", "Oceania"};
  return (continent >= 0 && continent < kContinentCount) ? kNames[continent] : "?";
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DemandGrid DemandGrid::parse(std::istream& in) {
  DemandGrid g;
  std::vector<std::vector<std::string>> weights, continents;
  std::vector<std::vector<std::string>>* section = nullptr;
  for (std::string raw; std::getline(in, raw);) {
    const auto toks = tokens(strip_comment(raw));
    if (toks.empty()) continue;
    if (toks.size() == 1 && toks[0] == "[weights]") {
      section = &weights;
    } else if (toks.size() == 1 && toks[0] == "[continents]") {
      section = &continents;
    } else if (section == nullptr) {
      throw ConfigError("demand grid: data before a [weights] or [continents] header");
    } else {
      section->push_back(toks);
    }
  }
  const auto check_shape = [](const auto& rows, const char* name) {
    if (rows.size() != static_cast<std::size_t>(kRows)) {
      throw ConfigError(std::string("demand grid: [") + name + "] needs 12 rows, got " +
                        std::to_string(rows.size()));
    }
    for (const auto& r : rows) {
      if (r.size() != static_cast<std::size_t>(kCols)) {
        throw ConfigError(std::string("demand grid: [") + name + "] rows need 24 columns, got " +
                          std::to_string(r.size()));
      }
    }
  };
  check_shape(weights, "weights");
  check_shape(continents, "continents");
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      const int cell = r * kCols + c;
      g.weight[cell] = to_number(weights[r][c], "demand grid weight");
      const double label = to_number(continents[r][c], "demand grid continent");
      if (label != std::floor(label) || label < 1 || label > kContinentCount) {
        throw ConfigError("demand grid: continent labels must be integers 1..6");
      }
      g.continent[cell] = static_cast<int>(label) - 1;
    }
  }
  g.normalize();
  return g;
}

DemandGrid DemandGrid::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open demand grid file '" + path + "'");
  return parse(in);
}

const DemandGrid& DemandGrid::bundled() {
  static const DemandGrid grid = [] {
    std::istringstream in(bundled_text());
    return parse(in);
  }();
  return grid;
}

void DemandGrid::normalize() {
  double sum = 0.0;
  for (double w : weight) {
    if (w < 0.0) throw ConfigError("demand grid: weights must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw ConfigError("demand grid: at least one weight must be positive");
  for (double& w : weight) w /= sum;
}

GeoPosition DemandGrid::cell_center(int cell) {
  const int r = cell / kCols, c = cell % kCols;
  return {90.0 - 15.0 * r - 7.5, -180.0 + 15.0 * c + 7.5, 0.0};
}

int DemandGrid::cell_of(const GeoPosition& where) {
  const int r = std::clamp(static_cast<int>(std::floor((90.0 - where.latitude_deg) / 15.0)), 0,
                           kRows - 1);
  const int c = std::clamp(static_cast<int>(std::floor((where.longitude_deg + 180.0) / 15.0)), 0,
                           kCols - 1);
  return r * kCols + c;
}

ContinentRatioTable ContinentRatioTable::parse(std::istream& in) {
  ContinentRatioTable t;
  int row = 0;
  for (std::string raw; std::getline(in, raw);) {
    const auto toks = tokens(strip_comment(raw));
    if (toks.empty()) continue;
    if (row >= kContinentCount || toks.size() != static_cast<std::size_t>(kContinentCount)) {
      throw ConfigError("continent ratio table: expected 6 rows of 6 numbers");
    }
    for (int c = 0; c < kContinentCount; ++c) {
      t.percent[row][c] = to_number(toks[c], "continent ratio");
    }
    ++row;
  }
  if (row != kContinentCount) throw ConfigError("continent ratio table: expected 6 rows of 6 numbers");
  t.validate();
  return t;
}

ContinentRatioTable ContinentRatioTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open continent ratio file '" + path + "'");
  return parse(in);
}

const ContinentRatioTable& ContinentRatioTable::bundled() {
  static const ContinentRatioTable table = [] {
    std::istringstream in(bundled_text());
    return parse(in);
  }();
  return table;
}

void ContinentRatioTable::validate() const {
  for (int r = 0; r < kContinentCount; ++r) {
    double sum = 0.0;
    for (double v : percent[r]) {
      if (v < 0.0) throw ConfigError("continent ratio table: entries must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 100.0) > 0.5) {
      throw ConfigError("continent ratio table: row " + std::to_string(r + 1) +
                        " must sum to 100 +/- 0.5");
    }
  }
}

void ClassMix::validate() const {
  double sum = 0.0;
  for (double f : fraction) {
    if (f < 0.0 || !std::isfinite(f)) throw ConfigError("traffic.class_mix: fractions must be >= 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("traffic.class_mix: fractions must sum to 1");
}

TrafficClass ClassMix::draw(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < kClassCount; ++i) {
    acc += fraction[i];
    if (u < acc) return kAllClasses[i];
  }
  for (int i = kClassCount - 1; i >= 0; --i) {
    if (fraction[i] > 0.0) return kAllClasses[i];
  }
  return TrafficClass::A;
}

BackgroundSampler::BackgroundSampler(const DemandGrid& grid, const ContinentRatioTable& ratios)
    : grid_(grid) {
  source_cdf_.resize(DemandGrid::kCells);
  std::partial_sum(grid_.weight.begin(), grid_.weight.end(), source_cdf_.begin());
  for (int r = 0; r < kContinentCount; ++r) {
    double acc = 0.0;
    for (int c = 0; c < kContinentCount; ++c) {
      acc += ratios.percent[r][c];
      continent_cdf_[r][c] = acc;
    }
  }
  for (int cell = 0; cell < DemandGrid::kCells; ++cell) {
    cells_[grid_.continent[cell]].push_back(cell);
  }
  for (int k = 0; k < kContinentCount; ++k) {
    double total = 0.0;
    for (int cell : cells_[k]) total += grid_.weight[cell];
    double acc = 0.0;
    for (int cell : cells_[k]) {
      // A continent with no demand anywhere falls back to uniform cells.
      acc += total > 0.0 ? grid_.weight[cell] : 1.0;
      cell_cdf_[k].push_back(acc);
    }
  }
}

int BackgroundSampler::sample_source(Rng& rng) const {
  return draw_from_cdf(source_cdf_, rng.uniform());
}

int BackgroundSampler::sample_destination_continent(int src_continent, Rng& rng) const {
  const auto& row = continent_cdf_[src_continent];
  const double target = rng.uniform() * row.back();
  for (int c = 0; c < kContinentCount; ++c) {
    if (target < row[c]) return c;
  }
  return kContinentCount - 1;
}

int BackgroundSampler::sample_cell_in(int continent, Rng& rng) const {
  if (cells_[continent].empty()) return sample_source(rng);
  return cells_[continent][draw_from_cdf(cell_cdf_[continent], rng.uniform())];
}

TrafficGenerator::TrafficGenerator(const TrafficSpec& spec, std::uint64_t seed, double horizon)
    : spec_(spec), sampler_(spec.grid, spec.ratios), horizon_(horizon) {
  for (int cell = 0; cell < DemandGrid::kCells; ++cell) {
    terminals_.push_back(DemandGrid::cell_center(cell));
  }
  streams_.push_back({Rng(stream_seed(seed, 0)), spec_.background_rate, 0.0, -1});
  for (std::size_t i = 0; i < spec_.flows.size(); ++i) {
    terminals_.push_back(spec_.flows[i].src);
    terminals_.push_back(spec_.flows[i].dst);
    streams_.push_back(
        {Rng(stream_seed(seed, i + 1)), spec_.flows[i].rate, 0.0, static_cast<int>(i)});
  }
  for (Stream& s : streams_) advance(s);
}

void TrafficGenerator::advance(Stream& s) {
  if (!(s.rate > 0.0)) {
    s.next_time = std::numeric_limits<double>::infinity();
    return;
  }
  s.next_time += s.rng.exponential(s.rate);
}

std::optional<Arrival> TrafficGenerator::next() {
  Stream* best = nullptr;
  for (Stream& s : streams_) {
    if (best == nullptr || s.next_time < best->next_time) best = &s;
  }
  if (best == nullptr || best->next_time > horizon_) return std::nullopt;

  Arrival a;
  a.time = best->next_time;
  a.flow = best->flow;
  if (best->flow < 0) {
    const int src = sampler_.sample_source(best->rng);
    const int dcont = sampler_.sample_destination_continent(spec_.grid.continent[src], best->rng);
    a.src = static_cast<TerminalId>(src);
    a.dst = static_cast<TerminalId>(sampler_.sample_cell_in(dcont, best->rng));
    a.cls = spec_.background_mix.draw(best->rng);
  } else {
    const auto base = static_cast<TerminalId>(DemandGrid::kCells + 2 * best->flow);
    a.src = base;
    a.dst = base + 1;
    a.cls = spec_.flows[best->flow].mix.draw(best->rng);
  }
  advance(*best);
  return a;
}

std::vector<Arrival> generate_arrivals(const TrafficSpec& spec, std::uint64_t seed,
                                       double horizon) {
  TrafficGenerator gen(spec, seed, horizon);
  std::vector<Arrival> out;
  while (auto a = gen.next()) out.push_back(*a);
  return out;
}

Endpoints resolve_endpoints(const GeoPosition& src, const GeoPosition& dst,
                            const ConstellationParams& params, double t) {
  return {access_satellite(src, params, t), access_satellite(dst, params, t)};
}

}  // namespace leosim
