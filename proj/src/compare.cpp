#include "leosim/compare.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace leosim {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("summary.csv: malformed number '" + s + "'");
  }
}

std::optional<double> diff(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.3f", *v);
  return buf;
}

}  // namespace

const ClassSummary* ReportSummary::find(Scope s, TrafficClass c) const {
  for (const ClassSummary& r : rows) {
    if (r.scope == s && r.cls == c) return &r;
  }
  return nullptr;
}

ReportSummary ReportSummary::from_report(const SimulationReport& report) {
  ReportSummary out;
  const StatsCollector& st = report.stats;
  out.horizon = st.horizon();
  for (Scope s : {Scope::All, Scope::Flow}) {
    for (TrafficClass c : kAllClasses) {
      const ClassStats& cs = st.get(s, c);
      ClassSummary r;
      r.scope = s;
      r.cls = c;
      r.generated = cs.generated;
      r.delivered = cs.delivered;
      r.dropped = cs.dropped;
      r.throughput_ratio = st.throughput_ratio(s, c);
      if (auto m = st.mean_delay(s, c)) r.mean_delay_ms = *m * 1e3;
      if (auto q = st.delay_cdf(s, c).quantile(0.9)) r.p90_delay_ms = *q * 1e3;
      r.mean_hops = st.mean_hops(s, c);
      out.rows.push_back(r);
    }
  }
  return out;
}

ReportSummary ReportSummary::load(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "summary.csv";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  ReportSummary out;
  std::string line;
  std::getline(in, line);  // header
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw ConfigError("summary.csv: expected 10 columns in '" + line + "'");
    ClassSummary r;
    if (f[0] == "all") {
      r.scope = Scope::All;
    } else if (f[0] == "flow") {
      r.scope = Scope::Flow;
    } else {
      throw ConfigError("summary.csv: unknown scope '" + f[0] + "'");
    }
    r.cls = parse_class(f[1]);
    r.generated = static_cast<std::uint64_t>(field(f[2]).value_or(0.0));
    r.delivered = static_cast<std::uint64_t>(field(f[3]).value_or(0.0));
    r.dropped = static_cast<std::uint64_t>(field(f[4]).value_or(0.0));
    r.throughput_ratio = field(f[5]);
    r.mean_delay_ms = field(f[6]);
    r.p90_delay_ms = field(f[7]);
    r.mean_hops = field(f[8]);
    const double horizon = field(f[9]).value_or(0.0);
    if (first) {
      out.horizon = horizon;
      first = false;
    }
    out.rows.push_back(r);
  }
  return out;
}

std::vector<ClassDelta> compare(const ReportSummary& a, const ReportSummary& b) {
  if (std::abs(a.horizon - b.horizon) > 1e-9) {
    throw ConfigError("compare: reports have different horizons");
  }
  if (a.rows.size() != b.rows.size()) {
    throw ConfigError("compare: reports have different class sets");
  }
  std::vector<ClassDelta> out;
  for (const ClassSummary& ra : a.rows) {
    const ClassSummary* rb = b.find(ra.scope, ra.cls);
    if (rb == nullptr) throw ConfigError("compare: reports have different class sets");
    out.push_back({ra.scope, ra.cls, diff(ra.p90_delay_ms, rb->p90_delay_ms),
                   diff(ra.mean_delay_ms, rb->mean_delay_ms),
                   diff(ra.throughput_ratio, rb->throughput_ratio),
                   diff(ra.mean_hops, rb->mean_hops)});
  }
  return out;
}

std::string format_comparison(const std::vector<ClassDelta>& deltas) {
  std::ostringstream os;
  os << "scope,class,d_p90_delay_ms,d_mean_delay_ms,d_throughput_ratio,d_mean_hops\n";
  for (const ClassDelta& d : deltas) {
    os << scope_name(d.scope) << ',' << class_name(d.cls) << ',' << cell(d.p90_delay_ms) << ','
       << cell(d.mean_delay_ms) << ',' << cell(d.throughput_ratio) << ',' << cell(d.mean_hops)
       << '\n';
  }
  return os.str();
}

}  // namespace leosim
