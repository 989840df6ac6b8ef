#include "leosim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace leosim {

const char* scope_name(Scope s) { return s == Scope::All ? "all" : "flow"; }

DelayCdf::DelayCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

std::optional<double> DelayCdf::quantile(double q) const {
  if (sorted_.empty() || !(q > 0.0) || q > 1.0) return std::nullopt;
  const double n = static_cast<double>(sorted_.size());
  // Smallest k with k/n >= q; the epsilon absorbs q*n landing a hair above an integer.
  auto k = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted_.size());
  return sorted_[k - 1];
}

double DelayCdf::cdf(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

StatsCollector::StatsCollector(double bucket_s, double horizon_s, int satellites)
    : bucket_(bucket_s), horizon_(horizon_s), satellites_(satellites) {
  buckets_ = std::max(1, static_cast<int>(std::ceil(horizon_s / bucket_s - 1e-12)));
  for (auto& per_scope : stats_) {
    for (ClassStats& cs : per_scope) cs.buckets.assign(static_cast<std::size_t>(buckets_), {});
  }
  sat_drops_.assign(static_cast<std::size_t>(buckets_) * satellites_ * kClassCount, 0);
  busy_.assign(static_cast<std::size_t>(buckets_), 0);
}

int StatsCollector::bucket_of(double t) const {
  const int b = static_cast<int>(std::floor(t / bucket_));
  return std::clamp(b, 0, buckets_ - 1);
}

void StatsCollector::record_generated(TrafficClass cls, bool flow, double t) {
  const int b = bucket_of(t);
  for (Scope s : {Scope::All, Scope::Flow}) {
    if (s == Scope::Flow && !flow) continue;
    ClassStats& cs = at(s, cls);
    ++cs.generated;
    ++cs.buckets[b].generated;
  }
}

void StatsCollector::record_delivery(const Packet& pkt, double t) {
  const int b = bucket_of(t);
  const double delay = t - pkt.created_at;
  for (Scope s : {Scope::All, Scope::Flow}) {
    if (s == Scope::Flow && pkt.flow < 0) continue;
    ClassStats& cs = at(s, pkt.tos);
    ++cs.delivered;
    cs.hop_sum += static_cast<std::uint64_t>(pkt.hop);
    cs.delays.push_back(delay);
    BucketStats& bs = cs.buckets[b];
    ++bs.delivered;
    bs.hop_sum += static_cast<std::uint64_t>(pkt.hop);
    bs.hop_max = std::max(bs.hop_max, pkt.hop);
    bs.delay_sum += delay;
    bs.delay_max = std::max(bs.delay_max, delay);
    if (pkt.detoured) ++bs.detoured;
  }
}

void StatsCollector::record_drop(const DropRecord& drop, NodeIndex satellite, bool flow) {
  const int b = bucket_of(drop.time);
  for (Scope s : {Scope::All, Scope::Flow}) {
    if (s == Scope::Flow && !flow) continue;
    ClassStats& cs = at(s, drop.cls);
    ++cs.dropped;
    ++cs.buckets[b].dropped;
  }
  if (satellite != kNoNode) {
    ++sat_drops_[(static_cast<std::size_t>(b) * satellites_ + satellite) * kClassCount +
                 class_index(drop.cls)];
  }
}

void StatsCollector::record_busy_count(double t, int busy) {
  int& slot = busy_[bucket_of(t)];
  slot = std::max(slot, busy);
}

std::uint64_t StatsCollector::sat_drops(int bucket, NodeIndex sat, TrafficClass c) const {
  return sat_drops_[(static_cast<std::size_t>(bucket) * satellites_ + sat) * kClassCount +
                    class_index(c)];
}

DelayCdf StatsCollector::delay_cdf(Scope s, TrafficClass c) const {
  return DelayCdf(get(s, c).delays);
}

std::optional<double> StatsCollector::throughput_ratio(Scope s, TrafficClass c, double t0,
                                                       double t1) const {
  const ClassStats& cs = get(s, c);
  std::uint64_t gen = 0, del = 0;
  for (int b = 0; b < buckets_; ++b) {
    const double start = b * bucket_;
    if (start + bucket_ <= t0 || start >= t1) continue;
    gen += cs.buckets[b].generated;
    del += cs.buckets[b].delivered;
  }
  if (gen == 0) return std::nullopt;
  return static_cast<double>(del) / static_cast<double>(gen);
}

std::optional<double> StatsCollector::throughput_ratio(Scope s, TrafficClass c) const {
  const ClassStats& cs = get(s, c);
  if (cs.generated == 0) return std::nullopt;
  return static_cast<double>(cs.delivered) / static_cast<double>(cs.generated);
}

std::optional<double> StatsCollector::mean_delay(Scope s, TrafficClass c) const {
  const ClassStats& cs = get(s, c);
  if (cs.delays.empty()) return std::nullopt;
  double sum = 0.0;
  for (double d : cs.delays) sum += d;
  return sum / static_cast<double>(cs.delays.size());
}

std::optional<double> StatsCollector::mean_hops(Scope s, TrafficClass c) const {
  const ClassStats& cs = get(s, c);
  if (cs.delivered == 0) return std::nullopt;
  return static_cast<double>(cs.hop_sum) / static_cast<double>(cs.delivered);
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string opt(const std::optional<double>& v, double scale = 1.0) {
  return v ? num(*v * scale) : std::string();
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const char* header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }
  ~CsvFile() noexcept(false) {
    out_.flush();
    if (!out_ && std::uncaught_exceptions() == 0) {
      throw IoError("write failed for '" + path_.string() + "'");
    }
  }
  std::ofstream& out() { return out_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// At most 1000 evenly spaced quantile points per CDF file.
void write_cdf(const std::filesystem::path& path, const DelayCdf& cdf) {
  CsvFile f(path, "delay_ms,cdf");
  if (cdf.empty()) return;
  const std::size_t n = cdf.size();
  const std::size_t points = std::min<std::size_t>(n, 1000);
  for (std::size_t k = 1; k <= points; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(points);
    f.out() << num(*cdf.quantile(q) * 1e3) << ',' << num(q) << '\n';
  }
}

}  // namespace

void export_report(const SimulationReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

  const StatsCollector& st = report.stats;
  const ConstellationParams& cp = report.constellation;

  {
    CsvFile f(dir / "drops_per_sat.csv", "bucket,start_s,satellite,A,B2,B1,B0,total");
    for (int b = 0; b < st.bucket_count(); ++b) {
      for (NodeIndex s = 0; s < st.satellites(); ++s) {
        std::uint64_t total = 0;
        for (TrafficClass c : kAllClasses) total += st.sat_drops(b, s, c);
        if (total == 0) continue;
        f.out() << b << ',' << num(b * st.bucket_length()) << ',' << satellite_label(cp.id(s));
        for (TrafficClass c : kAllClasses) f.out() << ',' << st.sat_drops(b, s, c);
        f.out() << ',' << total << '\n';
      }
    }
  }
  {
    CsvFile f(dir / "drop_log.csv", "time_s,satellite,class,reason");
    for (const DropRecord& d : report.drop_log) {
      f.out() << num(d.time) << ',' << satellite_label(d.satellite) << ',' << class_name(d.cls)
              << ',' << drop_reason_name(d.reason) << '\n';
    }
  }
  {
    CsvFile f(dir / "delay_series.csv",
              "bucket,start_s,scope,class,deliveries,mean_delay_ms,max_delay_ms");
    for (int b = 0; b < st.bucket_count(); ++b) {
      for (Scope s : {Scope::All, Scope::Flow}) {
        for (TrafficClass c : kAllClasses) {
          const BucketStats& bs = st.get(s, c).buckets[b];
          f.out() << b << ',' << num(b * st.bucket_length()) << ',' << scope_name(s) << ','
                  << class_name(c) << ',' << bs.delivered << ',';
          if (bs.delivered > 0) {
            f.out() << num(bs.delay_sum / static_cast<double>(bs.delivered) * 1e3) << ','
                    << num(bs.delay_max * 1e3);
          } else {
            f.out() << ',';
          }
          f.out() << '\n';
        }
      }
    }
  }
  for (TrafficClass c : kAllClasses) {
    const std::string name(class_name(c));
    write_cdf(dir / ("delay_cdf_" + name + ".csv"), st.delay_cdf(Scope::Flow, c));
    write_cdf(dir / ("delay_cdf_all_" + name + ".csv"), st.delay_cdf(Scope::All, c));
  }
  {
    CsvFile f(dir / "throughput.csv",
              "bucket,start_s,scope,class,generated,delivered,throughput_pps,ratio");
    for (int b = 0; b < st.bucket_count(); ++b) {
      for (Scope s : {Scope::All, Scope::Flow}) {
        for (TrafficClass c : kAllClasses) {
          const BucketStats& bs = st.get(s, c).buckets[b];
          f.out() << b << ',' << num(b * st.bucket_length()) << ',' << scope_name(s) << ','
                  << class_name(c) << ',' << bs.generated << ',' << bs.delivered << ','
                  << num(static_cast<double>(bs.delivered) / st.bucket_length()) << ',';
          if (bs.generated > 0) {
            f.out() << num(static_cast<double>(bs.delivered) / static_cast<double>(bs.generated));
          }
          f.out() << '\n';
        }
      }
    }
  }
  {
    CsvFile f(dir / "hops.csv",
              "bucket,start_s,scope,class,deliveries,mean_hop,max_hop,detoured,busy_satellites");
    for (int b = 0; b < st.bucket_count(); ++b) {
      for (Scope s : {Scope::All, Scope::Flow}) {
        for (TrafficClass c : kAllClasses) {
          const BucketStats& bs = st.get(s, c).buckets[b];
          f.out() << b << ',' << num(b * st.bucket_length()) << ',' << scope_name(s) << ','
                  << class_name(c) << ',' << bs.delivered << ',';
          if (bs.delivered > 0) {
            f.out() << num(static_cast<double>(bs.hop_sum) / static_cast<double>(bs.delivered));
          }
          f.out() << ',' << bs.hop_max << ',' << bs.detoured << ',' << st.busy_count(b) << '\n';
        }
      }
    }
  }
  {
    CsvFile f(dir / "summary.csv",
              "scope,class,generated,delivered,dropped,throughput_ratio,mean_delay_ms,"
              "p90_delay_ms,mean_hops,horizon_s");
    for (Scope s : {Scope::All, Scope::Flow}) {
      for (TrafficClass c : kAllClasses) {
        const ClassStats& cs = st.get(s, c);
        f.out() << scope_name(s) << ',' << class_name(c) << ',' << cs.generated << ','
                << cs.delivered << ',' << cs.dropped << ',' << opt(st.throughput_ratio(s, c))
                << ',' << opt(st.mean_delay(s, c), 1e3) << ','
                << opt(st.delay_cdf(s, c).quantile(0.9), 1e3) << ',' << opt(st.mean_hops(s, c))
                << ',' << num(st.horizon()) << '\n';
      }
    }
  }
  {
    CsvFile f(dir / "state_changes.csv", "time_s,satellite,new_label,lambda");
    for (const StateChange& sc : report.state_changes) {
      f.out() << num(sc.time) << ',' << satellite_label(sc.satellite) << ','
              << congestion_label_name(sc.label) << ',' << num(sc.lambda) << '\n';
    }
  }
  if (!report.route_tables_csv.empty()) {
    CsvFile f(dir / "route_tables.csv", "slot,src,dst,next_hop,cost_seconds");
    f.out() << report.route_tables_csv;
  }
  if (!report.trace.empty()) {
    CsvFile f(dir / "packet_trace.csv", "time,event,pkt_id,class,satellite,hop,flow");
    for (const TraceRecord& r : report.trace) {
      f.out() << num(r.time) << ',' << r.event << ',' << r.packet << ',' << class_name(r.cls)
              << ',' << (r.satellite == kNoNode ? std::string() : satellite_label(cp.id(r.satellite)))
              << ',' << r.hop << ',' << r.flow << '\n';
    }
  }
}

}  // namespace leosim
