#include "cbpre/bench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace cbpre::bench {

std::array<double, 5> phases(const sim::LatencyRecord& l) {
  return {l.t_request_mined - l.t_request, l.t_rekey_mined - l.t_request_mined, l.t_addr_submitted - l.t_rekey_mined,
          l.t_data_ready - l.t_addr_submitted, l.t_decrypted - l.t_data_ready};
}

MetricsRow to_row(const std::string& scenario, std::uint32_t n_requests, const std::string& request_id,
                  const sim::LatencyRecord& l) {
  return MetricsRow{scenario, n_requests, request_id, l.latency(), phases(l)};
}

MetricsRow mean_row(const std::string& scenario, std::uint32_t n_requests,
                    const std::vector<sim::LatencyRecord>& records) {
  MetricsRow row{scenario, n_requests, "", 0, std::array<double, 5>{}};
  if (records.empty()) return row;
  for (const auto& l : records) {
    row.latency_s += l.latency();
    auto p = phases(l);
    for (std::size_t i = 0; i < 5; ++i) (*row.phases)[i] += p[i];
  }
  auto n = static_cast<double>(records.size());
  row.latency_s /= n;
  for (auto& p : *row.phases) p /= n;
  return row;
}

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double mean_latency(const std::vector<sim::LatencyRecord>& records) {
  double sum = 0;
  for (const auto& l : records) sum += l.latency();
  return records.empty() ? 0 : sum / static_cast<double>(records.size());
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.n_requests << ',' << r.request_id << ',' << fixed(r.latency_s);
    for (std::size_t i = 0; i < 5; ++i) out << ',' << (r.phases ? fixed((*r.phases)[i]) : "");
    out << '\n';
  }
}

ImpactResult bench_impact(unsigned repetitions, sim::ScenarioConfig base) {
  ImpactResult out;
  base.n_requesters = 1;
  const auto seed0 = base.seed;
  for (unsigned rep = 0; rep < repetitions; ++rep) {
    for (bool pre : {true, false}) {
      auto cfg = base;
      cfg.seed = seed0 + rep;
      cfg.pre_enabled = pre;
      auto res = sim::run_scenario(cfg);
      auto& dst = pre ? out.pre : out.baseline;
      for (const auto& l : res.latencies) {
        dst.push_back(l);
        out.rows.push_back(to_row(pre ? "pre" : "baseline", 1, std::to_string(rep) + "." + std::to_string(l.request_id), l));
      }
    }
  }
  out.pre_mean = mean_latency(out.pre);
  out.baseline_mean = mean_latency(out.baseline);
  out.overhead_ratio = out.baseline_mean > 0 ? out.pre_mean / out.baseline_mean - 1 : 0;
  out.rows.push_back(mean_row("pre_mean", 1, out.pre));
  out.rows.push_back(mean_row("baseline_mean", 1, out.baseline));
  out.rows.push_back(MetricsRow{"overhead_ratio", 1, "", out.overhead_ratio, std::nullopt});
  return out;
}

std::vector<std::uint32_t> scale_sweep() {
  std::vector<std::uint32_t> ns{1};
  for (std::uint32_t n = 5; n <= 50; n += 5) ns.push_back(n);
  return ns;
}

ScaleResult bench_scale(unsigned repetitions, const std::vector<std::uint32_t>& ns, sim::ScenarioConfig base) {
  ScaleResult out;
  const auto seed0 = base.seed;
  base.n_sensors = 1;
  for (auto n : ns) {
    ScalePoint pt;
    pt.n = n;
    std::vector<sim::LatencyRecord> all;
    for (unsigned rep = 0; rep < repetitions; ++rep) {
      auto cfg = base;
      cfg.seed = seed0 + rep;
      cfg.n_requesters = n;
      auto res = sim::run_scenario(cfg);
      double last = 0;
      for (const auto& l : res.latencies) {
        last = std::max(last, l.t_decrypted);
        all.push_back(l);
        out.rows.push_back(to_row("scale", n, std::to_string(rep) + "." + std::to_string(l.request_id), l));
      }
      pt.rep_means.push_back(mean_latency(res.latencies));
      pt.last_decrypted.push_back(last);
      // 3n causally required transactions need this many blocks after the
      // first request could have been submitted.
      double bound = NAN;
      if (cfg.block_capacity > 0) {
        auto needed = (3 * static_cast<std::size_t>(n) + cfg.block_capacity - 1) / cfg.block_capacity;
        std::size_t seen = 0;
        for (double t : res.block_times) {
          if (t >= res.t_requests_start && ++seen == needed) {
            bound = t;
            break;
          }
        }
      }
      pt.inclusion_bound.push_back(bound);
    }
    pt.mean_latency = mean_latency(all);
    out.rows.push_back(mean_row("scale_mean", n, all));
    out.points.push_back(std::move(pt));
  }
  return out;
}

std::size_t count_inversions(const std::vector<ScalePoint>& points) {
  std::size_t inv = 0;
  for (std::size_t i = 1; i < points.size(); ++i) inv += points[i].mean_latency < points[i - 1].mean_latency;
  return inv;
}

}  // namespace cbpre::bench
