#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cbpre/sim/scenario.hpp"

namespace cbpre::bench {

inline constexpr const char* kCsvHeader =
    "scenario,n_requests,request_id,latency_s,t_request_mine,t_rekey_mine,t_reencrypt,t_addr_mine,t_fetch_decrypt";

/// One CSV line. Summary rows leave request_id empty; the overhead row also
/// leaves the phase columns empty.
struct MetricsRow {
  std::string scenario;
  std::uint32_t n_requests = 0;
  std::string request_id;
  double latency_s = 0;
  std::optional<std::array<double, 5>> phases;
};

/// Phase breakdown; the five values sum to latency().
std::array<double, 5> phases(const sim::LatencyRecord& l);
MetricsRow to_row(const std::string& scenario, std::uint32_t n_requests, const std::string& request_id,
                  const sim::LatencyRecord& l);
/// Mean latency and mean phases over `records`.
MetricsRow mean_row(const std::string& scenario, std::uint32_t n_requests, const std::vector<sim::LatencyRecord>& records);

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

struct ImpactResult {
  std::vector<sim::LatencyRecord> pre;
  std::vector<sim::LatencyRecord> baseline;
  double pre_mean = 0;
  double baseline_mean = 0;
  double overhead_ratio = 0;  // pre_mean / baseline_mean - 1
  std::vector<MetricsRow> rows;
};

/// One request per repetition, with and without re-encryption. Repetition i
/// uses seed base.seed + i for both variants.
ImpactResult bench_impact(unsigned repetitions, sim::ScenarioConfig base = {});

struct ScalePoint {
  std::uint32_t n = 0;
  double mean_latency = 0;
  std::vector<double> rep_means;
  // Per repetition: time the last request decrypted, and the timestamp of the
  // ceil(3n / capacity)-th block at or after the requests started, which
  // bounds it from below.
  std::vector<double> last_decrypted;
  std::vector<double> inclusion_bound;
};

struct ScaleResult {
  std::vector<ScalePoint> points;
  std::vector<MetricsRow> rows;
};

/// 1, 5, 10, ..., 50.
std::vector<std::uint32_t> scale_sweep();

/// n concurrent requesters against one sensor. Repetition i uses seed
/// base.seed + i for every n.
ScaleResult bench_scale(unsigned repetitions = 10, const std::vector<std::uint32_t>& ns = scale_sweep(),
                        sim::ScenarioConfig base = {});

/// Adjacent pairs where the mean latency drops as load grows.
std::size_t count_inversions(const std::vector<ScalePoint>& points);

}  // namespace cbpre::bench
