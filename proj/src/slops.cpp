#include "nfty/slops.hpp"

#include <algorithm>
#include <cmath>

#include "nfty/errors.hpp"
#include "nfty/probe.hpp"
#include "nfty/simulator.hpp"

namespace nfty {

void SlopsParams::validate() const {
  if (!(rate_min_pps < initial_rate_pps && initial_rate_pps < rate_max_pps))
    throw ConfigError("slops rates must satisfy min < initial < max");
  if (stop_width_pps <= 0) throw ConfigError("slops.stop_width_pps must be positive");
  if (stream_len < 2) throw ConfigError("slops.stream_len must be at least 2");
  if (trend_groups < 2) throw ConfigError("slops.trend_groups must be at least 2");
}

namespace {

double median_of(std::vector<double> v) {
  std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    double lo = *std::max_element(v.begin(),
                                  v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lo + hi) / 2.0;
  }
  return hi;
}

}  // namespace

OwdTrend owd_trend(const std::vector<double>& owds, int groups,
                   double pct_threshold, double pdt_threshold) {
  if (groups < 2 || owds.size() < static_cast<std::size_t>(groups))
    throw ConfigError("owd_trend needs at least `groups` samples");
  std::size_t n = owds.size();
  std::size_t g = static_cast<std::size_t>(groups);
  std::vector<double> medians(g);
  for (std::size_t k = 0; k < g; ++k) {
    std::size_t lo = k * n / g;
    std::size_t hi = (k + 1) * n / g;
    medians[k] = median_of({owds.begin() + static_cast<std::ptrdiff_t>(lo),
                            owds.begin() + static_cast<std::ptrdiff_t>(hi)});
  }
  double ups = 0.0, total_var = 0.0;
  for (std::size_t k = 1; k < g; ++k) {
    if (medians[k] > medians[k - 1]) ups += 1.0;
    total_var += std::abs(medians[k] - medians[k - 1]);
  }
  double pct = ups / static_cast<double>(g - 1);
  if (pct > pct_threshold) return OwdTrend::kIncreasing;
  if (total_var > 0.0) {
    double pdt = (medians[g - 1] - medians[0]) / total_var;
    if (pdt > pdt_threshold) return OwdTrend::kIncreasing;
  }
  return OwdTrend::kNotIncreasing;
}

EstimateReport slops_search(const ScenarioConfig& scenario,
                            const SlopsParams& params, std::uint64_t seed) {
  params.validate();
  double lo = params.rate_min_pps;
  double hi = params.rate_max_pps;
  double rate = params.initial_rate_pps;
  std::int64_t packets = 0;
  int iterations = 0;
  while (hi - lo > params.stop_width_pps) {
    ProbeSpec stream = build_two_sided_probe(params.stream_len, rate);
    Trace trace = run_simulation(scenario, stream,
                                 seed + static_cast<std::uint64_t>(iterations));
    packets += params.stream_len;
    ++iterations;
    std::vector<double> owds;
    owds.reserve(trace.packets.size());
    for (const auto& p : trace.packets)
      if (p.received())
        owds.push_back(static_cast<double>(*p.t_recv - p.t_sent));
    if (owds.size() < static_cast<std::size_t>(params.trend_groups))
      throw EstimationError("SLoPS stream lost too many packets to classify");
    OwdTrend trend = owd_trend(owds, params.trend_groups, params.pct_threshold,
                               params.pdt_threshold);
    if (trend == OwdTrend::kIncreasing)
      hi = rate;  // self-induced congestion: rate above capacity
    else
      lo = rate;
    rate = (lo + hi) / 2.0;
  }

  EstimateReport r;
  r.method = Method::kSlops;
  r.capacity_pps = (lo + hi) / 2.0;
  r.delta_star_ns = r.capacity_pps > 0 ? 1e9 / r.capacity_pps : 0.0;
  r.packets_sent = packets;
  r.diagnostics.emplace_back("iterations", std::to_string(iterations));
  r.diagnostics.emplace_back("rate_lo_pps", std::to_string(lo));
  r.diagnostics.emplace_back("rate_hi_pps", std::to_string(hi));
  r.diagnostics.emplace_back(
      "hit_upper_bound", hi >= params.rate_max_pps ? "true" : "false");
  return r;
}

}  // namespace nfty
