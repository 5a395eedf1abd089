#include "nfty/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nfty/errors.hpp"

namespace nfty {

const char* method_name(Method m) {
  switch (m) {
    case Method::kNfty: return "NFTY";
    case Method::kMin: return "MIN";
    case Method::kMeanTrain: return "MEAN_TRAIN";
    case Method::kMedianTrain: return "MEDIAN_TRAIN";
    case Method::kSlops: return "SLOPS";
  }
  return "?";
}

Method method_from_name(const std::string& s) {
  if (s == "NFTY") return Method::kNfty;
  if (s == "MIN") return Method::kMin;
  if (s == "MEAN_TRAIN") return Method::kMeanTrain;
  if (s == "MEDIAN_TRAIN") return Method::kMedianTrain;
  if (s == "SLOPS") return Method::kSlops;
  throw ConfigError("unknown estimation method: " + s);
}

namespace {

EstimateReport from_delta(double delta_ns, Method method,
                          std::int64_t packets_sent) {
  if (delta_ns <= 0.0)
    throw EstimationError(std::string(method_name(method)) +
                          ": zero dispersion value, cannot invert; a longer "
                          "probe spans more batch intervals");
  EstimateReport r;
  r.method = method;
  r.delta_star_ns = delta_ns;
  r.capacity_pps = 1e9 / delta_ns;
  r.packets_sent = packets_sent;
  return r;
}

}  // namespace

EstimateReport nfty_estimate(const DispersionSeries& series,
                             const StepDetectParams& params,
                             std::int64_t packets_sent) {
  if (series.values.empty())
    throw EstimationError("NFTY: empty dispersion series");
  Segmentation seg = binseg_detect(series.values, params);
  double best = seg.segments.front().mean;
  for (const auto& s : seg.segments) best = std::min(best, s.mean);
  EstimateReport r = from_delta(best, Method::kNfty, packets_sent);
  r.diagnostics.emplace_back("segments",
                             std::to_string(seg.segments.size()));
  r.segmentation = std::move(seg);
  return r;
}

EstimateReport baseline_estimate(const DispersionSeries& series, Method method,
                                 std::int64_t packets_sent) {
  if (series.values.empty())
    throw EstimationError("baseline: empty dispersion series");
  const auto& v = series.values;
  double delta = 0.0;
  switch (method) {
    case Method::kMin:
      delta = *std::min_element(v.begin(), v.end());
      break;
    case Method::kMeanTrain:
      delta = std::accumulate(v.begin(), v.end(), 0.0) /
              static_cast<double>(v.size());
      break;
    case Method::kMedianTrain: {
      std::vector<double> tmp = v;
      std::size_t mid = tmp.size() / 2;
      std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid),
                       tmp.end());
      double hi = tmp[mid];
      if (tmp.size() % 2 == 0) {
        double lo = *std::max_element(
            tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid));
        delta = (lo + hi) / 2.0;
      } else {
        delta = hi;
      }
      break;
    }
    default:
      throw ConfigError("baseline_estimate expects MIN, MEAN_TRAIN or "
                        "MEDIAN_TRAIN");
  }
  return from_delta(delta, method, packets_sent);
}

}  // namespace nfty
