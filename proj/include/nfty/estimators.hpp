#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nfty/dispersion.hpp"
#include "nfty/step_detect.hpp"

namespace nfty {

enum class Method { kNfty, kMin, kMeanTrain, kMedianTrain, kSlops };

const char* method_name(Method m);
Method method_from_name(const std::string& s);

struct EstimateReport {
  double capacity_pps = 0.0;
  double delta_star_ns = 0.0;
  Method method = Method::kNfty;
  std::optional<Segmentation> segmentation;
  std::int64_t packets_sent = 0;
  // Ordered so serialized reports are reproducible byte for byte.
  std::vector<std::pair<std::string, std::string>> diagnostics;
};

// Step detection, then the minimum per-segment mean dispersion.
EstimateReport nfty_estimate(const DispersionSeries& series,
                             const StepDetectParams& params = {},
                             std::int64_t packets_sent = 0);

// MIN / MEAN_TRAIN / MEDIAN_TRAIN over the whole series.
EstimateReport baseline_estimate(const DispersionSeries& series, Method method,
                                 std::int64_t packets_sent = 0);

}  // namespace nfty
