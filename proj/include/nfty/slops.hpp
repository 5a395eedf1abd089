#pragma once

#include <cstdint>
#include <vector>

#include "nfty/config.hpp"
#include "nfty/estimators.hpp"

namespace nfty {

struct SlopsParams {
  double rate_min_pps = 0.0;
  double rate_max_pps = 500'000.0;
  double initial_rate_pps = 250'000.0;
  double stop_width_pps = 1'000.0;
  std::int64_t stream_len = 100;  // packets per probing stream
  int trend_groups = 10;
  // With 10 groups, a PCT cut at 0.70 needs 7 of 9 ascents; i.i.d. delays
  // trigger that in about 1.4% of streams (a 0.66 cut would fire on 6 of 9,
  // i.e. ~14% of the time, far too eager for a one-or-the-other rule).
  double pct_threshold = 0.70;
  double pdt_threshold = 0.55;

  void validate() const;
};

enum class OwdTrend { kIncreasing, kNotIncreasing };

// Pairwise-comparison / pairwise-difference trend test over group medians
// of the relative one-way delays. INCREASING iff PCT > pct_threshold or
// PDT > pdt_threshold; a flat series (zero PDT denominator) is
// NOT_INCREASING.
OwdTrend owd_trend(const std::vector<double>& owds, int groups,
                   double pct_threshold, double pdt_threshold);

// Binary search on the probing rate: a stream whose one-way delays trend
// upward was sent faster than the NF can process. Stops when the bracket
// narrows to stop_width_pps and reports the midpoint.
EstimateReport slops_search(const ScenarioConfig& scenario,
                            const SlopsParams& params, std::uint64_t seed);

}  // namespace nfty
