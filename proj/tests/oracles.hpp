#pragma once

#include <cstdint>
#include <limits>
#include <vector>

// Independent reference implementations used to pin expected values. These
// deliberately share no code with the library paths they check.
namespace oracles {

// Sum of squared deviations from the mean, per contiguous block, via prefix
// sums: sse(a,b) = S2 - S1^2 / n.
class SseOracle {
 public:
  explicit SseOracle(const std::vector<double>& y)
      : s1_(y.size() + 1, 0.0), s2_(y.size() + 1, 0.0) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      s1_[i + 1] = s1_[i] + y[i];
      s2_[i + 1] = s2_[i] + y[i] * y[i];
    }
  }

  double sse(std::size_t a, std::size_t b) const {  // [a, b)
    double n = static_cast<double>(b - a);
    double s1 = s1_[b] - s1_[a];
    double s2 = s2_[b] - s2_[a];
    return s2 - s1 * s1 / n;
  }

 private:
  std::vector<double> s1_, s2_;
};

// Exhaustive k-split segmentation minimizing total within-segment variance.
// Feasible for k <= 3 on the series sizes used in tests.
inline std::vector<std::int64_t> best_splits_sse(const std::vector<double>& y,
                                                 int k, std::size_t min_seg) {
  SseOracle oracle(y);
  std::size_t n = y.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> best_bp;
  auto consider = [&](std::vector<std::size_t> bps) {
    std::vector<std::size_t> edges{0};
    edges.insert(edges.end(), bps.begin(), bps.end());
    edges.push_back(n);
    double total = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i] - edges[i - 1] < min_seg) return;
      total += oracle.sse(edges[i - 1], edges[i]);
    }
    if (total < best) {
      best = total;
      best_bp.assign(bps.begin(), bps.end());
    }
  };
  if (k == 1) {
    for (std::size_t t = min_seg; t + min_seg <= n; ++t) consider({t});
  } else if (k == 2) {
    for (std::size_t t1 = min_seg; t1 + 2 * min_seg <= n; ++t1)
      for (std::size_t t2 = t1 + min_seg; t2 + min_seg <= n; ++t2)
        consider({t1, t2});
  } else if (k == 3) {
    for (std::size_t t1 = min_seg; t1 + 3 * min_seg <= n; ++t1)
      for (std::size_t t2 = t1 + min_seg; t2 + 2 * min_seg <= n; ++t2)
        for (std::size_t t3 = t2 + min_seg; t3 + min_seg <= n; ++t3)
          consider({t1, t2, t3});
  }
  return best_bp;
}

}  // namespace oracles
