#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nfty {

struct StepDetectParams {
  // Gaussian kernel bandwidth; 0 selects the median heuristic
  // (1 / median of squared pairwise differences, over at most 10^4 sampled
  // pairs, falling back to 1/variance and then 1.0 for constant data).
  double gamma = 0.0;
  // A split is accepted iff its cost gain exceeds penalty_beta * log(n),
  // with n the full series length. Calibrated so pure-noise series with
  // sigma up to 20% of the mean yield no splits.
  double penalty_beta = 3.0;
  // Minimum segment length. One-sided series can be as short as ~30 values,
  // so splits must remain possible there.
  int min_seg = 5;
  int max_depth = 16;
};

struct Segment {
  std::int64_t begin = 0;  // inclusive
  std::int64_t end = 0;    // exclusive
  double mean = 0.0;

  std::int64_t count() const { return end - begin; }
};

// A partition of [0, n) into contiguous segments at the detected steps.
struct Segmentation {
  std::vector<std::int64_t> breakpoints;  // sorted, strictly inside (0, n)
  std::vector<Segment> segments;
};

// Gaussian-kernel cost of one slice:
//   cost = len - (1/len) * sum_{i,j} exp(-gamma * (y_i - y_j)^2).
// A constant slice costs exactly 0.
double kernel_cost(std::span<const double> slice, double gamma);

// Bandwidth for the median heuristic (see StepDetectParams::gamma).
double median_heuristic_gamma(std::span<const double> values);

// Greedy recursive binary segmentation with the kernel cost above. At each
// node the split maximizing cost(whole) - cost(left) - cost(right) is taken
// iff the gain exceeds the penalty and both sides keep min_seg elements.
Segmentation binseg_detect(std::span<const double> values,
                           const StepDetectParams& params = {});

}  // namespace nfty
