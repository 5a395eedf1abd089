#include "nfty/step_detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nfty/rng.hpp"

namespace nfty {

double kernel_cost(std::span<const double> slice, double gamma) {
  std::size_t n = slice.size();
  if (n == 0) return 0.0;
  double sum = static_cast<double>(n);  // diagonal terms
  for (std::size_t j = 1; j < n; ++j) {
    double yj = slice[j];
    double row = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      double d = slice[i] - yj;
      row += std::exp(-gamma * d * d);
    }
    sum += 2.0 * row;
  }
  return static_cast<double>(n) - sum / static_cast<double>(n);
}

double median_heuristic_gamma(std::span<const double> values) {
  std::size_t n = values.size();
  if (n < 2) return 1.0;
  std::vector<double> sq;
  std::size_t total_pairs = n * (n - 1) / 2;
  constexpr std::size_t kMaxPairs = 10'000;
  if (total_pairs <= kMaxPairs) {
    sq.reserve(total_pairs);
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        double d = values[i] - values[j];
        sq.push_back(d * d);
      }
  } else {
    // Deterministic sample; this keeps the heuristic a pure function.
    StageRng rng(0x9e3779b97f4a7c15ULL, "gamma_pairs");
    sq.reserve(kMaxPairs);
    for (std::size_t k = 0; k < kMaxPairs; ++k) {
      std::size_t i = static_cast<std::size_t>(rng.uniform_int(2 * k, n));
      std::size_t j = static_cast<std::size_t>(rng.uniform_int(2 * k + 1, n));
      if (i == j) j = (j + 1) % n;
      double d = values[i] - values[j];
      sq.push_back(d * d);
    }
  }
  std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2),
                   sq.end());
  double med = sq[sq.size() / 2];
  if (med > 0.0) return 1.0 / med;
  double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var > 0.0) return 1.0 / var;
  return 1.0;
}

namespace {

// Kernel sums of every prefix of [s, e): P[t-s] = sum_{i,j in [s,t)} K(i,j).
// Built incrementally, O((e-s)^2 / 2) kernel evaluations.
void prefix_kernel_sums(std::span<const double> y, std::size_t s,
                        std::size_t e, double gamma, std::vector<double>& out) {
  std::size_t len = e - s;
  out.assign(len + 1, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    double yt = y[s + t];
    double cross = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      double d = y[s + i] - yt;
      cross += std::exp(-gamma * d * d);
    }
    out[t + 1] = out[t] + 1.0 + 2.0 * cross;
  }
}

void suffix_kernel_sums(std::span<const double> y, std::size_t s,
                        std::size_t e, double gamma, std::vector<double>& out) {
  std::size_t len = e - s;
  out.assign(len + 1, 0.0);
  for (std::size_t t = len; t-- > 0;) {
    double yt = y[s + t];
    double cross = 0.0;
    for (std::size_t j = t + 1; j < len; ++j) {
      double d = yt - y[s + j];
      cross += std::exp(-gamma * d * d);
    }
    out[t] = out[t + 1] + 1.0 + 2.0 * cross;
  }
}

struct Node {
  std::size_t begin, end;
  int depth;
};

}  // namespace

Segmentation binseg_detect(std::span<const double> values,
                           const StepDetectParams& params) {
  Segmentation seg;
  std::size_t n = values.size();
  if (n == 0) return seg;

  double gamma =
      params.gamma > 0.0 ? params.gamma : median_heuristic_gamma(values);
  double penalty =
      params.penalty_beta * std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  std::size_t min_seg = static_cast<std::size_t>(std::max(params.min_seg, 2));

  std::vector<double> pre, suf;
  std::vector<Node> stack{{0, n, 0}};
  while (!stack.empty()) {
    Node node = stack.back();
    stack.pop_back();
    std::size_t len = node.end - node.begin;
    if (len < 2 * min_seg || node.depth >= params.max_depth) continue;

    prefix_kernel_sums(values, node.begin, node.end, gamma, pre);
    suffix_kernel_sums(values, node.begin, node.end, gamma, suf);
    double whole =
        static_cast<double>(len) - pre[len] / static_cast<double>(len);

    double best_gain = 0.0;
    std::size_t best_t = 0;
    for (std::size_t t = min_seg; t + min_seg <= len; ++t) {
      double left = static_cast<double>(t) - pre[t] / static_cast<double>(t);
      double right = static_cast<double>(len - t) -
                     suf[t] / static_cast<double>(len - t);
      double gain = whole - left - right;
      if (gain > best_gain) {
        best_gain = gain;
        best_t = t;
      }
    }
    if (best_t == 0 || best_gain <= penalty) continue;

    std::size_t split = node.begin + best_t;
    seg.breakpoints.push_back(static_cast<std::int64_t>(split));
    stack.push_back({node.begin, split, node.depth + 1});
    stack.push_back({split, node.end, node.depth + 1});
  }

  std::sort(seg.breakpoints.begin(), seg.breakpoints.end());
  std::size_t prev = 0;
  auto flush = [&](std::size_t end) {
    Segment s;
    s.begin = static_cast<std::int64_t>(prev);
    s.end = static_cast<std::int64_t>(end);
    double sum = 0.0;
    for (std::size_t i = prev; i < end; ++i) sum += values[i];
    s.mean = sum / static_cast<double>(end - prev);
    seg.segments.push_back(s);
    prev = end;
  };
  for (std::int64_t bp : seg.breakpoints) flush(static_cast<std::size_t>(bp));
  flush(n);
  return seg;
}

}  // namespace nfty
