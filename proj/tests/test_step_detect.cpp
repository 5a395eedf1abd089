#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nfty/step_detect.hpp"
#include "oracles.hpp"

using namespace nfty;

namespace {

std::vector<double> step_series(const std::vector<std::size_t>& lens,
                                const std::vector<double>& levels,
                                double sigma, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> y;
  for (std::size_t s = 0; s < lens.size(); ++s)
    for (std::size_t i = 0; i < lens[s]; ++i)
      y.push_back(levels[s] + (sigma > 0 ? noise(rng) : 0.0));
  return y;
}

}  // namespace

TEST_CASE("kernel cost basics") {
  std::vector<double> constant(20, 7.5);
  CHECK(kernel_cost(constant, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

  // Two far-apart values: cost approaches 1 as the kernel separates them.
  std::vector<double> pair{0.0, 1000.0};
  CHECK(kernel_cost(pair, 1.0) == doctest::Approx(1.0).epsilon(1e-9));

  // {1,2,3} at gamma 1: 3 - (3 + 4e^-1 + 2e^-4)/3.
  std::vector<double> three{1.0, 2.0, 3.0};
  double expected = 3.0 - (3.0 + 4.0 * std::exp(-1.0) + 2.0 * std::exp(-4.0)) / 3.0;
  CHECK(expected == doctest::Approx(1.4972836525).epsilon(1e-9));
  CHECK(kernel_cost(three, 1.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("constant series yields no breakpoints") {
  std::vector<double> y(500, 5'000.0);
  Segmentation seg = binseg_detect(y);
  CHECK(seg.breakpoints.empty());
  REQUIRE(seg.segments.size() == 1);
  CHECK(seg.segments[0].mean == doctest::Approx(5'000.0));
}

TEST_CASE("single step found within 2 of the variance oracle") {
  // 100 points at 10us then 100 at 5us with sigma = 0.1us.
  std::vector<double> y = step_series({100, 100}, {10'000, 5'000}, 100, 7);
  auto oracle = oracles::best_splits_sse(y, 1, 5);
  REQUIRE(oracle.size() == 1);
  CHECK(std::abs(oracle[0] - 100) <= 2);

  Segmentation seg = binseg_detect(y);
  REQUIRE(seg.breakpoints.size() == 1);
  CHECK(std::abs(seg.breakpoints[0] - oracle[0]) <= 2);
}

TEST_CASE("three-level series finds both steps near the oracle") {
  std::vector<double> y =
      step_series({80, 80, 80}, {10'000, 7'000, 5'000}, 100, 11);
  auto oracle = oracles::best_splits_sse(y, 2, 5);
  REQUIRE(oracle.size() == 2);
  CHECK(std::abs(oracle[0] - 80) <= 2);
  CHECK(std::abs(oracle[1] - 160) <= 2);

  Segmentation seg = binseg_detect(y);
  REQUIRE(seg.breakpoints.size() == 2);
  CHECK(std::abs(seg.breakpoints[0] - oracle[0]) <= 2);
  CHECK(std::abs(seg.breakpoints[1] - oracle[1]) <= 2);
}

TEST_CASE("segments partition the series and honor min_seg") {
  std::vector<double> y =
      step_series({60, 40, 90}, {9'000, 6'000, 4'000}, 50, 3);
  StepDetectParams params;
  Segmentation seg = binseg_detect(y, params);
  REQUIRE_FALSE(seg.segments.empty());
  CHECK(seg.segments.front().begin == 0);
  CHECK(seg.segments.back().end == static_cast<std::int64_t>(y.size()));
  for (std::size_t i = 0; i < seg.segments.size(); ++i) {
    CHECK(seg.segments[i].count() >= params.min_seg);
    if (i > 0) CHECK(seg.segments[i].begin == seg.segments[i - 1].end);
  }
}

TEST_CASE("series shorter than 2*min_seg stays one segment") {
  std::vector<double> y{1, 100, 1, 100, 1, 100, 1, 100, 1};
  Segmentation seg = binseg_detect(y);
  CHECK(seg.breakpoints.empty());
  CHECK(seg.segments.size() == 1);
}

TEST_CASE("segmentation is scale equivariant under the median heuristic") {
  std::vector<double> y =
      step_series({70, 100, 60}, {12'000, 8'000, 5'000}, 300, 23);
  Segmentation base = binseg_detect(y);
  std::vector<double> scaled;
  for (double v : y) scaled.push_back(v * 3.0);
  Segmentation s3 = binseg_detect(scaled);
  CHECK(base.breakpoints == s3.breakpoints);
}

TEST_CASE("pure noise yields no splits") {
  std::mt19937 rng(1234);
  int splits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 100 + static_cast<std::size_t>(rng() % 900);
    double mean = 5'000.0;
    double sigma = mean * (0.05 + 0.15 * (static_cast<double>(rng() % 100) / 100.0));
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> y(n);
    for (auto& v : y) v = mean + noise(rng);
    splits += binseg_detect(y).breakpoints.empty() ? 0 : 1;
  }
  CHECK(splits == 0);
}
