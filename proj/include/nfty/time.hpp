#pragma once

#include <cstdint>

namespace nfty {

// Simulated clock value: integer nanoseconds since simulation start.
// All simulator arithmetic is exact; durations are never kept as floats.
using SimTime = std::int64_t;

constexpr SimTime kNsPerUs = 1'000;
constexpr SimTime kNsPerMs = 1'000'000;
constexpr SimTime kNsPerSec = 1'000'000'000;

constexpr SimTime usec(std::int64_t v) { return v * kNsPerUs; }
constexpr SimTime msec(std::int64_t v) { return v * kNsPerMs; }
constexpr SimTime sec(std::int64_t v) { return v * kNsPerSec; }

}  // namespace nfty
