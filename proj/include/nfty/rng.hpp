#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace nfty {

// Counter-based random streams. Every stage of the simulator owns an
// independent stream derived from (master seed, stage label), and draws are
// indexed by an explicit counter (packet id, tick index, ms bucket). This
// makes draws independent of event processing order and lets one stage be
// toggled without perturbing the draws of any other stage.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class StageRng {
 public:
  StageRng(std::uint64_t master_seed, std::string_view stage_label)
      : key_(splitmix64(master_seed ^ fnv1a64(stage_label))) {}

  // Uniform in [0, 1). 53-bit mantissa draw.
  double uniform(std::uint64_t counter) const {
    std::uint64_t bits = splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t counter, std::uint64_t n) const {
    return static_cast<std::uint64_t>(uniform(counter) * static_cast<double>(n));
  }

  // Standard normal via Box-Muller; consumes counters 2c and 2c+1.
  double normal(std::uint64_t counter) const {
    double u1 = uniform(2 * counter);
    double u2 = uniform(2 * counter + 1);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Log-normal draw with the given arithmetic mean and standard deviation.
  double lognormal(std::uint64_t counter, double mean, double sigma) const {
    if (mean <= 0.0) return 0.0;
    if (sigma <= 0.0) return mean;
    double s2 = std::log(1.0 + (sigma * sigma) / (mean * mean));
    double mu = std::log(mean) - 0.5 * s2;
    return std::exp(mu + std::sqrt(s2) * normal(counter));
  }

 private:
  std::uint64_t key_;
};

}  // namespace nfty
