#pragma once

#include <cstdint>

#include "nfty/config.hpp"
#include "nfty/rng.hpp"
#include "nfty/time.hpp"

namespace nfty {

// Per-packet service time at the given frequency level, rounded to ns.
SimTime nf_service_time(const NfConfig& nf, int level_index);

// Stable flow -> thread mapping used by PER_FLOW_HASH.
std::uint64_t stable_flow_hash(std::uint64_t flow_id);

int assign_thread(ThreadAssign policy, std::uint64_t flow_id,
                  std::int64_t packet_id, int threads_k);

// Threshold frequency governor. One instance drives all NF threads; the
// level applies CPU-wide. Stepping up requires sustain_ticks_up consecutive
// ticks at or above up_threshold, stepping down a single tick at or below
// down_threshold.
class GovernorState {
 public:
  GovernorState(const GovernorConfig& cfg, int num_levels, int sustain_override = 0)
      : cfg_(cfg), num_levels_(num_levels) {
    if (sustain_override > 0) sustain_ = sustain_override;
    else sustain_ = cfg.sustain_ticks_up;
  }

  int level() const { return level_; }
  int max_level_seen() const { return max_level_seen_; }
  int sustain_ticks() const { return sustain_; }

  // Evaluate one governor period given the busy fraction measured over it.
  // Returns the (possibly unchanged) level index.
  int tick(double busy_fraction);

 private:
  GovernorConfig cfg_;
  int num_levels_;
  int sustain_ = 1;
  int level_ = 0;
  int high_streak_ = 0;
  int max_level_seen_ = 0;
};

// Token bucket with continuous refill. rate_pps == 0 means unlimited.
class TokenBucket {
 public:
  TokenBucket(double rate_pps, int burst)
      : rate_pps_(rate_pps), burst_(burst), tokens_(burst) {}

  bool try_take(SimTime now);

 private:
  double rate_pps_;
  int burst_;
  double tokens_;
  SimTime last_ = 0;
};

// Token-bucket shaper used by RATE_SHAPE: returns the earliest release time
// for a packet that becomes ready at `ready` (ready times non-decreasing),
// enforcing rate_pps with the given packet burst allowance. Never drops.
class TokenShaper {
 public:
  TokenShaper(double rate_pps, int burst_pkts)
      : rate_pps_(rate_pps), burst_(burst_pkts),
        tokens_(static_cast<double>(burst_pkts)) {}

  SimTime release_time(SimTime ready);

 private:
  double rate_pps_;
  int burst_;
  double tokens_;
  SimTime last_ = 0;
};

}  // namespace nfty
