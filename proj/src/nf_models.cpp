#include "nfty/nf_models.hpp"

#include <algorithm>
#include <cmath>

namespace nfty {

SimTime nf_service_time(const NfConfig& nf, int level_index) {
  double factor = nf.freq_levels[static_cast<std::size_t>(level_index)];
  return std::llround(static_cast<double>(nf.base_service_ns) / factor);
}

std::uint64_t stable_flow_hash(std::uint64_t flow_id) {
  return splitmix64(flow_id ^ 0x5bf0f5e4a9d3c1b7ULL);
}

int assign_thread(ThreadAssign policy, std::uint64_t flow_id,
                  std::int64_t packet_id, int threads_k) {
  if (threads_k <= 1) return 0;
  if (policy == ThreadAssign::kPerFlowHash)
    return static_cast<int>(stable_flow_hash(flow_id) %
                            static_cast<std::uint64_t>(threads_k));
  return static_cast<int>(packet_id % threads_k);
}

int GovernorState::tick(double busy_fraction) {
  busy_fraction = std::clamp(busy_fraction, 0.0, 1.0);
  if (busy_fraction >= cfg_.up_threshold) {
    ++high_streak_;
    if (high_streak_ >= sustain_ && level_ < num_levels_ - 1) {
      ++level_;
      high_streak_ = 0;
    }
  } else {
    high_streak_ = 0;
    if (busy_fraction <= cfg_.down_threshold && level_ > 0) --level_;
  }
  max_level_seen_ = std::max(max_level_seen_, level_);
  return level_;
}

bool TokenBucket::try_take(SimTime now) {
  if (rate_pps_ <= 0) return true;
  tokens_ = std::min<double>(
      burst_, tokens_ + static_cast<double>(now - last_) * rate_pps_ / 1e9);
  last_ = now;
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return true;
  }
  return false;
}

SimTime TokenShaper::release_time(SimTime ready) {
  if (rate_pps_ <= 0) return ready;
  ready = std::max(ready, last_);  // upstream stages may reorder
  tokens_ = std::min<double>(
      burst_, tokens_ + static_cast<double>(ready - last_) * rate_pps_ / 1e9);
  last_ = ready;
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return ready;
  }
  double wait_ns = (1.0 - tokens_) * 1e9 / rate_pps_;
  SimTime release = ready + std::llround(wait_ns);
  tokens_ = 0.0;
  last_ = release;
  return release;
}

}  // namespace nfty
