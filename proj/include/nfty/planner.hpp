#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nfty/time.hpp"

namespace nfty {

enum class ThreatModel { kOneSided, kTwoSided };
enum class TriState { kYes, kNo, kUnknown };

// Everything the attacker knows (or doesn't) when sizing a probe.
struct PlanContext {
  ThreatModel threat_model = ThreatModel::kTwoSided;
  TriState dvfs_expected = TriState::kUnknown;
  std::optional<int> threads_k_est;
  std::optional<SimTime> batch_interval_est_ns;
  std::optional<int> g_ttl;
  std::optional<double> send_rate_est_pps;
  int c1 = 30;             // replies wanted in the one-sided case
  int c = 50;              // packets per thread in the two-sided case
  std::int64_t dvfs_default_length = 5'000;
};

struct PlanResult {
  std::int64_t length = 0;
  std::string rationale;
  ThreatModel probe_kind = ThreatModel::kTwoSided;
};

// Probe-length decision: one-sided probes need c1 * g_ttl packets; a
// two-sided probe against a DVFS deployment (or an unknown one, taken
// conservatively as DVFS) needs thousands; otherwise the length is driven by
// thread count and batch interval with a floor of 100.
PlanResult plan_probe_length(const PlanContext& ctx);

}  // namespace nfty
