#include "nfty/planner.hpp"

#include <algorithm>
#include <cmath>

#include "nfty/errors.hpp"

namespace nfty {

PlanResult plan_probe_length(const PlanContext& ctx) {
  if (ctx.c1 <= 0 || ctx.c <= 0 || ctx.dvfs_default_length < 2)
    throw PlanError("plan constants must be positive");

  PlanResult r;
  if (ctx.threat_model == ThreatModel::kOneSided) {
    if (!ctx.g_ttl)
      throw PlanError("one-sided planning requires: g_ttl");
    if (*ctx.g_ttl < 1) throw PlanError("g_ttl must be at least 1");
    r.length = static_cast<std::int64_t>(ctx.c1) * *ctx.g_ttl;
    r.probe_kind = ThreatModel::kOneSided;
    r.rationale = "one-sided: c1 x g_ttl replies budget";
    return r;
  }

  r.probe_kind = ThreatModel::kTwoSided;
  if (ctx.dvfs_expected != TriState::kNo) {
    // Unknown deployments are treated as DVFS-enabled: longer probes are
    // strictly more accurate, shorter ones can miss the top frequency.
    r.length = ctx.dvfs_default_length;
    r.rationale = ctx.dvfs_expected == TriState::kYes
                      ? "two-sided, DVFS: thousands to trigger the top level"
                      : "two-sided, DVFS unknown: conservative default";
    return r;
  }

  std::int64_t len = 100;
  r.rationale = "two-sided, no DVFS: floor of 100";
  if (ctx.threads_k_est) {
    std::int64_t by_threads =
        static_cast<std::int64_t>(ctx.c) * *ctx.threads_k_est;
    if (by_threads > len) {
      len = by_threads;
      r.rationale = "two-sided, no DVFS: c x k thread coverage";
    }
  }
  if (ctx.batch_interval_est_ns && ctx.send_rate_est_pps) {
    std::int64_t by_batch = static_cast<std::int64_t>(
        std::ceil(static_cast<double>(*ctx.batch_interval_est_ns) *
                  *ctx.send_rate_est_pps / 1e9));
    if (by_batch > len) {
      len = by_batch;
      r.rationale = "two-sided, no DVFS: outlast the batch interval";
    }
  }
  r.length = len;
  return r;
}

}  // namespace nfty
