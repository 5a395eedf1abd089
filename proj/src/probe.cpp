#include "nfty/probe.hpp"

#include <cmath>
#include <string>

#include "nfty/errors.hpp"
#include "nfty/nf_models.hpp"

namespace nfty {

FlowPolicy FlowPolicy::spray_covering(int threads_k) {
  FlowPolicy policy;
  policy.n_flows = std::max(1, threads_k);
  if (threads_k <= 1) return policy;
  std::vector<bool> seen(static_cast<std::size_t>(threads_k), false);
  for (std::uint64_t f = 0;
       policy.flow_ids.size() < static_cast<std::size_t>(threads_k) &&
       f < 65'536;
       ++f) {
    int tid = assign_thread(ThreadAssign::kPerFlowHash, f, 0, threads_k);
    if (!seen[static_cast<std::size_t>(tid)]) {
      seen[static_cast<std::size_t>(tid)] = true;
      policy.flow_ids.push_back(f);
    }
  }
  return policy;
}

void ProbeSpec::validate(const LinkModel& link) const {
  if (length < 2) throw ConfigError("probe.length must be at least 2");
  if (rate_pps <= 0) throw ConfigError("probe.rate_pps must be positive");
  if (size_bytes <= 0) throw ConfigError("probe.size_bytes must be positive");
  if (flow_policy.n_flows < 1)
    throw ConfigError("probe.flow_policy.n_flows must be at least 1");
  if (default_ttl < 1 || default_ttl > 255)
    throw ConfigError("probe.default_ttl must lie in 1..255");
  if (default_ttl <= link.total_hops())
    throw ConfigError("probe.default_ttl does not reach the receiver");
  if (ttl_plan.empty()) return;
  if (!ttl_gap || !expire_hop)
    throw ConfigError("probe.ttl_plan requires ttl_gap and expire_hop");
  if (*expire_hop <= link.hop_count_before_nf)
    throw ConfigError("probe.expire_hop must lie past the NF");
  if (*expire_hop > link.total_hops())
    throw ConfigError("probe.expire_hop must lie before the destination");
  std::int64_t expect = 0;
  for (const auto& [id, ttl] : ttl_plan) {
    if (id != expect)
      throw ConfigError("probe.ttl_plan ids must be 0, g, 2g, ...");
    if (id >= length) throw ConfigError("probe.ttl_plan id beyond length");
    if (ttl != *expire_hop)
      throw ConfigError("probe.ttl_plan entries must expire at expire_hop");
    expect += *ttl_gap;
  }
}

ProbeSpec build_two_sided_probe(std::int64_t length, double rate_pps,
                                FlowPolicy flow_policy) {
  if (length < 2) throw ConfigError("probe.length must be at least 2");
  if (rate_pps <= 0) throw ConfigError("probe.rate_pps must be positive");
  ProbeSpec p;
  p.length = length;
  p.rate_pps = rate_pps;
  p.flow_policy = flow_policy;
  return p;
}

ProbeSpec build_one_sided_probe(std::int64_t length, int g_ttl, int expire_hop,
                                double rate_pps, const LinkModel& link) {
  if (length < 2) throw ConfigError("probe.length must be at least 2");
  if (g_ttl < 1) throw ConfigError("probe.ttl_gap must be at least 1");
  if (expire_hop <= link.hop_count_before_nf)
    throw ConfigError("probe.expire_hop must lie past the NF (hop " +
                      std::to_string(link.hop_count_before_nf) + ")");
  if (expire_hop > link.total_hops())
    throw ConfigError("probe.expire_hop must lie before the destination");
  ProbeSpec p;
  p.length = length;
  p.rate_pps = rate_pps;
  p.ttl_gap = g_ttl;
  p.expire_hop = expire_hop;
  for (std::int64_t id = 0; id < length; id += g_ttl)
    p.ttl_plan[id] = expire_hop;
  return p;
}

int choose_gttl(SimTime t_r_ns, double c_max_pps, bool round_to_ten) {
  if (t_r_ns < 0) throw ConfigError("t_r_ns must be non-negative");
  if (c_max_pps <= 0) throw ConfigError("c_max_pps must be positive");
  double packets_per_reply = static_cast<double>(t_r_ns) * c_max_pps / 1e9;
  int g = static_cast<int>(std::floor(packets_per_reply)) + 1;
  if (round_to_ten) g = ((g + 9) / 10) * 10;
  return g;
}

}  // namespace nfty
