#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "nfty/config.hpp"
#include "nfty/time.hpp"

namespace nfty {

// How probe packets map onto flows. n_flows == 1 keeps the whole train in a
// single flow; larger values spray packets round-robin over flow ids
// 0..n_flows-1 so a multi-threaded NF sees work on several threads. An
// explicit id list overrides the default ids, e.g. to pick flows that hash
// to distinct threads.
struct FlowPolicy {
  int n_flows = 1;
  std::vector<std::uint64_t> flow_ids;

  static FlowPolicy single() { return {1, {}}; }
  static FlowPolicy spray(int n) { return {n, {}}; }
  // Flow ids covering every thread of a hash-assigned NF.
  static FlowPolicy spray_covering(int threads_k);
};

struct ProbeSpec {
  std::int64_t length = 2;
  double rate_pps = 1e6;
  PacketKind kind = PacketKind::kUdp;
  std::int64_t size_bytes = 64;
  FlowPolicy flow_policy;
  int default_ttl = 64;
  // One-sided plan: packets {0, g, 2g, ...} carry a TTL expiring at
  // expire_hop, everything else carries default_ttl.
  std::optional<int> ttl_gap;
  std::optional<int> expire_hop;
  std::map<std::int64_t, int> ttl_plan;

  std::uint64_t flow_of(std::int64_t packet_id) const {
    if (!flow_policy.flow_ids.empty())
      return flow_policy.flow_ids[static_cast<std::size_t>(packet_id) %
                                  flow_policy.flow_ids.size()];
    return static_cast<std::uint64_t>(packet_id %
                                      std::max(1, flow_policy.n_flows));
  }
  int ttl_of(std::int64_t packet_id) const {
    auto it = ttl_plan.find(packet_id);
    return it == ttl_plan.end() ? default_ttl : it->second;
  }
  std::int64_t marked_count() const {
    return static_cast<std::int64_t>(ttl_plan.size());
  }
  void validate(const LinkModel& link) const;
};

ProbeSpec build_two_sided_probe(std::int64_t length, double rate_pps,
                                FlowPolicy flow_policy = FlowPolicy::single());

// Marks packets {0, g_ttl, 2*g_ttl, ...} with a TTL that expires at the
// router sitting at absolute hop index expire_hop, which must lie strictly
// past the NF and before the destination.
ProbeSpec build_one_sided_probe(std::int64_t length, int g_ttl, int expire_hop,
                                double rate_pps, const LinkModel& link);

// Smallest packet gap that guarantees the reply of one marked packet is done
// before the next marked packet reaches the router: strictly more packets
// than the router can see within one reply-generation time.
int choose_gttl(SimTime t_r_ns, double c_max_pps, bool round_to_ten = false);

// Sends five back-to-back packet pairs with a TTL expiring at expire_hop and
// reports the median within-pair reply spacing, i.e. the router's
// reply-generation time. Fewer than two usable replies per pair across all
// attempts signals ICMP rate-limiting.
SimTime estimate_router_time(const ScenarioConfig& scenario, int expire_hop,
                             std::uint64_t seed);

}  // namespace nfty
