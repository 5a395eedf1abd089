#include <vector>

#include "nfty/errors.hpp"
#include "nfty/probe.hpp"
#include "nfty/simulator.hpp"

namespace nfty {

SimTime estimate_router_time(const ScenarioConfig& scenario, int expire_hop,
                             std::uint64_t seed) {
  constexpr int kPairs = 5;
  std::vector<SimTime> spacings;
  for (int i = 0; i < kPairs; ++i) {
    ProbeSpec pair = build_one_sided_probe(2, 1, expire_hop,
                                           scenario.sender.nominal_rate_pps,
                                           scenario.link);
    Trace trace =
        run_simulation(scenario, pair, seed + static_cast<std::uint64_t>(i));
    if (trace.icmp_replies.size() == 2)
      spacings.push_back(trace.icmp_replies[1].t_reply_arrival -
                         trace.icmp_replies[0].t_reply_arrival);
  }
  if (spacings.empty())
    throw EstimationError(
        "router time estimation received fewer than 2 replies per pair; "
        "the router is likely rate-limiting ICMP");
  std::sort(spacings.begin(), spacings.end());
  return spacings[spacings.size() / 2];
}

}  // namespace nfty
