#include "nfty/dispersion.hpp"

#include <algorithm>

#include "nfty/errors.hpp"

namespace nfty {

DispersionSeries dispersion_from_trace(const Trace& trace,
                                       std::optional<std::uint64_t> flow_filter) {
  std::vector<std::pair<SimTime, std::int64_t>> arrivals;
  arrivals.reserve(trace.packets.size());
  for (const auto& p : trace.packets) {
    if (!p.received()) continue;
    if (flow_filter && p.flow_id != *flow_filter) continue;
    arrivals.emplace_back(*p.t_recv, p.packet_id);
  }
  if (arrivals.size() < 2)
    throw EstimationError(
        "dispersion needs at least 2 received packets, got " +
        std::to_string(arrivals.size()));
  std::sort(arrivals.begin(), arrivals.end());
  DispersionSeries series;
  series.kind = SeriesKind::kTwoSidedConsecutive;
  series.values.reserve(arrivals.size() - 1);
  for (std::size_t i = 1; i < arrivals.size(); ++i)
    series.values.push_back(
        static_cast<double>(arrivals[i].first - arrivals[i - 1].first));
  return series;
}

DispersionSeries onesided_dispersion(
    const std::vector<IcmpReplyRecord>& replies) {
  if (replies.size() < 2)
    throw EstimationError(
        "one-sided dispersion needs at least 2 ICMP replies, got " +
        std::to_string(replies.size()));
  DispersionSeries series;
  series.kind = SeriesKind::kOneSidedNormalized;
  // Replies come in arrival order; packet ids must be strictly increasing
  // along it for the index normalization to make sense.
  for (std::size_t i = 1; i < replies.size(); ++i) {
    std::int64_t gap =
        replies[i].orig_packet_id - replies[i - 1].orig_packet_id;
    if (gap <= 0)
      throw DataError("duplicate or out-of-order ICMP reply for packet " +
                      std::to_string(replies[i].orig_packet_id));
    series.values.push_back(
        static_cast<double>(replies[i].t_reply_arrival -
                            replies[i - 1].t_reply_arrival) /
        static_cast<double>(gap));
    series.index_gaps.push_back(gap);
  }
  return series;
}

}  // namespace nfty
