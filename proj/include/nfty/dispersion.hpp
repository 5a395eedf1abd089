#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nfty/packet.hpp"

namespace nfty {

enum class SeriesKind { kTwoSidedConsecutive, kOneSidedNormalized };

// Ordered inter-arrival gaps fed to the estimators. Two-sided series hold
// consecutive receiver gaps in ns; one-sided series hold reply gaps already
// divided by the packet-index gap between the replies, with the index gaps
// kept alongside.
struct DispersionSeries {
  std::vector<double> values;
  SeriesKind kind = SeriesKind::kTwoSidedConsecutive;
  std::vector<std::int64_t> index_gaps;  // one-sided only

  std::size_t size() const { return values.size(); }
};

// Consecutive receiver gaps over packets that actually arrived, in receiver
// order. Dropped packets contribute nothing; a gap across a drop is the
// honest gap between its received neighbours.
DispersionSeries dispersion_from_trace(
    const Trace& trace, std::optional<std::uint64_t> flow_filter = {});

// Index-normalized gaps between consecutive ICMP replies.
DispersionSeries onesided_dispersion(
    const std::vector<IcmpReplyRecord>& replies);

}  // namespace nfty
