#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfty/config.hpp"
#include "nfty/time.hpp"

namespace nfty {

// Lifecycle timestamps of one probe packet. Timestamps are monotone along
// the stage sequence; a dropped packet carries no timestamps past the stage
// that dropped it.
struct PacketRecord {
  std::int64_t packet_id = 0;
  std::uint64_t flow_id = 0;
  PacketKind kind = PacketKind::kUdp;
  std::int64_t size_bytes = 64;
  int ttl = 64;
  SimTime t_sent = 0;
  std::optional<SimTime> t_nf_in;
  std::optional<SimTime> t_nf_out;
  std::optional<SimTime> t_recv;
  std::optional<int> thread_id;
  std::optional<std::string> dropped_at;

  bool received() const { return t_recv.has_value(); }
};

struct IcmpReplyRecord {
  std::int64_t orig_packet_id = 0;
  int router_hop = 0;
  SimTime t_reply_arrival = 0;  // at the sender
};

struct Trace {
  std::vector<PacketRecord> packets;       // ordered by packet_id
  std::vector<IcmpReplyRecord> icmp_replies;  // ordered by arrival
  std::uint64_t scenario_digest = 0;
  std::uint64_t seed = 0;

  // Run diagnostics beyond the packet records themselves.
  int max_freq_level = 0;
  std::map<std::string, std::int64_t> drops_by_stage;

  std::int64_t received_count() const;
  std::int64_t dropped_count() const;
};

struct FloodStats {
  std::int64_t sent = 0;
  std::int64_t delivered = 0;  // received within the flood window
  std::int64_t dropped = 0;
  double delivered_rate_pps = 0.0;
  // Steady-state view: packets received during the second half of the
  // window, used to classify whether a rate is sustainable.
  std::int64_t delivered_second_half = 0;
  double second_half_rate_pps = 0.0;
  std::int64_t drops_second_half = 0;
  std::int64_t max_backlog = 0;
  int max_freq_level = 0;
};

}  // namespace nfty
