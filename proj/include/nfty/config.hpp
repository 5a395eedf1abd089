#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nfty/errors.hpp"
#include "nfty/time.hpp"

namespace nfty {

enum class PacketKind { kUdp, kTcpSyn };
enum class ThreadAssign { kPerFlowHash, kRoundRobin };

// Path model. One serialization point at the sender NIC plus per-hop
// propagation; every hop is a router that decrements TTL. Hops
// 1..hop_count_before_nf sit in front of the NF, the rest behind it.
struct LinkModel {
  double capacity_bps = 10e9;
  SimTime propagation_ns = 10'000;
  int hop_count_before_nf = 2;
  int hop_count_after_nf = 6;

  int total_hops() const { return hop_count_before_nf + hop_count_after_nf; }
  // Wire transmission time for one packet, rounded to ns (>= 1).
  SimTime transmission_ns(std::int64_t size_bytes) const;
  void validate() const;
};

// Path jitter applied to deliveries past the NF (receiver leg and ICMP
// return leg). Disabled means all contributions are exactly zero.
struct NoiseModel {
  double jitter_mean_ns = 3'000;
  double jitter_sigma_ns = 2'000;
  double burst_prob_per_ms = 0.02;
  SimTime burst_extra_ns = 30'000;
  bool enabled = false;

  void validate() const;
};

struct GovernorConfig {
  bool enabled = true;
  SimTime tick_ns = 12 * kNsPerMs;
  double up_threshold = 0.9;
  double down_threshold = 0.2;
  bool phase_random = true;
  // Consecutive high-load ticks required before stepping up one level.
  // 1 is the stock governor; larger values model under-clocking.
  int sustain_ticks_up = 1;

  void validate() const;
};

struct CmRandomDelay {
  SimTime max_ns = 50'000;
};
struct CmExtraBatch {
  SimTime interval_ns = 300'000;
};
struct CmReorderSpray {
  int queues_q = 4;
  SimTime jitter_max_ns = 50'000;
};
struct CmRateShape {
  double fraction_rho = 0.2;
  int burst_pkts = 1;
};
struct CmUnderclock {
  int sustain_ticks = 25;
};

using CountermeasureConfig = std::variant<CmRandomDelay, CmExtraBatch,
                                          CmReorderSpray, CmRateShape,
                                          CmUnderclock>;

const char* countermeasure_name(const CountermeasureConfig& cm);
void validate_countermeasure(const CountermeasureConfig& cm);

struct NfConfig {
  // Per-packet processing time at maximum frequency.
  SimTime base_service_ns = 5'000;
  // Relative speed factors, strictly increasing, last entry 1.0.
  std::vector<double> freq_levels = {0.46, 0.77, 1.0};
  GovernorConfig governor;
  int threads_k = 1;
  ThreadAssign thread_assign = ThreadAssign::kPerFlowHash;
  std::vector<CountermeasureConfig> countermeasures;
  int ingress_queue_cap = 16'384;

  void validate() const;
};

struct RouterConfig {
  // Time to generate one ICMP time-exceeded reply.
  SimTime icmp_processing_ns = 55'000;
  // Token-bucket limit on reply generation; 0 disables the limit.
  double icmp_rate_limit_pps = 0.0;
  int icmp_bucket_burst = 1;
  // Plain forwarding service time for transit packets.
  SimTime forward_ns = 0;

  void validate() const;
};

struct ReceiverConfig {
  // Timestamp quantization window; 0 records exact arrival times. With a
  // window, every recorded receive time is an integer multiple of it.
  SimTime batch_interval_ns = 0;

  void validate() const;
};

struct SenderConfig {
  double nominal_rate_pps = 1e6;
  // When on, the first slow_window_packets are emitted at
  // nominal/slow_factor, mimicking a sender that ramps its clock up only
  // after sustained load.
  bool sender_dvfs = false;
  double slow_factor = 8.0;
  int slow_window_packets = 1'000;

  void validate() const;
};

struct ScenarioConfig {
  LinkModel link;
  NfConfig nf;
  RouterConfig router;
  ReceiverConfig receiver;
  SenderConfig sender;
  NoiseModel noise;
  std::uint64_t seed = 1;

  void validate() const;
};

const char* packet_kind_name(PacketKind k);
PacketKind packet_kind_from_name(const std::string& s);
const char* thread_assign_name(ThreadAssign a);
ThreadAssign thread_assign_from_name(const std::string& s);

}  // namespace nfty
