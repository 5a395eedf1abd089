#include "nfty/config.hpp"

#include <cmath>

namespace nfty {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

SimTime LinkModel::transmission_ns(std::int64_t size_bytes) const {
  double ns = static_cast<double>(size_bytes) * 8.0 * 1e9 / capacity_bps;
  SimTime t = std::llround(ns);
  return t > 0 ? t : 1;
}

void LinkModel::validate() const {
  require(capacity_bps > 0, "link.capacity_bps must be positive");
  require(propagation_ns >= 0, "link.propagation_ns must be non-negative");
  require(hop_count_before_nf >= 0,
          "link.hop_count_before_nf must be non-negative");
  require(hop_count_after_nf >= 1,
          "link.hop_count_after_nf must be at least 1");
  require(total_hops() < 255, "link hop counts must stay below 255");
}

void NoiseModel::validate() const {
  require(jitter_mean_ns >= 0, "noise.jitter_mean_ns must be non-negative");
  require(jitter_sigma_ns >= 0, "noise.jitter_sigma_ns must be non-negative");
  require(burst_prob_per_ms >= 0.0 && burst_prob_per_ms <= 1.0,
          "noise.burst_prob_per_ms must lie in [0,1]");
  require(burst_extra_ns >= 0, "noise.burst_extra_ns must be non-negative");
}

void GovernorConfig::validate() const {
  require(tick_ns > 0, "nf.governor.tick_ns must be positive");
  require(up_threshold > 0.0 && up_threshold <= 1.0,
          "nf.governor.up_threshold must lie in (0,1]");
  require(down_threshold >= 0.0 && down_threshold < 1.0,
          "nf.governor.down_threshold must lie in [0,1)");
  require(down_threshold < up_threshold,
          "nf.governor.down_threshold must be below up_threshold");
  require(sustain_ticks_up >= 1,
          "nf.governor.sustain_ticks_up must be at least 1");
}

const char* countermeasure_name(const CountermeasureConfig& cm) {
  struct Visitor {
    const char* operator()(const CmRandomDelay&) { return "RANDOM_DELAY"; }
    const char* operator()(const CmExtraBatch&) { return "EXTRA_BATCH"; }
    const char* operator()(const CmReorderSpray&) { return "REORDER_SPRAY"; }
    const char* operator()(const CmRateShape&) { return "RATE_SHAPE"; }
    const char* operator()(const CmUnderclock&) { return "UNDERCLOCK"; }
  };
  return std::visit(Visitor{}, cm);
}

void validate_countermeasure(const CountermeasureConfig& cm) {
  struct Visitor {
    void operator()(const CmRandomDelay& c) {
      require(c.max_ns >= 0, "countermeasure RANDOM_DELAY.max_ns must be >= 0");
    }
    void operator()(const CmExtraBatch& c) {
      require(c.interval_ns > 0,
              "countermeasure EXTRA_BATCH.interval_ns must be positive");
    }
    void operator()(const CmReorderSpray& c) {
      require(c.queues_q >= 1,
              "countermeasure REORDER_SPRAY.queues_q must be at least 1");
      require(c.jitter_max_ns >= 0,
              "countermeasure REORDER_SPRAY.jitter_max_ns must be >= 0");
    }
    void operator()(const CmRateShape& c) {
      require(c.fraction_rho > 0.0 && c.fraction_rho < 1.0,
              "countermeasure RATE_SHAPE.fraction_rho must lie in (0,1)");
      require(c.burst_pkts >= 1,
              "countermeasure RATE_SHAPE.burst_pkts must be at least 1");
    }
    void operator()(const CmUnderclock& c) {
      require(c.sustain_ticks >= 1,
              "countermeasure UNDERCLOCK.sustain_ticks must be at least 1");
    }
  };
  std::visit(Visitor{}, cm);
}

void NfConfig::validate() const {
  require(base_service_ns >= 0, "nf.base_service_ns must be non-negative");
  require(!freq_levels.empty(), "nf.freq_levels must not be empty");
  for (std::size_t i = 0; i < freq_levels.size(); ++i) {
    require(freq_levels[i] > 0.0 && freq_levels[i] <= 1.0,
            "nf.freq_levels entries must lie in (0,1]");
    if (i > 0)
      require(freq_levels[i] > freq_levels[i - 1],
              "nf.freq_levels must be strictly increasing");
  }
  require(freq_levels.back() == 1.0, "nf.freq_levels must end at 1.0");
  require(threads_k >= 1, "nf.threads_k must be at least 1");
  require(ingress_queue_cap >= 1, "nf.ingress_queue_cap must be at least 1");
  governor.validate();
  for (const auto& cm : countermeasures) validate_countermeasure(cm);
}

void RouterConfig::validate() const {
  require(forward_ns >= 0, "router.forward_ns must be non-negative");
  require(icmp_processing_ns > forward_ns,
          "router.icmp_processing_ns must exceed forward_ns");
  require(icmp_rate_limit_pps >= 0,
          "router.icmp_rate_limit_pps must be non-negative");
  require(icmp_bucket_burst >= 1,
          "router.icmp_bucket_burst must be at least 1");
}

void ReceiverConfig::validate() const {
  require(batch_interval_ns >= 0,
          "receiver.batch_interval_ns must be non-negative");
}

void SenderConfig::validate() const {
  require(nominal_rate_pps > 0, "sender.nominal_rate_pps must be positive");
  if (sender_dvfs)
    require(slow_factor > 1.0,
            "sender.slow_factor must exceed 1 when sender_dvfs is on");
  require(slow_window_packets >= 0,
          "sender.slow_window_packets must be non-negative");
}

void ScenarioConfig::validate() const {
  link.validate();
  nf.validate();
  router.validate();
  receiver.validate();
  sender.validate();
  noise.validate();
}

const char* packet_kind_name(PacketKind k) {
  return k == PacketKind::kUdp ? "UDP" : "TCP_SYN";
}

PacketKind packet_kind_from_name(const std::string& s) {
  if (s == "UDP") return PacketKind::kUdp;
  if (s == "TCP_SYN") return PacketKind::kTcpSyn;
  throw ConfigError("unknown packet kind: " + s);
}

const char* thread_assign_name(ThreadAssign a) {
  return a == ThreadAssign::kPerFlowHash ? "PER_FLOW_HASH" : "ROUND_ROBIN";
}

ThreadAssign thread_assign_from_name(const std::string& s) {
  if (s == "PER_FLOW_HASH") return ThreadAssign::kPerFlowHash;
  if (s == "ROUND_ROBIN") return ThreadAssign::kRoundRobin;
  throw ConfigError("unknown thread assignment policy: " + s);
}

}  // namespace nfty
