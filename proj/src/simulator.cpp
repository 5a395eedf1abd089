#include "nfty/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "nfty/nf_models.hpp"
#include "nfty/rng.hpp"

namespace nfty {

namespace {

void hash_u64(std::uint64_t& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h = splitmix64(h);
}

void hash_f64(std::uint64_t& h, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  hash_u64(h, bits);
}

}  // namespace

std::uint64_t scenario_digest(const ScenarioConfig& s) {
  std::uint64_t h = fnv1a64("scenario");
  hash_f64(h, s.link.capacity_bps);
  hash_u64(h, static_cast<std::uint64_t>(s.link.propagation_ns));
  hash_u64(h, static_cast<std::uint64_t>(s.link.hop_count_before_nf));
  hash_u64(h, static_cast<std::uint64_t>(s.link.hop_count_after_nf));
  hash_u64(h, static_cast<std::uint64_t>(s.nf.base_service_ns));
  for (double f : s.nf.freq_levels) hash_f64(h, f);
  hash_u64(h, s.nf.governor.enabled);
  hash_u64(h, static_cast<std::uint64_t>(s.nf.governor.tick_ns));
  hash_f64(h, s.nf.governor.up_threshold);
  hash_f64(h, s.nf.governor.down_threshold);
  hash_u64(h, s.nf.governor.phase_random);
  hash_u64(h, static_cast<std::uint64_t>(s.nf.governor.sustain_ticks_up));
  hash_u64(h, static_cast<std::uint64_t>(s.nf.threads_k));
  hash_u64(h, static_cast<std::uint64_t>(s.nf.thread_assign));
  hash_u64(h, static_cast<std::uint64_t>(s.nf.ingress_queue_cap));
  for (const auto& cm : s.nf.countermeasures) {
    hash_u64(h, fnv1a64(countermeasure_name(cm)));
    std::visit(
        [&h](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, CmRandomDelay>) {
            hash_u64(h, static_cast<std::uint64_t>(c.max_ns));
          } else if constexpr (std::is_same_v<T, CmExtraBatch>) {
            hash_u64(h, static_cast<std::uint64_t>(c.interval_ns));
          } else if constexpr (std::is_same_v<T, CmReorderSpray>) {
            hash_u64(h, static_cast<std::uint64_t>(c.queues_q));
            hash_u64(h, static_cast<std::uint64_t>(c.jitter_max_ns));
          } else if constexpr (std::is_same_v<T, CmRateShape>) {
            hash_f64(h, c.fraction_rho);
            hash_u64(h, static_cast<std::uint64_t>(c.burst_pkts));
          } else if constexpr (std::is_same_v<T, CmUnderclock>) {
            hash_u64(h, static_cast<std::uint64_t>(c.sustain_ticks));
          }
        },
        cm);
  }
  hash_u64(h, static_cast<std::uint64_t>(s.router.icmp_processing_ns));
  hash_f64(h, s.router.icmp_rate_limit_pps);
  hash_u64(h, static_cast<std::uint64_t>(s.router.icmp_bucket_burst));
  hash_u64(h, static_cast<std::uint64_t>(s.router.forward_ns));
  hash_u64(h, static_cast<std::uint64_t>(s.receiver.batch_interval_ns));
  hash_f64(h, s.sender.nominal_rate_pps);
  hash_u64(h, s.sender.sender_dvfs);
  hash_f64(h, s.sender.slow_factor);
  hash_u64(h, static_cast<std::uint64_t>(s.sender.slow_window_packets));
  hash_f64(h, s.noise.jitter_mean_ns);
  hash_f64(h, s.noise.jitter_sigma_ns);
  hash_f64(h, s.noise.burst_prob_per_ms);
  hash_u64(h, static_cast<std::uint64_t>(s.noise.burst_extra_ns));
  hash_u64(h, s.noise.enabled);
  hash_u64(h, s.seed);
  return h;
}

std::int64_t Trace::received_count() const {
  std::int64_t n = 0;
  for (const auto& p : packets) n += p.received();
  return n;
}

std::int64_t Trace::dropped_count() const {
  std::int64_t n = 0;
  for (const auto& p : packets) n += p.dropped_at.has_value();
  return n;
}

namespace {

enum EventKind : int {
  kNfArrival = 0,     // ingress
  kServiceDone = 1,   // service
  kHopArrival = 2,    // egress / path
  kDelivery = 3,      // receiver or ICMP reply at sender
  kGovernorTick = 4,
};

struct Event {
  SimTime t;
  int prio;
  std::int64_t tie;  // packet id where applicable
  EventKind kind;
  std::int64_t pkt;
  int hop;  // hop index for kHopArrival / reply origin, -1 otherwise

  bool operator>(const Event& o) const {
    if (t != o.t) return t > o.t;
    if (prio != o.prio) return prio > o.prio;
    return tie > o.tie;
  }
};

struct NfThread {
  std::deque<std::int64_t> queue;
  bool serving = false;
  SimTime service_start = 0;
  SimTime service_dur = 0;
  SimTime completed_busy = 0;

  SimTime cum_busy(SimTime now) const {
    return completed_busy + (serving ? now - service_start : 0);
  }
};

struct HopState {
  SimTime forward_free = 0;
  SimTime icmp_free = 0;
  TokenBucket icmp_bucket;

  explicit HopState(const RouterConfig& r)
      : icmp_bucket(r.icmp_rate_limit_pps, r.icmp_bucket_burst) {}
};

// NF egress transforms configured as countermeasures, applied in order to
// each service-completion time. UNDERCLOCK is excluded here; it rewrites the
// governor instead.
class EgressPipeline {
 public:
  EgressPipeline(const NfConfig& nf, std::uint64_t seed) {
    double analytic = nf.base_service_ns > 0
                          ? static_cast<double>(nf.threads_k) * 1e9 /
                                static_cast<double>(nf.base_service_ns)
                          : 0.0;
    int idx = 0;
    for (const auto& cm : nf.countermeasures) {
      std::string label = "cm" + std::to_string(idx++);
      if (std::holds_alternative<CmRandomDelay>(cm)) {
        stages_.push_back(Stage{cm, StageRng(seed, label), {}, {}, 0});
      } else if (std::holds_alternative<CmReorderSpray>(cm)) {
        Stage st{cm, StageRng(seed, label), {}, {}, 0};
        st.queue_last.assign(
            static_cast<std::size_t>(std::get<CmReorderSpray>(cm).queues_q), 0);
        stages_.push_back(std::move(st));
      } else if (std::holds_alternative<CmRateShape>(cm)) {
        Stage st{cm, StageRng(seed, label), {}, {}, 0};
        st.shape_rate = std::get<CmRateShape>(cm).fraction_rho * analytic;
        stages_.push_back(std::move(st));
      } else if (std::holds_alternative<CmExtraBatch>(cm)) {
        stages_.push_back(Stage{cm, StageRng(seed, label), {}, {}, 0});
      }
      // CmUnderclock handled at governor construction.
    }
  }

  SimTime release(SimTime completion, std::uint64_t flow,
                  std::int64_t packet_id) {
    SimTime t = completion;
    for (auto& st : stages_) {
      if (const auto* rd = std::get_if<CmRandomDelay>(&st.cfg)) {
        t += std::llround(st.rng.uniform(static_cast<std::uint64_t>(packet_id)) *
                          static_cast<double>(rd->max_ns));
      } else if (const auto* eb = std::get_if<CmExtraBatch>(&st.cfg)) {
        SimTime i = eb->interval_ns;
        t = ((t + i - 1) / i) * i;
      } else if (const auto* rs = std::get_if<CmReorderSpray>(&st.cfg)) {
        std::size_t q = static_cast<std::size_t>(st.rr_counter++) %
                        st.queue_last.size();
        t += std::llround(st.rng.uniform(static_cast<std::uint64_t>(packet_id)) *
                          static_cast<double>(rs->jitter_max_ns));
        t = std::max(t, st.queue_last[q]);  // sub-queues stay FIFO
        st.queue_last[q] = t;
      } else if (const auto* sh = std::get_if<CmRateShape>(&st.cfg)) {
        auto it = st.shapers.find(flow);
        if (it == st.shapers.end())
          it = st.shapers
                   .emplace(flow, TokenShaper(st.shape_rate, sh->burst_pkts))
                   .first;
        t = it->second.release_time(t);
      }
    }
    return t;
  }

 private:
  struct Stage {
    CountermeasureConfig cfg;
    StageRng rng;
    std::vector<SimTime> queue_last;          // REORDER_SPRAY
    std::map<std::uint64_t, TokenShaper> shapers;  // RATE_SHAPE, per flow
    std::int64_t rr_counter = 0;
    double shape_rate = 0.0;
  };
  std::vector<Stage> stages_;
};

class Engine {
 public:
  Engine(const ScenarioConfig& scenario, std::uint64_t seed)
      : sc_(scenario),
        seed_(seed),
        noise_path_(seed, "noise_path"),
        noise_icmp_(seed, "noise_icmp"),
        noise_burst_(seed, "noise_burst"),
        gov_rng_(seed, "governor"),
        egress_(scenario.nf, seed),
        governor_(scenario.nf.governor,
                  static_cast<int>(scenario.nf.freq_levels.size()),
                  underclock_sustain(scenario.nf)) {
    threads_.resize(static_cast<std::size_t>(sc_.nf.threads_k));
    hops_.assign(static_cast<std::size_t>(sc_.link.total_hops()),
                 HopState(sc_.router));
    if (!sc_.nf.governor.enabled)
      pinned_level_ = static_cast<int>(sc_.nf.freq_levels.size()) - 1;
  }

  // Takes ownership of the pre-filled packet records (t_sent set).
  Trace run(std::vector<PacketRecord> packets, SimTime hard_stop) {
    trace_.packets = std::move(packets);
    trace_.seed = seed_;
    trace_.scenario_digest = scenario_digest(sc_);
    live_ = static_cast<std::int64_t>(trace_.packets.size());

    for (const auto& p : trace_.packets) {
      SimTime t_first = p.t_sent + sc_.link.propagation_ns;
      if (sc_.link.hop_count_before_nf >= 1)
        push(Event{t_first, kHopArrival, p.packet_id, kHopArrival, p.packet_id,
                   1});
      else
        push(Event{t_first, kNfArrival, p.packet_id, kNfArrival, p.packet_id,
                   -1});
    }
    if (sc_.nf.governor.enabled) {
      SimTime phase = 0;
      if (sc_.nf.governor.phase_random)
        phase = std::llround(gov_rng_.uniform(0) *
                             static_cast<double>(sc_.nf.governor.tick_ns));
      push(Event{phase, kGovernorTick, std::numeric_limits<std::int64_t>::max(),
                 kGovernorTick, -1, -1});
    }

    while (!heap_.empty()) {
      Event ev = heap_.top();
      if (ev.t > hard_stop) break;
      heap_.pop();
      dispatch(ev);
    }
    trace_.max_freq_level =
        sc_.nf.governor.enabled ? governor_.max_level_seen() : pinned_level_;
    return std::move(trace_);
  }

 private:
  static int underclock_sustain(const NfConfig& nf) {
    int sustain = 0;
    for (const auto& cm : nf.countermeasures)
      if (const auto* uc = std::get_if<CmUnderclock>(&cm))
        sustain = std::max(sustain, uc->sustain_ticks);
    return sustain;
  }

  void push(Event e) { heap_.push(e); }

  int current_level() const {
    return sc_.nf.governor.enabled ? governor_.level() : pinned_level_;
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case kHopArrival: on_hop_arrival(ev); break;
      case kNfArrival: on_nf_arrival(ev); break;
      case kServiceDone: on_service_done(ev); break;
      case kDelivery: on_delivery(ev); break;
      case kGovernorTick: on_governor_tick(ev); break;
    }
  }

  // Path position: hops 1..B sit before the NF, B+1..H after it. A packet
  // leaving hop B enters the NF; a packet leaving hop H reaches the receiver.
  void on_hop_arrival(const Event& ev) {
    PacketRecord& p = trace_.packets[static_cast<std::size_t>(ev.pkt)];
    int h = ev.hop;
    HopState& hop = hops_[static_cast<std::size_t>(h - 1)];
    if (p.ttl == h) {
      drop(p, "hop" + std::to_string(h));
      if (hop.icmp_bucket.try_take(ev.t)) {
        hop.icmp_free = std::max(hop.icmp_free, ev.t) +
                        sc_.router.icmp_processing_ns;
        SimTime back = hop.icmp_free +
                       static_cast<SimTime>(h) * sc_.link.propagation_ns +
                       delivery_noise(noise_icmp_, p.packet_id, hop.icmp_free);
        push(Event{back, kDelivery, p.packet_id, kDelivery, p.packet_id, h});
      } else {
        ++trace_.drops_by_stage["icmp_rate_limited"];
      }
      return;
    }
    SimTime depart = std::max(ev.t, hop.forward_free) + sc_.router.forward_ns;
    hop.forward_free = depart;
    if (h == sc_.link.hop_count_before_nf) {
      push(Event{depart + sc_.link.propagation_ns, kNfArrival, p.packet_id,
                 kNfArrival, p.packet_id, -1});
    } else if (h == sc_.link.total_hops()) {
      SimTime arr = depart + sc_.link.propagation_ns +
                    delivery_noise(noise_path_, p.packet_id, depart);
      push(Event{arr, kDelivery, p.packet_id, kDelivery, p.packet_id, -1});
    } else {
      push(Event{depart + sc_.link.propagation_ns, kHopArrival, p.packet_id,
                 kHopArrival, p.packet_id, h + 1});
    }
  }

  void on_nf_arrival(const Event& ev) {
    PacketRecord& p = trace_.packets[static_cast<std::size_t>(ev.pkt)];
    if (queued_total_ >= sc_.nf.ingress_queue_cap) {
      drop(p, "nf_queue");
      return;
    }
    p.t_nf_in = ev.t;
    int tid = assign_thread(sc_.nf.thread_assign, p.flow_id, p.packet_id,
                            sc_.nf.threads_k);
    p.thread_id = tid;
    NfThread& th = threads_[static_cast<std::size_t>(tid)];
    th.queue.push_back(p.packet_id);
    ++queued_total_;
    if (!th.serving) start_service(tid, ev.t);
  }

  void start_service(int tid, SimTime now) {
    NfThread& th = threads_[static_cast<std::size_t>(tid)];
    std::int64_t pkt = th.queue.front();
    th.queue.pop_front();
    --queued_total_;
    th.serving = true;
    th.service_start = now;
    th.service_dur = nf_service_time(sc_.nf, current_level());
    push(Event{now + th.service_dur, kServiceDone, pkt, kServiceDone, pkt,
               tid});
  }

  void on_service_done(const Event& ev) {
    PacketRecord& p = trace_.packets[static_cast<std::size_t>(ev.pkt)];
    NfThread& th = threads_[static_cast<std::size_t>(ev.hop)];
    th.serving = false;
    th.completed_busy += th.service_dur;
    SimTime release = egress_.release(ev.t, p.flow_id, p.packet_id);
    p.t_nf_out = release;
    push(Event{release + sc_.link.propagation_ns, kHopArrival, p.packet_id,
               kHopArrival, p.packet_id, sc_.link.hop_count_before_nf + 1});
    if (!th.queue.empty()) start_service(ev.hop, ev.t);
  }

  void on_delivery(const Event& ev) {
    PacketRecord& p = trace_.packets[static_cast<std::size_t>(ev.pkt)];
    if (ev.hop >= 1) {  // ICMP reply back at the sender
      trace_.icmp_replies.push_back(
          IcmpReplyRecord{p.packet_id, ev.hop, ev.t});
      return;
    }
    SimTime b = sc_.receiver.batch_interval_ns;
    p.t_recv = b > 0 ? ((ev.t + b - 1) / b) * b : ev.t;
    --live_;
  }

  void on_governor_tick(const Event& ev) {
    SimTime window = sc_.nf.governor.tick_ns;
    SimTime cum = 0;
    for (const auto& th : threads_) cum += th.cum_busy(ev.t);
    double busy = static_cast<double>(cum - busy_snapshot_) /
                  (static_cast<double>(window) *
                   static_cast<double>(sc_.nf.threads_k));
    busy_snapshot_ = cum;
    governor_.tick(busy);
    if (live_ > 0)
      push(Event{ev.t + window, kGovernorTick,
                 std::numeric_limits<std::int64_t>::max(), kGovernorTick, -1,
                 -1});
  }

  SimTime delivery_noise(const StageRng& rng, std::int64_t packet_id,
                         SimTime when) {
    if (!sc_.noise.enabled) return 0;
    SimTime j = std::llround(rng.lognormal(static_cast<std::uint64_t>(packet_id),
                                           sc_.noise.jitter_mean_ns,
                                           sc_.noise.jitter_sigma_ns));
    std::uint64_t bucket = static_cast<std::uint64_t>(when / kNsPerMs);
    if (noise_burst_.uniform(bucket) < sc_.noise.burst_prob_per_ms)
      j += sc_.noise.burst_extra_ns;
    return j;
  }

  void drop(PacketRecord& p, const std::string& stage) {
    p.dropped_at = stage;
    ++trace_.drops_by_stage[stage];
    --live_;
  }

  const ScenarioConfig& sc_;
  std::uint64_t seed_;
  StageRng noise_path_, noise_icmp_, noise_burst_, gov_rng_;
  EgressPipeline egress_;
  GovernorState governor_;
  int pinned_level_ = 0;

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> heap_;
  std::vector<NfThread> threads_;
  std::vector<HopState> hops_;
  int queued_total_ = 0;
  std::int64_t live_ = 0;
  SimTime busy_snapshot_ = 0;
  Trace trace_;
};

// Sender-side emission: intended times follow the probe rate capped by the
// sender's own rate; the NIC then serializes packets at wire speed. With
// sender DVFS on, the first slow_window_packets are emitted slower by
// slow_factor.
std::vector<PacketRecord> emit_packets(const ScenarioConfig& sc,
                                       const ProbeSpec& probe) {
  double rate = std::min(probe.rate_pps, sc.sender.nominal_rate_pps);
  double gap = 1e9 / rate;
  SimTime t_tr = sc.link.transmission_ns(probe.size_bytes);
  std::vector<PacketRecord> pkts(static_cast<std::size_t>(probe.length));
  double emit_clock = 0.0;
  SimTime nic_free = 0;
  for (std::int64_t i = 0; i < probe.length; ++i) {
    PacketRecord& p = pkts[static_cast<std::size_t>(i)];
    p.packet_id = i;
    p.flow_id = probe.flow_of(i);
    p.kind = probe.kind;
    p.size_bytes = probe.size_bytes;
    p.ttl = probe.ttl_of(i);
    double g = gap;
    if (sc.sender.sender_dvfs && i < sc.sender.slow_window_packets)
      g = gap * sc.sender.slow_factor;
    SimTime emit = std::llround(emit_clock);
    emit_clock += g;
    SimTime start = std::max(emit, nic_free);
    nic_free = start + t_tr;
    p.t_sent = nic_free;
  }
  return pkts;
}

}  // namespace

Trace run_simulation(const ScenarioConfig& scenario, const ProbeSpec& probe,
                     std::uint64_t seed) {
  scenario.validate();
  probe.validate(scenario.link);
  Engine engine(scenario, seed);
  return engine.run(emit_packets(scenario, probe),
                    std::numeric_limits<SimTime>::max());
}

FloodStats run_flood(const ScenarioConfig& scenario, double rate_pps,
                     SimTime duration, std::uint64_t seed) {
  scenario.validate();
  if (rate_pps <= 0) throw ConfigError("flood rate_pps must be positive");
  if (static_cast<double>(duration) < 10.0 * 1e9 / rate_pps)
    throw ConfigError("flood duration must cover at least 10 packets");

  // Spray over flow ids that hash to distinct threads so the flood can
  // saturate the whole NF, not just one thread.
  std::vector<std::uint64_t> flows{0};
  if (scenario.nf.thread_assign == ThreadAssign::kPerFlowHash &&
      scenario.nf.threads_k > 1)
    flows = FlowPolicy::spray_covering(scenario.nf.threads_k).flow_ids;

  double gap = 1e9 / rate_pps;
  SimTime t_tr = scenario.link.transmission_ns(64);
  std::int64_t count = static_cast<std::int64_t>(
      std::floor(static_cast<double>(duration) / gap)) + 1;
  std::vector<PacketRecord> pkts(static_cast<std::size_t>(count));
  SimTime nic_free = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    PacketRecord& p = pkts[static_cast<std::size_t>(i)];
    p.packet_id = i;
    p.flow_id = flows[static_cast<std::size_t>(i) % flows.size()];
    p.size_bytes = 64;
    p.ttl = 64;
    SimTime emit = std::llround(static_cast<double>(i) * gap);
    SimTime start = std::max(emit, nic_free);
    nic_free = start + t_tr;
    p.t_sent = nic_free;
  }

  Engine engine(scenario, seed);
  Trace trace = engine.run(std::move(pkts), duration + 5 * kNsPerMs);

  FloodStats st;
  st.sent = count;
  st.max_freq_level = trace.max_freq_level;
  SimTime half = duration / 2;
  for (const auto& p : trace.packets) {
    if (p.received() && *p.t_recv <= duration) {
      ++st.delivered;
      if (*p.t_recv > half) ++st.delivered_second_half;
    }
    if (p.dropped_at) {
      ++st.dropped;
      SimTime when = p.t_nf_in ? *p.t_nf_in : p.t_sent;
      if (when > half) ++st.drops_second_half;
    }
  }
  st.delivered_rate_pps =
      static_cast<double>(st.delivered) * 1e9 / static_cast<double>(duration);
  st.second_half_rate_pps = static_cast<double>(st.delivered_second_half) *
                            1e9 / static_cast<double>(duration - half);
  return st;
}

}  // namespace nfty
