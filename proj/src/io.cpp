#include "nfty/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nfty/errors.hpp"
#include "nfty/presets.hpp"

namespace nfty {

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::string opt_time(const std::optional<SimTime>& t) {
  return t ? std::to_string(*t) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<SimTime> parse_opt_time(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stoll(s);
}

}  // namespace

std::string trace_to_text(const Trace& trace) {
  std::string out;
  out += fmt("# digest=%016" PRIx64 " seed=%" PRIu64 "\n",
             trace.scenario_digest, trace.seed);
  for (const auto& p : trace.packets) {
    out += std::to_string(p.packet_id);
    out += ',' + std::to_string(p.flow_id);
    out += ',';
    out += packet_kind_name(p.kind);
    out += ',' + std::to_string(p.size_bytes);
    out += ',' + std::to_string(p.ttl);
    out += ',' + std::to_string(p.t_sent);
    out += ',' + opt_time(p.t_nf_in);
    out += ',' + opt_time(p.t_nf_out);
    out += ',' + opt_time(p.t_recv);
    out += ',' + (p.thread_id ? std::to_string(*p.thread_id) : std::string());
    out += ',' + (p.dropped_at ? *p.dropped_at : std::string());
    out += '\n';
  }
  for (const auto& r : trace.icmp_replies)
    out += fmt("icmp,%lld,%d,%lld\n",
               static_cast<long long>(r.orig_packet_id), r.router_hop,
               static_cast<long long>(r.t_reply_arrival));
  return out;
}

Trace trace_from_text(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t d = line.find("digest=");
      std::size_t s = line.find("seed=");
      if (d != std::string::npos)
        trace.scenario_digest = std::stoull(line.substr(d + 7, 16), nullptr, 16);
      if (s != std::string::npos) trace.seed = std::stoull(line.substr(s + 5));
      continue;
    }
    auto f = split_csv(line);
    if (f[0] == "icmp") {
      if (f.size() != 4) throw DataError("malformed icmp row: " + line);
      trace.icmp_replies.push_back(IcmpReplyRecord{
          std::stoll(f[1]), std::stoi(f[2]), std::stoll(f[3])});
      continue;
    }
    if (f.size() != 11) throw DataError("malformed trace row: " + line);
    PacketRecord p;
    p.packet_id = std::stoll(f[0]);
    p.flow_id = std::stoull(f[1]);
    p.kind = packet_kind_from_name(f[2]);
    p.size_bytes = std::stoll(f[3]);
    p.ttl = std::stoi(f[4]);
    p.t_sent = std::stoll(f[5]);
    p.t_nf_in = parse_opt_time(f[6]);
    p.t_nf_out = parse_opt_time(f[7]);
    p.t_recv = parse_opt_time(f[8]);
    if (!f[9].empty()) p.thread_id = std::stoi(f[9]);
    if (!f[10].empty()) p.dropped_at = f[10];
    trace.packets.push_back(std::move(p));
  }
  return trace;
}

std::string series_to_text(const DispersionSeries& series) {
  std::string out = "index,value_ns\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (series.kind == SeriesKind::kTwoSidedConsecutive)
      out += fmt("%zu,%.0f\n", i, series.values[i]);
    else
      out += fmt("%zu,%.6f\n", i, series.values[i]);
  }
  return out;
}

std::string report_to_text(const EstimateReport& report) {
  std::string out;
  out += fmt("method=%s\n", method_name(report.method));
  out += fmt("capacity_pps=%.4f\n", report.capacity_pps);
  out += fmt("delta_star_ns=%.6f\n", report.delta_star_ns);
  out += fmt("packets_sent=%lld\n",
             static_cast<long long>(report.packets_sent));
  if (report.segmentation) {
    const auto& seg = *report.segmentation;
    out += fmt("segments=%zu\n", seg.segments.size());
    for (std::size_t i = 0; i < seg.segments.size(); ++i) {
      const auto& s = seg.segments[i];
      out += fmt("segment.%zu=%lld:%lld:%.6f\n", i,
                 static_cast<long long>(s.begin),
                 static_cast<long long>(s.end), s.mean);
    }
  }
  for (const auto& [k, v] : report.diagnostics)
    out += fmt("%s=%s\n", k.c_str(), v.c_str());
  return out;
}

namespace {

std::string csv_number(double v) {
  if (std::isinf(v)) return "inf";
  return fmt("%.4f", v);
}

}  // namespace

std::string results_to_csv(const ResultsTable& table) {
  bool overhead = false;
  for (const auto& r : table.rows) overhead |= r.overhead_pct.has_value();
  std::string out =
      "scenario,method,mdape_pct,err_p25,err_p75,packets_sent_median,runs,"
      "failures";
  if (overhead) out += ",overhead_pct";
  out += '\n';
  for (const auto& r : table.rows) {
    out += r.scenario + ',' + r.method;
    out += ',' + csv_number(r.mdape_pct);
    out += ',' + csv_number(r.err_p25_pct);
    out += ',' + csv_number(r.err_p75_pct);
    out += ',' + csv_number(r.packets_sent_median);
    out += ',' + std::to_string(r.runs);
    out += ',' + std::to_string(r.failures);
    if (overhead)
      out += ',' + (r.overhead_pct ? csv_number(*r.overhead_pct)
                                   : std::string("0.0000"));
    out += '\n';
  }
  return out;
}

std::string results_to_table(const ResultsTable& table) {
  bool overhead = false;
  for (const auto& r : table.rows) overhead |= r.overhead_pct.has_value();
  std::string out = fmt("%-28s %-12s %10s %10s %10s %10s %6s %6s", "scenario",
                        "method", "mdape%", "p25%", "p75%", "pkts_med", "runs",
                        "fail");
  if (overhead) out += fmt(" %10s", "overhead%");
  out += '\n';
  for (const auto& r : table.rows) {
    out += fmt("%-28s %-12s %10s %10s %10s %10s %6d %6d", r.scenario.c_str(),
               r.method.c_str(), csv_number(r.mdape_pct).c_str(),
               csv_number(r.err_p25_pct).c_str(),
               csv_number(r.err_p75_pct).c_str(),
               csv_number(r.packets_sent_median).c_str(), r.runs, r.failures);
    if (overhead)
      out += fmt(" %10s", r.overhead_pct
                              ? csv_number(*r.overhead_pct).c_str()
                              : "0.0000");
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON configuration documents
// ---------------------------------------------------------------------------

using nlohmann::json;

namespace {

json countermeasure_to_json(const CountermeasureConfig& cm) {
  json j;
  j["kind"] = countermeasure_name(cm);
  std::visit(
      [&j](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CmRandomDelay>) {
          j["max_ns"] = c.max_ns;
        } else if constexpr (std::is_same_v<T, CmExtraBatch>) {
          j["interval_ns"] = c.interval_ns;
        } else if constexpr (std::is_same_v<T, CmReorderSpray>) {
          j["queues_q"] = c.queues_q;
          j["jitter_max_ns"] = c.jitter_max_ns;
        } else if constexpr (std::is_same_v<T, CmRateShape>) {
          j["fraction_rho"] = c.fraction_rho;
          j["burst_pkts"] = c.burst_pkts;
        } else if constexpr (std::is_same_v<T, CmUnderclock>) {
          j["sustain_ticks"] = c.sustain_ticks;
        }
      },
      cm);
  return j;
}

CountermeasureConfig countermeasure_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "RANDOM_DELAY") {
    CmRandomDelay c;
    c.max_ns = j.value("max_ns", c.max_ns);
    return c;
  }
  if (kind == "EXTRA_BATCH") {
    CmExtraBatch c;
    c.interval_ns = j.value("interval_ns", c.interval_ns);
    return c;
  }
  if (kind == "REORDER_SPRAY") {
    CmReorderSpray c;
    c.queues_q = j.value("queues_q", c.queues_q);
    c.jitter_max_ns = j.value("jitter_max_ns", c.jitter_max_ns);
    return c;
  }
  if (kind == "RATE_SHAPE") {
    CmRateShape c;
    c.fraction_rho = j.value("fraction_rho", c.fraction_rho);
    c.burst_pkts = j.value("burst_pkts", c.burst_pkts);
    return c;
  }
  if (kind == "UNDERCLOCK") {
    CmUnderclock c;
    c.sustain_ticks = j.value("sustain_ticks", c.sustain_ticks);
    return c;
  }
  throw ConfigError("unknown countermeasure kind: " + kind);
}

json scenario_to_json_obj(const ScenarioConfig& sc) {
  json j;
  j["link"] = {{"capacity_bps", sc.link.capacity_bps},
               {"propagation_ns", sc.link.propagation_ns},
               {"hop_count_before_nf", sc.link.hop_count_before_nf},
               {"hop_count_after_nf", sc.link.hop_count_after_nf}};
  j["nf"] = {{"base_service_ns", sc.nf.base_service_ns},
             {"freq_levels", sc.nf.freq_levels},
             {"threads_k", sc.nf.threads_k},
             {"thread_assign", thread_assign_name(sc.nf.thread_assign)},
             {"ingress_queue_cap", sc.nf.ingress_queue_cap}};
  j["nf"]["governor"] = {{"enabled", sc.nf.governor.enabled},
                         {"tick_ns", sc.nf.governor.tick_ns},
                         {"up_threshold", sc.nf.governor.up_threshold},
                         {"down_threshold", sc.nf.governor.down_threshold},
                         {"phase_random", sc.nf.governor.phase_random},
                         {"sustain_ticks_up", sc.nf.governor.sustain_ticks_up}};
  json cms = json::array();
  for (const auto& cm : sc.nf.countermeasures)
    cms.push_back(countermeasure_to_json(cm));
  j["nf"]["countermeasures"] = cms;
  j["router"] = {{"icmp_processing_ns", sc.router.icmp_processing_ns},
                 {"icmp_rate_limit_pps", sc.router.icmp_rate_limit_pps},
                 {"icmp_bucket_burst", sc.router.icmp_bucket_burst},
                 {"forward_ns", sc.router.forward_ns}};
  j["receiver"] = {{"batch_interval_ns", sc.receiver.batch_interval_ns}};
  j["sender"] = {{"nominal_rate_pps", sc.sender.nominal_rate_pps},
                 {"sender_dvfs", sc.sender.sender_dvfs},
                 {"slow_factor", sc.sender.slow_factor},
                 {"slow_window_packets", sc.sender.slow_window_packets}};
  j["noise"] = {{"jitter_mean_ns", sc.noise.jitter_mean_ns},
                {"jitter_sigma_ns", sc.noise.jitter_sigma_ns},
                {"burst_prob_per_ms", sc.noise.burst_prob_per_ms},
                {"burst_extra_ns", sc.noise.burst_extra_ns},
                {"enabled", sc.noise.enabled}};
  j["seed"] = sc.seed;
  return j;
}

ScenarioConfig scenario_from_json_obj(const json& j) {
  ScenarioConfig sc;
  if (j.contains("preset")) sc = scenario_preset(j.at("preset"));
  if (j.contains("link")) {
    const auto& l = j.at("link");
    sc.link.capacity_bps = l.value("capacity_bps", sc.link.capacity_bps);
    sc.link.propagation_ns = l.value("propagation_ns", sc.link.propagation_ns);
    sc.link.hop_count_before_nf =
        l.value("hop_count_before_nf", sc.link.hop_count_before_nf);
    sc.link.hop_count_after_nf =
        l.value("hop_count_after_nf", sc.link.hop_count_after_nf);
  }
  if (j.contains("nf")) {
    const auto& n = j.at("nf");
    sc.nf.base_service_ns = n.value("base_service_ns", sc.nf.base_service_ns);
    if (n.contains("freq_levels"))
      sc.nf.freq_levels = n.at("freq_levels").get<std::vector<double>>();
    sc.nf.threads_k = n.value("threads_k", sc.nf.threads_k);
    if (n.contains("thread_assign"))
      sc.nf.thread_assign = thread_assign_from_name(n.at("thread_assign"));
    sc.nf.ingress_queue_cap =
        n.value("ingress_queue_cap", sc.nf.ingress_queue_cap);
    if (n.contains("governor")) {
      const auto& g = n.at("governor");
      sc.nf.governor.enabled = g.value("enabled", sc.nf.governor.enabled);
      sc.nf.governor.tick_ns = g.value("tick_ns", sc.nf.governor.tick_ns);
      sc.nf.governor.up_threshold =
          g.value("up_threshold", sc.nf.governor.up_threshold);
      sc.nf.governor.down_threshold =
          g.value("down_threshold", sc.nf.governor.down_threshold);
      sc.nf.governor.phase_random =
          g.value("phase_random", sc.nf.governor.phase_random);
      sc.nf.governor.sustain_ticks_up =
          g.value("sustain_ticks_up", sc.nf.governor.sustain_ticks_up);
    }
    if (n.contains("countermeasures"))
      for (const auto& cm : n.at("countermeasures"))
        sc.nf.countermeasures.push_back(countermeasure_from_json(cm));
  }
  if (j.contains("router")) {
    const auto& r = j.at("router");
    sc.router.icmp_processing_ns =
        r.value("icmp_processing_ns", sc.router.icmp_processing_ns);
    sc.router.icmp_rate_limit_pps =
        r.value("icmp_rate_limit_pps", sc.router.icmp_rate_limit_pps);
    sc.router.icmp_bucket_burst =
        r.value("icmp_bucket_burst", sc.router.icmp_bucket_burst);
    sc.router.forward_ns = r.value("forward_ns", sc.router.forward_ns);
  }
  if (j.contains("receiver"))
    sc.receiver.batch_interval_ns =
        j.at("receiver").value("batch_interval_ns",
                               sc.receiver.batch_interval_ns);
  if (j.contains("sender")) {
    const auto& s = j.at("sender");
    sc.sender.nominal_rate_pps =
        s.value("nominal_rate_pps", sc.sender.nominal_rate_pps);
    sc.sender.sender_dvfs = s.value("sender_dvfs", sc.sender.sender_dvfs);
    sc.sender.slow_factor = s.value("slow_factor", sc.sender.slow_factor);
    sc.sender.slow_window_packets =
        s.value("slow_window_packets", sc.sender.slow_window_packets);
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    sc.noise.jitter_mean_ns = n.value("jitter_mean_ns", sc.noise.jitter_mean_ns);
    sc.noise.jitter_sigma_ns =
        n.value("jitter_sigma_ns", sc.noise.jitter_sigma_ns);
    sc.noise.burst_prob_per_ms =
        n.value("burst_prob_per_ms", sc.noise.burst_prob_per_ms);
    sc.noise.burst_extra_ns = n.value("burst_extra_ns", sc.noise.burst_extra_ns);
    sc.noise.enabled = n.value("enabled", sc.noise.enabled);
  }
  sc.seed = j.value("seed", sc.seed);
  sc.validate();
  return sc;
}

json probe_to_json_obj(const ProbeSpec& p) {
  json j;
  j["length"] = p.length;
  j["rate_pps"] = p.rate_pps;
  j["kind"] = packet_kind_name(p.kind);
  j["size_bytes"] = p.size_bytes;
  j["n_flows"] = p.flow_policy.n_flows;
  j["default_ttl"] = p.default_ttl;
  if (p.ttl_gap) j["ttl_gap"] = *p.ttl_gap;
  if (p.expire_hop) j["expire_hop"] = *p.expire_hop;
  return j;
}

ProbeSpec probe_from_json_obj(const json& j, const LinkModel& link) {
  std::int64_t length = j.value("length", 100);
  double rate = j.value("rate_pps", 1e6);
  if (j.contains("ttl_gap")) {
    int gap = j.at("ttl_gap");
    int expire = j.contains("expire_hop")
                     ? j.at("expire_hop").get<int>()
                     : link.hop_count_before_nf + 4;
    ProbeSpec p = build_one_sided_probe(length, gap, expire, rate, link);
    if (j.contains("kind")) p.kind = packet_kind_from_name(j.at("kind"));
    p.size_bytes = j.value("size_bytes", p.size_bytes);
    return p;
  }
  ProbeSpec p = build_two_sided_probe(
      length, rate, FlowPolicy::spray(j.value("n_flows", 1)));
  if (j.contains("kind")) p.kind = packet_kind_from_name(j.at("kind"));
  p.size_bytes = j.value("size_bytes", p.size_bytes);
  p.default_ttl = j.value("default_ttl", p.default_ttl);
  return p;
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& sc) {
  return scenario_to_json_obj(sc).dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text) {
  return scenario_from_json_obj(json::parse(text));
}

std::string probe_to_json(const ProbeSpec& probe) {
  return probe_to_json_obj(probe).dump(2) + "\n";
}

ProbeSpec probe_from_json(const std::string& text) {
  return probe_from_json_obj(json::parse(text), LinkModel{});
}

ExperimentConfig experiment_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("scenario")) {
    cfg.scenario = scenario_from_json_obj(j.at("scenario"));
    if (j.at("scenario").contains("preset"))
      cfg.scenario_name = j.at("scenario").at("preset");
  } else if (j.contains("scenario_preset")) {
    cfg.scenario_name = j.at("scenario_preset");
    cfg.scenario = scenario_preset(cfg.scenario_name);
  } else {
    throw ConfigError("experiment needs scenario or scenario_preset");
  }
  cfg.scenario_name = j.value("scenario_name", cfg.scenario_name);
  if (!j.contains("methods")) throw ConfigError("experiment.methods missing");
  for (const auto& m : j.at("methods"))
    cfg.methods.push_back(method_from_name(m));
  if (j.contains("probe")) {
    cfg.probe = probe_from_json_obj(j.at("probe"), cfg.scenario.link);
  } else if (j.contains("plan")) {
    const auto& p = j.at("plan");
    PlanContext ctx;
    std::string tm = p.value("threat_model", "TWO_SIDED");
    ctx.threat_model = tm == "ONE_SIDED" ? ThreatModel::kOneSided
                                         : ThreatModel::kTwoSided;
    std::string dv = p.value("dvfs_expected", "UNKNOWN");
    ctx.dvfs_expected = dv == "YES"  ? TriState::kYes
                        : dv == "NO" ? TriState::kNo
                                     : TriState::kUnknown;
    if (p.contains("threads_k_est")) ctx.threads_k_est = p.at("threads_k_est");
    if (p.contains("batch_interval_est_ns"))
      ctx.batch_interval_est_ns = p.at("batch_interval_est_ns");
    if (p.contains("g_ttl")) ctx.g_ttl = p.at("g_ttl");
    if (p.contains("send_rate_est_pps"))
      ctx.send_rate_est_pps = p.at("send_rate_est_pps");
    ctx.c1 = p.value("c1", ctx.c1);
    ctx.c = p.value("c", ctx.c);
    ctx.dvfs_default_length = p.value("dvfs_default_L", ctx.dvfs_default_length);
    cfg.probe = ctx;
  } else {
    throw ConfigError("experiment needs probe or plan");
  }
  cfg.runs = j.value("runs", cfg.runs);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  if (j.contains("truth_pps")) cfg.truth_pps = j.at("truth_pps");
  if (j.contains("countermeasures"))
    for (const auto& cm : j.at("countermeasures"))
      cfg.countermeasure_grid.push_back(countermeasure_from_json(cm));
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

}  // namespace nfty
