#pragma once

#include <string>

#include "nfty/dispersion.hpp"
#include "nfty/experiment.hpp"
#include "nfty/packet.hpp"
#include "nfty/probe.hpp"

namespace nfty {

// Line-delimited trace dump, one row per packet
//   packet_id,flow_id,kind,size,ttl,t_sent,t_nf_in,t_nf_out,t_recv,thread_id,dropped_at
// (absent values are empty fields, times in ns), followed by one row per
// ICMP reply: icmp,orig_packet_id,router_hop,t_reply_arrival.
std::string trace_to_text(const Trace& trace);
Trace trace_from_text(const std::string& text);

// `index,value_ns` rows.
std::string series_to_text(const DispersionSeries& series);

// Key/value report block, one `key=value` per line.
std::string report_to_text(const EstimateReport& report);

std::string results_to_csv(const ResultsTable& table);
std::string results_to_table(const ResultsTable& table);

// JSON config documents.
std::string scenario_to_json(const ScenarioConfig& sc);
ScenarioConfig scenario_from_json(const std::string& text);
std::string probe_to_json(const ProbeSpec& probe);
ProbeSpec probe_from_json(const std::string& text);
ExperimentConfig experiment_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace nfty
