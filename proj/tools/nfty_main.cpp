#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "nfty/errors.hpp"
#include "nfty/estimators.hpp"
#include "nfty/experiment.hpp"
#include "nfty/io.hpp"
#include "nfty/planner.hpp"
#include "nfty/presets.hpp"
#include "nfty/probe.hpp"
#include "nfty/simulator.hpp"

namespace {

using namespace nfty;

ScenarioConfig load_scenario(const std::string& ref) {
  for (const auto& name : preset_names())
    if (ref == name) return scenario_preset(ref);
  return scenario_from_json(read_file(ref));
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::fputs(content.c_str(), stdout);
  else
    write_file(out_path, content);
}

int run(int argc, char** argv) {
  CLI::App app{"Capacity-probing lab for network functions: simulate probes "
               "against a modeled NF path and evaluate estimators"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "Write output to this file instead of stdout")
      ->capture_default_str();

  // plan ---------------------------------------------------------------
  auto* plan_cmd = app.add_subcommand("plan", "Recommend a probe length");
  std::string threat = "TWO_SIDED", dvfs = "UNKNOWN";
  int plan_threads = 0, plan_gttl = 0;
  std::int64_t plan_batch = 0;
  double plan_rate = 0.0;
  plan_cmd->add_option("--threat-model", threat, "ONE_SIDED or TWO_SIDED")
      ->capture_default_str();
  plan_cmd->add_option("--dvfs", dvfs, "YES, NO or UNKNOWN")
      ->capture_default_str();
  plan_cmd->add_option("--threads", plan_threads, "Thread count, if known");
  plan_cmd->add_option("--batch-ns", plan_batch, "Batch interval, if known");
  plan_cmd->add_option("--g-ttl", plan_gttl, "TTL gap (one-sided)");
  plan_cmd->add_option("--send-rate", plan_rate, "Attacker send rate (pps)");

  // simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "Run one probe, dump the trace");
  std::string sim_scenario, sim_probe;
  std::uint64_t sim_seed = 1;
  std::int64_t sim_length = 100;
  int sim_gttl = 0, sim_expire = 0, sim_flows = 1;
  double sim_rate = 1e6;
  sim_cmd->add_option("--scenario", sim_scenario,
                      "Preset name or scenario JSON file")->required();
  sim_cmd->add_option("--probe", sim_probe, "Probe JSON file");
  sim_cmd->add_option("--length", sim_length, "Probe length")
      ->capture_default_str();
  sim_cmd->add_option("--rate", sim_rate, "Probe rate (pps)")
      ->capture_default_str();
  sim_cmd->add_option("--flows", sim_flows, "Spray over this many flows")
      ->capture_default_str();
  sim_cmd->add_option("--g-ttl", sim_gttl, "Mark every g-th packet (one-sided)");
  sim_cmd->add_option("--expire-hop", sim_expire,
                      "Expiry hop for marked packets (default NF+4)");
  sim_cmd->add_option("--seed", sim_seed, "Simulation seed")
      ->capture_default_str();

  // estimate -----------------------------------------------------------
  auto* est_cmd = app.add_subcommand("estimate",
                                     "Estimate capacity from a trace file");
  std::string est_trace, est_method = "NFTY";
  bool est_one_sided = false;
  est_cmd->add_option("trace", est_trace, "Trace file from `simulate`")
      ->required();
  est_cmd->add_option("--method", est_method,
                      "NFTY, MIN, MEAN_TRAIN or MEDIAN_TRAIN")
      ->capture_default_str();
  est_cmd->add_flag("--one-sided", est_one_sided,
                    "Use ICMP replies instead of receiver timestamps");

  // ground-truth --------------------------------------------------------
  auto* gt_cmd = app.add_subcommand("ground-truth",
                                    "Flood-based capacity oracle");
  std::string gt_scenario;
  std::uint64_t gt_seed = 1;
  bool gt_pin = false;
  gt_cmd->add_option("--scenario", gt_scenario, "Preset name or JSON file")
      ->required();
  gt_cmd->add_option("--seed", gt_seed, "Base seed")->capture_default_str();
  gt_cmd->add_flag("--pin-top", gt_pin, "Disable the governor (top frequency)");

  // experiment ----------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment",
                                     "Run a multi-method experiment file");
  std::string exp_file, exp_format = "csv";
  std::uint64_t exp_seed = 0;
  int exp_runs = 0;
  exp_cmd->add_option("config", exp_file, "Experiment JSON file")->required();
  exp_cmd->add_option("--format", exp_format, "csv or table")
      ->capture_default_str();
  exp_cmd->add_option("--seed", exp_seed, "Override base seed");
  exp_cmd->add_option("--runs", exp_runs, "Override run count");

  // countermeasures -------------------------------------------------------
  auto* cm_cmd = app.add_subcommand(
      "countermeasures", "Evaluate the countermeasure grid of an experiment");
  std::string cm_file, cm_format = "csv";
  std::uint64_t cm_seed = 0;
  int cm_runs = 0;
  cm_cmd->add_option("config", cm_file, "Experiment JSON file with a grid")
      ->required();
  cm_cmd->add_option("--format", cm_format, "csv or table")
      ->capture_default_str();
  cm_cmd->add_option("--seed", cm_seed, "Override base seed");
  cm_cmd->add_option("--runs", cm_runs, "Override run count");

  // scenario-dump --------------------------------------------------------
  auto* dump_cmd = app.add_subcommand("scenario-dump",
                                      "Print a preset as scenario JSON");
  std::string dump_name;
  dump_cmd->add_option("preset", dump_name, "Preset name")->required();

  // Let --out placed after a subcommand reach the parent parser.
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (*plan_cmd) {
    PlanContext ctx;
    ctx.threat_model = threat == "ONE_SIDED" ? ThreatModel::kOneSided
                                             : ThreatModel::kTwoSided;
    ctx.dvfs_expected = dvfs == "YES"  ? TriState::kYes
                        : dvfs == "NO" ? TriState::kNo
                                       : TriState::kUnknown;
    if (plan_threads > 0) ctx.threads_k_est = plan_threads;
    if (plan_batch > 0) ctx.batch_interval_est_ns = plan_batch;
    if (plan_gttl > 0) ctx.g_ttl = plan_gttl;
    if (plan_rate > 0) ctx.send_rate_est_pps = plan_rate;
    PlanResult res = plan_probe_length(ctx);
    std::string out = "length=" + std::to_string(res.length) + "\n" +
                      "probe_kind=" +
                      (res.probe_kind == ThreatModel::kOneSided ? "ONE_SIDED"
                                                                : "TWO_SIDED") +
                      "\n" + "rationale=" + res.rationale + "\n";
    emit(out_path, out);
    return 0;
  }

  if (*sim_cmd) {
    ScenarioConfig sc = load_scenario(sim_scenario);
    ProbeSpec probe;
    if (!sim_probe.empty()) {
      probe = probe_from_json(read_file(sim_probe));
    } else if (sim_gttl > 0) {
      int expire = sim_expire > 0 ? sim_expire : sc.link.hop_count_before_nf + 4;
      probe = build_one_sided_probe(sim_length, sim_gttl, expire, sim_rate,
                                    sc.link);
    } else {
      probe = build_two_sided_probe(sim_length, sim_rate,
                                    FlowPolicy{sim_flows});
    }
    Trace trace = run_simulation(sc, probe, sim_seed);
    emit(out_path, trace_to_text(trace));
    return 0;
  }

  if (*est_cmd) {
    Trace trace = trace_from_text(read_file(est_trace));
    DispersionSeries series = est_one_sided
                                  ? onesided_dispersion(trace.icmp_replies)
                                  : dispersion_from_trace(trace);
    Method m = method_from_name(est_method);
    std::int64_t sent = static_cast<std::int64_t>(trace.packets.size());
    EstimateReport rep = m == Method::kNfty
                             ? nfty_estimate(series, {}, sent)
                             : baseline_estimate(series, m, sent);
    emit(out_path, report_to_text(rep));
    return 0;
  }

  if (*gt_cmd) {
    ScenarioConfig sc = load_scenario(gt_scenario);
    if (gt_pin) sc.nf.governor.enabled = false;
    GroundTruth gt = ground_truth_flood(sc, gt_seed);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "capacity_pps=%.1f\nlink_bound=%s\nanalytic_pps=%.1f\n",
                  gt.capacity_pps, gt.link_bound ? "true" : "false",
                  analytic_capacity(sc.nf));
    emit(out_path, buf);
    return 0;
  }

  if (*exp_cmd || *cm_cmd) {
    bool cm_mode = static_cast<bool>(*cm_cmd);
    ExperimentConfig cfg =
        experiment_from_json(read_file(cm_mode ? cm_file : exp_file));
    std::uint64_t seed = cm_mode ? cm_seed : exp_seed;
    int runs = cm_mode ? cm_runs : exp_runs;
    if (seed != 0) cfg.base_seed = seed;
    if (runs > 0) cfg.runs = runs;
    ResultsTable table =
        cm_mode ? eval_countermeasures(cfg) : run_experiment(cfg);
    const std::string& format = cm_mode ? cm_format : exp_format;
    emit(out_path, format == "table" ? results_to_table(table)
                                     : results_to_csv(table));
    return 0;
  }

  if (*dump_cmd) {
    emit(out_path, scenario_to_json(scenario_preset(dump_name)));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
