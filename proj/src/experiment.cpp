#include "nfty/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nfty/errors.hpp"
#include "nfty/parallel.hpp"
#include "nfty/simulator.hpp"

namespace nfty {

double analytic_capacity(const NfConfig& nf) {
  if (nf.base_service_ns <= 0)
    return std::numeric_limits<double>::infinity();
  return static_cast<double>(nf.threads_k) * 1e9 /
         static_cast<double>(nf.base_service_ns);
}

namespace {

double median_sorted(const std::vector<double>& v) {
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Linear interpolation between closest ranks.
double percentile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  double pos = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace

double mdape(const std::vector<double>& estimates_pps, double truth_pps) {
  if (estimates_pps.empty())
    throw ConfigError("mdape needs at least one estimate");
  if (!(truth_pps > 0)) throw ConfigError("mdape truth must be positive");
  std::vector<double> apes;
  apes.reserve(estimates_pps.size());
  for (double e : estimates_pps)
    apes.push_back(std::abs(e - truth_pps) / truth_pps * 100.0);
  std::sort(apes.begin(), apes.end());
  return median_sorted(apes);
}

namespace {

struct TrialResult {
  bool sustainable = false;
  double observed_rate_pps = 0.0;
};

TrialResult flood_trial(const ScenarioConfig& sc, double rate,
                        std::uint64_t seed) {
  constexpr SimTime kDuration = 200 * kNsPerMs;
  FloodStats st = run_flood(sc, rate, kDuration, seed);
  TrialResult r;
  r.observed_rate_pps = st.second_half_rate_pps;
  r.sustainable = st.drops_second_half == 0 &&
                  st.second_half_rate_pps >= rate * 0.998;
  return r;
}

double flood_capacity_once(const ScenarioConfig& sc, std::uint64_t seed,
                           bool& link_bound) {
  double link_pps = 1e9 / static_cast<double>(sc.link.transmission_ns(64));
  double rate = std::min(50'000.0, link_pps);
  TrialResult trial = flood_trial(sc, rate, seed);
  while (trial.sustainable) {
    if (rate >= link_pps) {
      link_bound = true;
      return trial.observed_rate_pps;
    }
    rate = std::min(rate * 4.0, link_pps);
    trial = flood_trial(sc, rate, seed);
  }

  double lo = 0.8 * trial.observed_rate_pps;
  double hi = std::min(1.25 * trial.observed_rate_pps, rate);
  for (int adjust = 0; !flood_trial(sc, lo, seed).sustainable; ++adjust) {
    if (adjust >= 6)
      throw EstimationError(
          "flood search could not bracket the capacity from below; widen the "
          "search bounds");
    lo *= 0.5;
  }
  for (int adjust = 0; flood_trial(sc, hi, seed).sustainable; ++adjust) {
    if (adjust >= 6)
      throw EstimationError(
          "flood search could not bracket the capacity from above; widen the "
          "search bounds");
    hi *= 1.3;
  }
  while (hi - lo > 0.002 * hi) {
    double mid = (lo + hi) / 2.0;
    if (flood_trial(sc, mid, seed).sustainable)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace

GroundTruth ground_truth_flood(const ScenarioConfig& scenario,
                               std::uint64_t seed) {
  scenario.validate();
  GroundTruth gt;
  gt.rep_capacities.resize(5);
  std::vector<char> bound(5, 0);
  parallel_for(5, [&](std::int64_t rep) {
    bool lb = false;
    gt.rep_capacities[static_cast<std::size_t>(rep)] = flood_capacity_once(
        scenario, seed + static_cast<std::uint64_t>(rep), lb);
    bound[static_cast<std::size_t>(rep)] = lb ? 1 : 0;
  });
  for (char b : bound) gt.link_bound |= (b != 0);
  std::vector<double> sorted = gt.rep_capacities;
  std::sort(sorted.begin(), sorted.end());
  gt.capacity_pps = median_sorted(sorted);
  return gt;
}

ProbeSpec resolve_probe(const ExperimentConfig& cfg) {
  if (const auto* spec = std::get_if<ProbeSpec>(&cfg.probe)) return *spec;
  const auto& ctx = std::get<PlanContext>(cfg.probe);
  PlanResult plan = plan_probe_length(ctx);
  double rate = ctx.send_rate_est_pps.value_or(
      cfg.scenario.sender.nominal_rate_pps);
  if (plan.probe_kind == ThreatModel::kOneSided) {
    int expire_hop = cfg.scenario.link.hop_count_before_nf + 4;
    return build_one_sided_probe(plan.length, *ctx.g_ttl, expire_hop, rate,
                                 cfg.scenario.link);
  }
  FlowPolicy flows = FlowPolicy::single();
  if (ctx.threads_k_est && *ctx.threads_k_est > 1)
    flows = FlowPolicy::spray_covering(*ctx.threads_k_est);
  return build_two_sided_probe(plan.length, rate, flows);
}

std::vector<RunOutcome> run_method(const ExperimentConfig& cfg, Method method) {
  cfg.scenario.validate();
  ProbeSpec probe = resolve_probe(cfg);
  probe.validate(cfg.scenario.link);
  bool one_sided = !probe.ttl_plan.empty();
  int top_level = static_cast<int>(cfg.scenario.nf.freq_levels.size()) - 1;

  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, [&](std::int64_t run) {
    std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(run);
    RunOutcome& out = outcomes[static_cast<std::size_t>(run)];
    try {
      if (method == Method::kSlops) {
        SlopsParams params = cfg.slops_params;
        params.stream_len = probe.length;  // same budget as the probe variant
        EstimateReport rep = slops_search(cfg.scenario, params, seed);
        out.ok = true;
        out.estimate_pps = rep.capacity_pps;
        out.packets_sent = rep.packets_sent;
        return;
      }
      Trace trace = run_simulation(cfg.scenario, probe, seed);
      out.reached_top_level = trace.max_freq_level == top_level;
      DispersionSeries series =
          one_sided ? onesided_dispersion(trace.icmp_replies)
                    : dispersion_from_trace(trace);
      EstimateReport rep =
          method == Method::kNfty
              ? nfty_estimate(series, cfg.step_params, probe.length)
              : baseline_estimate(series, method, probe.length);
      out.ok = true;
      out.estimate_pps = rep.capacity_pps;
      out.packets_sent = rep.packets_sent;
    } catch (const EstimationError& e) {
      out.error = e.what();
    } catch (const DataError& e) {
      out.error = e.what();
    }
  });
  return outcomes;
}

namespace {

ResultsRow summarize(const std::string& scenario, Method method,
                     const std::vector<RunOutcome>& outcomes, double truth) {
  ResultsRow row;
  row.scenario = scenario;
  row.method = method_name(method);
  row.runs = static_cast<int>(outcomes.size());
  std::vector<double> apes, packets;
  for (const auto& out : outcomes) {
    if (!out.ok) {
      ++row.failures;
      continue;
    }
    apes.push_back(std::abs(out.estimate_pps - truth) / truth * 100.0);
    packets.push_back(static_cast<double>(out.packets_sent));
  }
  std::sort(apes.begin(), apes.end());
  std::sort(packets.begin(), packets.end());
  if (apes.empty()) {
    row.mdape_pct = std::numeric_limits<double>::infinity();
    row.err_p25_pct = row.err_p75_pct = row.mdape_pct;
    row.packets_sent_median = 0;
  } else {
    row.mdape_pct = median_sorted(apes);
    row.err_p25_pct = percentile_sorted(apes, 0.25);
    row.err_p75_pct = percentile_sorted(apes, 0.75);
    row.packets_sent_median = median_sorted(packets);
  }
  return row;
}

double experiment_truth(const ExperimentConfig& cfg) {
  double truth = cfg.truth_pps.value_or(analytic_capacity(cfg.scenario.nf));
  if (!std::isfinite(truth) || truth <= 0)
    throw ConfigError(
        "experiment truth is not finite; the NF is not the bottleneck "
        "(set truth_pps explicitly)");
  return truth;
}

// Mean per-packet latency of a legitimate background flow at 10% load.
double background_latency_ns(const ScenarioConfig& scenario,
                             std::uint64_t seed) {
  double cap = analytic_capacity(scenario.nf);
  if (!std::isfinite(cap))
    throw ConfigError("overhead metric needs a finite NF capacity");
  ProbeSpec flow = build_two_sided_probe(1'000, 0.1 * cap);
  Trace trace = run_simulation(scenario, flow, seed);
  double sum = 0.0;
  std::int64_t n = 0;
  for (const auto& p : trace.packets) {
    if (!p.received()) continue;
    sum += static_cast<double>(*p.t_recv - p.t_sent);
    ++n;
  }
  if (n == 0) throw EstimationError("background flow was not delivered");
  return sum / static_cast<double>(n);
}

}  // namespace

ResultsTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) throw ConfigError("experiment.methods is empty");
  if (cfg.runs < 1) throw ConfigError("experiment.runs must be at least 1");
  double truth = experiment_truth(cfg);
  ResultsTable table;
  for (Method m : cfg.methods)
    table.rows.push_back(
        summarize(cfg.scenario_name, m, run_method(cfg, m), truth));
  return table;
}

ResultsTable eval_countermeasures(const ExperimentConfig& cfg) {
  if (cfg.countermeasure_grid.empty())
    throw ConfigError("experiment.countermeasure_grid is empty");
  double truth = experiment_truth(cfg);

  ExperimentConfig base = cfg;
  base.scenario.nf.countermeasures.clear();
  double base_latency = background_latency_ns(base.scenario, cfg.base_seed);

  ResultsTable table;
  auto add_rows = [&](const ExperimentConfig& c, const std::string& label,
                      double overhead) {
    for (Method m : c.methods) {
      ResultsRow row = summarize(label, m, run_method(c, m), truth);
      row.overhead_pct = overhead;
      table.rows.push_back(row);
    }
  };

  add_rows(base, cfg.scenario_name + "+none", 0.0);
  for (const auto& cm : cfg.countermeasure_grid) {
    ExperimentConfig with_cm = cfg;
    with_cm.scenario.nf.countermeasures = {cm};
    double lat = background_latency_ns(with_cm.scenario, cfg.base_seed);
    double overhead = (lat - base_latency) / base_latency * 100.0;
    add_rows(with_cm, cfg.scenario_name + "+" + countermeasure_name(cm),
             overhead);
  }
  return table;
}

}  // namespace nfty
