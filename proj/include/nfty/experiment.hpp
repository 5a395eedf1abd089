#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nfty/config.hpp"
#include "nfty/estimators.hpp"
#include "nfty/planner.hpp"
#include "nfty/probe.hpp"
#include "nfty/slops.hpp"

namespace nfty {

// Closed-form NF capacity: threads / per-packet service time at the top
// frequency. +inf for a pure forwarder (service time 0).
double analytic_capacity(const NfConfig& nf);

// Median absolute percentage error of the estimates against the truth.
double mdape(const std::vector<double>& estimates_pps, double truth_pps);

struct GroundTruth {
  double capacity_pps = 0.0;
  bool link_bound = false;  // the wire, not the NF, was the bottleneck
  std::vector<double> rep_capacities;
};

// Flood-based capacity oracle: binary search on the sending rate for the
// highest rate the NF sustains without backlog growth or drops, repeated
// five times with the median reported.
GroundTruth ground_truth_flood(const ScenarioConfig& scenario,
                               std::uint64_t seed);

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::string scenario_name = "custom";
  std::vector<Method> methods;
  std::variant<ProbeSpec, PlanContext> probe;
  int runs = 100;
  std::uint64_t base_seed = 1;
  std::vector<CountermeasureConfig> countermeasure_grid;
  std::optional<double> truth_pps;  // defaults to analytic_capacity
  StepDetectParams step_params;
  SlopsParams slops_params;
};

struct ResultsRow {
  std::string scenario;
  std::string method;
  double mdape_pct = 0.0;
  double err_p25_pct = 0.0;
  double err_p75_pct = 0.0;
  double packets_sent_median = 0.0;
  int runs = 0;
  int failures = 0;
  std::optional<double> overhead_pct;
};

struct ResultsTable {
  std::vector<ResultsRow> rows;
};

// Per-run probe outcome, exposed for sweeps that need more than the table.
struct RunOutcome {
  bool ok = false;
  double estimate_pps = 0.0;
  std::int64_t packets_sent = 0;
  bool reached_top_level = false;
  std::string error;
};

// Runs one method over `runs` seeded repetitions of the configured probe.
std::vector<RunOutcome> run_method(const ExperimentConfig& cfg, Method method);

// Full experiment: one row per configured method against the scenario.
ResultsTable run_experiment(const ExperimentConfig& cfg);

// Attacker accuracy plus legitimate-traffic overhead for each countermeasure
// in the grid (prepended by a no-countermeasure baseline row per method).
// Overhead is the added mean per-packet latency of a 1000-packet background
// flow at 10% load, relative to the undefended scenario.
ResultsTable eval_countermeasures(const ExperimentConfig& cfg);

// Resolves the configured probe (planning it if a PlanContext was given).
ProbeSpec resolve_probe(const ExperimentConfig& cfg);

}  // namespace nfty
