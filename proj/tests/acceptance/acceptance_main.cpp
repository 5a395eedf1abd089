// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier statistical checks run 100 seeded repetitions; everything
// is deterministic given the fixed base seeds below.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "nfty/dispersion.hpp"
#include "nfty/errors.hpp"
#include "nfty/estimators.hpp"
#include "nfty/experiment.hpp"
#include "nfty/io.hpp"
#include "nfty/parallel.hpp"
#include "nfty/presets.hpp"
#include "nfty/probe.hpp"
#include "nfty/simulator.hpp"
#include "nfty/slops.hpp"
#include "nfty/step_detect.hpp"

#include "../oracles.hpp"

using namespace nfty;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::string cli_path;
std::string data_dir;

ExperimentConfig probe_experiment(const ScenarioConfig& sc,
                                  const ProbeSpec& probe, int runs,
                                  std::uint64_t base_seed) {
  ExperimentConfig cfg;
  cfg.scenario = sc;
  cfg.probe = probe;
  cfg.runs = runs;
  cfg.base_seed = base_seed;
  cfg.methods = {Method::kNfty};
  return cfg;
}

double outcomes_mdape(const std::vector<RunOutcome>& outcomes, double truth) {
  std::vector<double> est;
  for (const auto& o : outcomes)
    if (o.ok) est.push_back(o.estimate_pps);
  if (est.empty()) return std::numeric_limits<double>::infinity();
  return mdape(est, truth);
}

double top_fraction(const std::vector<RunOutcome>& outcomes) {
  double n = 0;
  for (const auto& o : outcomes) n += o.reached_top_level ? 1.0 : 0.0;
  return n / static_cast<double>(outcomes.size());
}

// Shared heavy computation: SUR-RL with DVFS, NFTY-5K, 100 runs.
const std::vector<RunOutcome>& sur_rl_dvfs_5k_outcomes() {
  static std::vector<RunOutcome> cached = [] {
    ExperimentConfig cfg =
        probe_experiment(scenario_preset("sur-rl"),
                         build_two_sided_probe(5'000, 1e6), 100, 1'000);
    return run_method(cfg, Method::kNfty);
  }();
  return cached;
}

// --------------------------------------------------------------------------
// 1. Exact-dispersion identity
// --------------------------------------------------------------------------
Check criterion1() {
  Check c;
  ScenarioConfig sc;
  sc.nf.base_service_ns = 5'000;
  sc.nf.freq_levels = {1.0};
  sc.nf.governor.enabled = false;
  ProbeSpec probe = build_two_sided_probe(100, 1e6);
  Trace trace = run_simulation(sc, probe, 1);

  std::vector<SimTime> times;
  for (const auto& p : trace.packets) {
    c.expect(p.received(), "every packet delivered");
    if (p.received()) times.push_back(*p.t_recv);
  }
  std::sort(times.begin(), times.end());
  for (std::size_t i = 1; i < times.size(); ++i)
    c.expect(times[i] - times[i - 1] == 5'000, "receiver gap exactly 5000ns");

  DispersionSeries series = dispersion_from_trace(trace);
  for (Method m : {Method::kNfty, Method::kMin, Method::kMeanTrain,
                   Method::kMedianTrain}) {
    double est = m == Method::kNfty
                     ? nfty_estimate(series).capacity_pps
                     : baseline_estimate(series, m).capacity_pps;
    c.expect(std::abs(est - 200'000.0) / 200'000.0 <= 0.001,
             fmt("%s within 0.1%% of 200kpps", method_name(m)));
  }
  c.note("all dispersion estimators at 200000pps");
  return c;
}

// --------------------------------------------------------------------------
// 2. Controlled DVFS accuracy
// --------------------------------------------------------------------------
Check criterion2() {
  Check c;
  ScenarioConfig sc = scenario_preset("sur-rl");
  double truth = analytic_capacity(sc.nf);
  ProbeSpec probe = build_two_sided_probe(5'000, 1e6);
  ExperimentConfig cfg = probe_experiment(sc, probe, 100, 1'000);

  double nfty = outcomes_mdape(sur_rl_dvfs_5k_outcomes(), truth);
  double mean = outcomes_mdape(run_method(cfg, Method::kMeanTrain), truth);
  double median = outcomes_mdape(run_method(cfg, Method::kMedianTrain), truth);

  c.expect(nfty <= 5.0, fmt("NFTY MdAPE %.3f%% <= 5%%", nfty));
  c.expect(mean >= 2.0 * nfty, fmt("MEAN_TRAIN %.3f%% >= 2x NFTY", mean));
  c.expect(median >= 2.0 * nfty, fmt("MEDIAN_TRAIN %.3f%% >= 2x NFTY", median));
  c.note(fmt("NFTY %.4f%%, MEAN %.1f%%, MEDIAN %.1f%%", nfty, mean, median));
  return c;
}

// --------------------------------------------------------------------------
// 3. Probe-length monotonicity
// --------------------------------------------------------------------------
Check criterion3() {
  Check c;
  ScenarioConfig sc = scenario_preset("sur-rl");
  double truth = analytic_capacity(sc.nf);
  const std::vector<std::int64_t> lengths{100, 300, 500, 1'000, 2'000, 5'000};

  std::vector<double> fracs, mdapes;
  for (std::int64_t len : lengths) {
    const std::vector<RunOutcome>* outcomes;
    std::vector<RunOutcome> local;
    if (len == 5'000) {
      outcomes = &sur_rl_dvfs_5k_outcomes();
    } else {
      ExperimentConfig cfg = probe_experiment(
          sc, build_two_sided_probe(len, 1e6), 100, 1'000);
      local = run_method(cfg, Method::kNfty);
      outcomes = &local;
    }
    fracs.push_back(top_fraction(*outcomes));
    mdapes.push_back(outcomes_mdape(*outcomes, truth));
  }
  for (std::size_t i = 1; i < fracs.size(); ++i)
    c.expect(fracs[i] >= fracs[i - 1],
             fmt("top-frequency fraction non-decreasing at L=%lld",
                 static_cast<long long>(lengths[i])));
  c.expect(fracs.front() == 0.0, "no run reaches top frequency at L=100");
  c.expect(fracs.back() >= 0.99,
           fmt("%.2f of runs reach top at L=5000", fracs.back()));
  c.expect(mdapes.back() <= mdapes.front(),
           fmt("MdAPE at L=5000 (%.3f%%) <= at L=100 (%.3f%%)", mdapes.back(),
               mdapes.front()));
  std::string curve = "top fractions";
  for (std::size_t i = 0; i < lengths.size(); ++i)
    curve += fmt(" L%lld=%.2f", static_cast<long long>(lengths[i]), fracs[i]);
  c.note(curve);
  return c;
}

// --------------------------------------------------------------------------
// 4. Batching robustness
// --------------------------------------------------------------------------
Check criterion4() {
  Check c;
  ScenarioConfig sc = with_governor_disabled(scenario_preset("sur-rl"));
  double truth = analytic_capacity(sc.nf);
  ProbeSpec p100 = build_two_sided_probe(100, 1e6);

  double nfty_clean = outcomes_mdape(
      run_method(probe_experiment(sc, p100, 100, 2'000), Method::kNfty),
      truth);

  ScenarioConfig b300 = sc;
  b300.receiver.batch_interval_ns = 300'000;
  double min_b300 = outcomes_mdape(
      run_method(probe_experiment(b300, p100, 100, 2'000), Method::kMin),
      truth);

  ScenarioConfig b100 = sc;
  b100.receiver.batch_interval_ns = 100'000;
  double min_b100 = outcomes_mdape(
      run_method(probe_experiment(b100, p100, 100, 2'000), Method::kMin),
      truth);

  c.expect(5.0 * nfty_clean <= min_b300,
           fmt("NFTY at B=0 (%.3f%%) at least 5x below MIN at B=300us", nfty_clean));

  double nfty_b300_l1000 = outcomes_mdape(
      run_method(probe_experiment(b300, build_two_sided_probe(1'000, 1e6),
                                  100, 2'000),
                 Method::kNfty),
      truth);
  c.expect(nfty_b300_l1000 <= 10.0,
           fmt("NFTY at B=300us, L=1000 within 10%% (%.2f%%)",
               nfty_b300_l1000));
  c.note(fmt("NFTY B0 %.4f%%, MIN B300 %s, MIN B100 %s, NFTY B300/L1000 "
             "%.2f%%",
             nfty_clean, std::isinf(min_b300) ? "inf" : "finite",
             std::isinf(min_b100) ? "inf" : "finite", nfty_b300_l1000));
  return c;
}

// --------------------------------------------------------------------------
// 5. One-sided exactness and accuracy
// --------------------------------------------------------------------------
Check criterion5() {
  Check c;
  ScenarioConfig sc = with_governor_disabled(scenario_preset("sur-rl"));
  double t_p = static_cast<double>(sc.nf.base_service_ns);
  double truth = analytic_capacity(sc.nf);
  ProbeSpec probe = build_one_sided_probe(
      3'000, 100, sc.link.hop_count_before_nf + 4, 1e6, sc.link);

  Trace trace = run_simulation(sc, probe, 5'000);
  c.expect(trace.icmp_replies.size() == 30,
           fmt("30 replies, got %zu", trace.icmp_replies.size()));
  DispersionSeries series = onesided_dispersion(trace.icmp_replies);
  for (double v : series.values)
    c.expect(v == t_p, fmt("normalized dispersion exactly t_p (%.3f)", v));

  ExperimentConfig noisy = probe_experiment(with_noise(sc), probe, 100, 5'000);
  double m = outcomes_mdape(run_method(noisy, Method::kNfty), truth);
  c.expect(m <= 10.0, fmt("one-sided MdAPE with noise %.2f%% <= 10%%", m));
  c.note(fmt("noise-free values all %.0fns, noisy MdAPE %.3f%%", t_p, m));
  return c;
}

// --------------------------------------------------------------------------
// 6. SLoPS contract
// --------------------------------------------------------------------------
Check criterion6() {
  Check c;
  ScenarioConfig sc = with_governor_disabled(scenario_preset("sur-rl"));
  double truth = analytic_capacity(sc.nf);
  SlopsParams params;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EstimateReport r = slops_search(sc, params, 6'000 + seed);
    int iterations = std::stoi(r.diagnostics[0].second);
    double lo = std::stod(r.diagnostics[1].second);
    double hi = std::stod(r.diagnostics[2].second);
    c.expect(iterations <= 9, fmt("%d iterations <= 9", iterations));
    c.expect(hi - lo <= params.stop_width_pps, "final width <= 1000pps");
    c.expect(lo <= truth && truth <= hi, "interval contains the capacity");
  }

  ScenarioConfig mt = with_governor_disabled(scenario_preset("sur-rl-mt"));
  double aggregate = analytic_capacity(mt.nf);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EstimateReport r = slops_search(mt, params, 6'100 + seed);
    double ratio = r.capacity_pps / aggregate;
    c.expect(ratio >= 0.4 && ratio <= 0.6,
             fmt("single-flow SLoPS at %.2f of aggregate", ratio));
  }
  c.note("binary search contract and single-thread trap hold");
  return c;
}

// --------------------------------------------------------------------------
// 7. Oracle agreement
// --------------------------------------------------------------------------
Check criterion7() {
  Check c;
  for (const auto& name : preset_names()) {
    ScenarioConfig sc = with_governor_disabled(scenario_preset(name));
    double analytic = analytic_capacity(sc.nf);
    GroundTruth gt = ground_truth_flood(sc, 7'000);
    double err = std::abs(gt.capacity_pps - analytic) / analytic;
    c.expect(err <= 0.01,
             fmt("%s flood %.0f vs analytic %.0f (%.2f%%)", name.c_str(),
                 gt.capacity_pps, analytic, err * 100.0));
  }
  c.note("5-rep median flood matches analytic on all presets");
  return c;
}

// --------------------------------------------------------------------------
// 8. Step detection vs brute force
// --------------------------------------------------------------------------
Check criterion8() {
  Check c;

  // Part A: 200 synthetic stepped series against the exhaustive
  // variance-minimizing oracle.
  std::vector<char> match_flags(200, 0);
  parallel_for(200, [&](std::int64_t case_idx) {
    std::mt19937 rng(static_cast<std::uint32_t>(8'000 + case_idx));
    int k = 1 + static_cast<int>(case_idx % 3);
    std::uniform_int_distribution<int> seg_len(30, 70);
    std::vector<std::size_t> lens;
    std::size_t total = 0;
    for (int s = 0; s <= k; ++s) {
      std::size_t len = static_cast<std::size_t>(seg_len(rng));
      lens.push_back(len);
      total += len;
    }
    while (total > 300) {
      lens.back() -= 1;
      total -= 1;
    }
    std::uniform_real_distribution<double> gap_dist(2'000.0, 6'000.0);
    std::vector<double> levels;
    double level = 12'000.0;
    double min_gap = 1e18;
    for (int s = 0; s <= k; ++s) {
      levels.push_back(level);
      double gap = gap_dist(rng);
      min_gap = std::min(min_gap, gap);
      level -= gap;
    }
    std::uniform_real_distribution<double> sigma_dist(0.02, 0.10);
    double sigma = sigma_dist(rng) * min_gap;
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> y;
    for (std::size_t s = 0; s < lens.size(); ++s)
      for (std::size_t i = 0; i < lens[s]; ++i)
        y.push_back(levels[s] + noise(rng));

    auto oracle = oracles::best_splits_sse(y, k, 5);
    Segmentation seg = binseg_detect(y);
    bool good = seg.breakpoints.size() == oracle.size();
    if (good)
      for (std::size_t i = 0; i < oracle.size(); ++i)
        good &= std::abs(seg.breakpoints[i] - oracle[i]) <= 2;
    match_flags[static_cast<std::size_t>(case_idx)] = good ? 1 : 0;
  });
  int matches = 0;
  for (char f : match_flags) matches += f;
  c.expect(matches >= 190, fmt("%d/200 oracle matches >= 95%%", matches));

  // Part B: penalty calibration on pure noise (sigma up to 20% of the mean,
  // series up to 5000 values).
  std::vector<char> clean(1'000, 0);
  parallel_for(1'000, [&](std::int64_t trial) {
    std::mt19937 rng(static_cast<std::uint32_t>(9'000 + trial));
    double log_lo = std::log(60.0), log_hi = std::log(5'000.0);
    std::uniform_real_distribution<double> log_n(log_lo, log_hi);
    std::size_t n = trial < 5 ? 5'000
                              : static_cast<std::size_t>(std::exp(log_n(rng)));
    double mean = 5'000.0;
    std::uniform_real_distribution<double> sig(0.01, 0.20);
    std::normal_distribution<double> noise(0.0, sig(rng) * mean);
    std::vector<double> y(n);
    for (auto& v : y) v = mean + noise(rng);
    clean[static_cast<std::size_t>(trial)] =
        binseg_detect(y).breakpoints.empty() ? 1 : 0;
  });
  int zero_split = 0;
  for (char f : clean) zero_split += f;
  c.expect(zero_split >= 990,
           fmt("%d/1000 pure-noise trials with zero splits >= 99%%",
               zero_split));
  c.note(fmt("oracle matches %d/200, clean noise %d/1000", matches,
             zero_split));
  return c;
}

// --------------------------------------------------------------------------
// 9. Countermeasure ordering
// --------------------------------------------------------------------------
Check criterion9() {
  Check c;
  ScenarioConfig sc = scenario_preset("sur-rl");
  double truth = analytic_capacity(sc.nf);
  ProbeSpec p5k = build_two_sided_probe(5'000, 1e6);

  auto mdape_with = [&](std::vector<CountermeasureConfig> cms) {
    ScenarioConfig s = sc;
    s.nf.countermeasures = std::move(cms);
    return outcomes_mdape(
        run_method(probe_experiment(s, p5k, 10, 9'000), Method::kNfty), truth);
  };

  double none = mdape_with({});
  double delay = mdape_with({CmRandomDelay{50'000}});
  double batch = mdape_with({CmExtraBatch{300'000}});
  double underclock = mdape_with({CmUnderclock{25}});

  c.expect(underclock >= delay && underclock >= batch,
           fmt("underclock (%.1f%%) largest vs delay %.1f%%, batch %.1f%%",
               underclock, delay, batch));
  c.expect(underclock >= 2.0 * none,
           fmt("underclock %.1f%% >= 2x baseline %.4f%%", underclock, none));

  // RATE_SHAPE(0.2): every estimator reads the shaped rate.
  ScenarioConfig shaped = sc;
  shaped.nf.countermeasures = {CmRateShape{0.2, 1}};
  for (Method m : {Method::kNfty, Method::kMin, Method::kMeanTrain,
                   Method::kMedianTrain, Method::kSlops}) {
    auto outcomes = run_method(probe_experiment(shaped, p5k, 10, 9'100), m);
    std::vector<double> est;
    for (const auto& o : outcomes)
      if (o.ok) est.push_back(o.estimate_pps);
    c.expect(!est.empty(), fmt("%s produced estimates", method_name(m)));
    if (est.empty()) continue;
    std::sort(est.begin(), est.end());
    double med = est[est.size() / 2];
    c.expect(std::abs(med - 0.2 * truth) / (0.2 * truth) <= 0.05,
             fmt("%s sees 0.2x capacity (got %.0f of %.0f)", method_name(m),
                 med, 0.2 * truth));
  }
  c.note(fmt("none %.4f%%, delay %.1f%%, batch %.1f%%, underclock %.1f%%",
             none, delay, batch, underclock));
  return c;
}

// --------------------------------------------------------------------------
// 10. Determinism suite: byte-identical CLI outputs across two runs
// --------------------------------------------------------------------------
Check criterion10() {
  Check c;
  if (cli_path.empty()) {
    c.expect(false, "CLI path not provided (--cli)");
    return c;
  }
  char tmpl[] = "/tmp/nfty_accept_XXXXXX";
  std::string dir = mkdtemp(tmpl);

  write_file(dir + "/exp.json", R"({
    "scenario": {"preset": "sur-rl", "nf": {"governor": {"enabled": false}}},
    "scenario_name": "sur-rl",
    "methods": ["NFTY", "MEAN_TRAIN"],
    "probe": {"length": 100, "rate_pps": 1e6},
    "runs": 2,
    "base_seed": 5,
    "countermeasures": [{"kind": "RANDOM_DELAY", "max_ns": 0}]
  })");

  std::vector<std::pair<std::string, std::string>> invocations = {
      {"plan", " plan --threat-model ONE_SIDED --g-ttl 100"},
      {"simulate",
       " simulate --scenario sur-rl --length 120 --rate 1e6 --seed 3"},
      {"simulate1s",
       " simulate --scenario sur-rl --length 300 --g-ttl 100 --seed 4"},
      {"ground-truth", " ground-truth --scenario snort-rl --pin-top --seed 2"},
      {"experiment", " experiment " + dir + "/exp.json --seed 5"},
      {"countermeasures", " countermeasures " + dir + "/exp.json --runs 2"},
      {"scenario-dump", " scenario-dump sur-bl-mt"},
  };
  for (const auto& [name, args] : invocations) {
    std::string out1 = dir + "/" + name + ".1";
    std::string out2 = dir + "/" + name + ".2";
    c.expect(std::system((cli_path + args + " --out " + out1).c_str()) == 0,
             name + " run 1 exits 0");
    c.expect(std::system((cli_path + args + " --out " + out2).c_str()) == 0,
             name + " run 2 exits 0");
    c.expect(read_file(out1) == read_file(out2),
             name + " outputs byte-identical");
  }

  std::string trace_path = dir + "/simulate.1";
  for (const char* m : {"NFTY", "MEAN_TRAIN"}) {
    std::string e1 = dir + "/est1", e2 = dir + "/est2";
    std::string base = cli_path + " estimate " + trace_path + " --method " + m;
    c.expect(std::system((base + " --out " + e1).c_str()) == 0,
             "estimate exits 0");
    c.expect(std::system((base + " --out " + e2).c_str()) == 0,
             "estimate exits 0");
    c.expect(read_file(e1) == read_file(e2), "estimate byte-identical");
  }
  c.note("7 subcommand invocations byte-identical across repeat runs");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
    if (arg == "--data" && i + 1 < argc) data_dir = argv[++i];
    if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  struct Entry {
    int id;
    const char* title;
    std::function<Check()> fn;
  };
  std::vector<Entry> criteria = {
      {1, "exact-dispersion identity", criterion1},
      {2, "controlled DVFS accuracy", criterion2},
      {3, "probe-length monotonicity", criterion3},
      {4, "batching robustness", criterion4},
      {5, "one-sided exactness and accuracy", criterion5},
      {6, "SLoPS contract", criterion6},
      {7, "oracle agreement", criterion7},
      {8, "step detection vs brute force", criterion8},
      {9, "countermeasure ordering", criterion9},
      {10, "determinism suite", criterion10},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    if (only != 0 && entry.id != only) continue;
    Check c;
    try {
      c = entry.fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("[criterion %2d] %s - %s%s%s\n", entry.id,
                c.ok ? "PASS" : "FAIL", entry.title,
                c.detail.empty() ? "" : ": ", c.detail.c_str());
    std::fflush(stdout);
    failures += c.ok ? 0 : 1;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
