#include "nfty/presets.hpp"

#include <cmath>

#include "nfty/errors.hpp"

namespace nfty {

namespace {

ScenarioConfig base_scenario(double capacity_pps, int threads) {
  ScenarioConfig sc;
  sc.nf.threads_k = threads;
  sc.nf.base_service_ns =
      std::llround(static_cast<double>(threads) * 1e9 / capacity_pps);
  return sc;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"snort-rl", "sur-bl", "sur-rl", "sur-bl-mt", "sur-rl-mt"};
}

ScenarioConfig scenario_preset(const std::string& name) {
  if (name == "snort-rl") return base_scenario(67'500, 1);
  if (name == "sur-bl") return base_scenario(142'600, 1);
  if (name == "sur-rl") return base_scenario(200'880, 1);
  if (name == "sur-bl-mt") return base_scenario(227'720, 2);
  if (name == "sur-rl-mt") return base_scenario(336'060, 2);
  throw ConfigError("unknown scenario preset: " + name);
}

ScenarioConfig with_governor_disabled(ScenarioConfig sc) {
  sc.nf.governor.enabled = false;
  return sc;
}

ScenarioConfig with_noise(ScenarioConfig sc, bool enabled) {
  sc.noise.enabled = enabled;
  return sc;
}

}  // namespace nfty
