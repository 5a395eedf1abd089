#pragma once

#include <string>
#include <vector>

#include "nfty/config.hpp"

namespace nfty {

// Shipped scenario presets, named after the modeled NFs. The per-packet
// service time is derived from the target capacity (threads / capacity,
// rounded to ns). All presets carry the 3-level governor enabled and the
// noise model present but disabled; experiments toggle what they need.
std::vector<std::string> preset_names();
ScenarioConfig scenario_preset(const std::string& name);

// Common preset edits used by experiments.
ScenarioConfig with_governor_disabled(ScenarioConfig sc);
ScenarioConfig with_noise(ScenarioConfig sc, bool enabled = true);

}  // namespace nfty
