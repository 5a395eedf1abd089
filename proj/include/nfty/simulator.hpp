#pragma once

#include <cstdint>

#include "nfty/config.hpp"
#include "nfty/packet.hpp"
#include "nfty/probe.hpp"
#include "nfty/time.hpp"

namespace nfty {

// Stable content hash of a scenario, recorded in every trace.
std::uint64_t scenario_digest(const ScenarioConfig& scenario);

// Runs one probe through the simulated path and returns the full trace.
// Identical (scenario, probe, seed) triples yield bit-identical traces.
Trace run_simulation(const ScenarioConfig& scenario, const ProbeSpec& probe,
                     std::uint64_t seed);

// Floods the path at a constant rate for the given duration. Packets are
// paced by the wire only (the flood models the operator's own measurement
// rig, not the attacker's sender). delivered counts packets received within
// the flood window.
FloodStats run_flood(const ScenarioConfig& scenario, double rate_pps,
                     SimTime duration, std::uint64_t seed);

}  // namespace nfty
