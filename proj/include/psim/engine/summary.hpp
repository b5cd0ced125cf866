#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "psim/engine/simulation.hpp"

namespace psim::engine {

/// Deterministic run report: only simulated quantities, sorted keys.
nlohmann::json make_run_summary(const Simulation& sim, const AttackOutcome& attack);

/// Everything a single run writes.
struct RunArtifacts {
  nlohmann::json summary;
  nlohmann::json ground_truth;
  nlohmann::json linkage;
  std::vector<std::string> trace_lines;
  InvariantReport invariants;
};

RunArtifacts run_scenario(const ScenarioConfig& config, bool with_trace);

/// Two-space indented JSON followed by a newline.
std::string pretty(const nlohmann::json& j);

}  // namespace psim::engine
