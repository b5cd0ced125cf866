#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "psim/common/result.hpp"
#include "psim/engine/scenario.hpp"

namespace psim::report {

struct ComparisonInput {
  std::string label;
  engine::ScenarioConfig config;
};

struct ComparisonRow {
  std::string label;
  std::string policy;
  std::vector<std::string> digests;  // one per replication
  double link_accuracy_mean = 0.0;
  double link_accuracy_std = 0.0;
  double traceability = 0.0;
  double mean_anonymity_set = 0.0;
  double awareness_ratio = 0.0;
  double ghost_count_max = 0.0;
  double missing_count_max = 0.0;
  double starved_emissions = 0.0;
  double silence_blind_time_s = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Names the first non-policy field on which two configs differ, if any.
std::optional<std::string> misalignment(const engine::ScenarioConfig& a,
                                        const engine::ScenarioConfig& b);

/// Runs each config over `replications` seeds (seed, seed + 1, ...).
/// Fails if fewer than two configs are given or they are misaligned.
Result<ComparisonReport, std::string> compare(const std::vector<ComparisonInput>& inputs,
                                              std::size_t replications,
                                              std::size_t parallelism);

}  // namespace psim::report
