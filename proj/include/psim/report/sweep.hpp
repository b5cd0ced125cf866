#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psim/common/result.hpp"
#include "psim/engine/scenario.hpp"

namespace psim::report {

struct SweepAxis {
  std::string path;  // dotted, numeric parts index arrays
  std::vector<nlohmann::json> values;
};

struct SweepSpec {
  nlohmann::json base;
  std::vector<SweepAxis> axes;
  std::size_t replications = 1;
  std::vector<std::uint64_t> seed_offsets;  // one per replication

  std::size_t cells() const;
  std::size_t total_runs() const { return cells() * replications; }
};

/// Parses a sweep document. "base" is an inline scenario or "base_path" a
/// file relative to base_dir.
Result<SweepSpec, std::vector<engine::Violation>> load_sweep(
    const nlohmann::json& doc, const std::filesystem::path& base_dir);
Result<SweepSpec, std::vector<engine::Violation>> load_sweep_file(const std::string& path);

/// Sets a dotted path inside a JSON document, creating objects as needed.
/// Returns false when the path crosses a non-container.
bool set_path(nlohmann::json& doc, std::string_view path, const nlohmann::json& value);

struct SweepRun {
  std::size_t index = 0;
  std::size_t cell = 0;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::string params;  // "path=value;..."
  std::string status;  // "ok" or the failure
  std::optional<nlohmann::json> summary;
};

struct SweepResult {
  std::vector<SweepRun> runs;  // ordered by index
  bool all_ok() const;
};

/// Runs every (cell, replication) pair on up to `parallelism` threads. The
/// result does not depend on the thread count.
SweepResult run_sweep(const SweepSpec& spec, std::size_t parallelism);

/// Per-run rows followed by mean and std rows per cell.
std::string sweep_csv(const SweepResult& result);
std::vector<std::string> sweep_csv_header();

}  // namespace psim::report
