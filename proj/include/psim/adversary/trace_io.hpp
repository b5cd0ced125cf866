#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "psim/adversary/linker.hpp"
#include "psim/common/result.hpp"

namespace psim::adversary {

/// One line of the beacon trace. sender_truth_id exists for scoring only
/// and is dropped when the trace is read back as observations.
struct TraceRecord {
  double t = 0.0;
  VehicleId sender_truth_id = 0;
  beaconing::StationId station_id;
  Vec2 position;
  Vec2 velocity;
  std::optional<beaconing::QuasiIds> quasi_ids;
};

std::string trace_line(const TraceRecord& record);

struct TraceError {
  std::size_t line = 0;
  std::string message;
};

/// Parses a JSONL trace into an observation store, ignoring the truth column.
Result<ObservationStore, TraceError> load_trace(std::istream& in);

}  // namespace psim::adversary
