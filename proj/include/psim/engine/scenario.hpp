#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psim/adversary/linker.hpp"
#include "psim/beaconing/messages.hpp"
#include "psim/common/result.hpp"
#include "psim/mobility/road.hpp"
#include "psim/sba/token.hpp"
#include "psim/strategy/locks.hpp"
#include "psim/strategy/policy.hpp"
#include "psim/strategy/pool.hpp"

namespace psim::engine {

struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;  // half-open
  bool contains(double t) const {
    return t >= start_s - kTimeEpsilon && t < end_s - kTimeEpsilon;
  }
};

struct VehicleSpec {
  std::vector<std::string> route;
  double depart_s = 0.0;
  double offset_m = 0.0;
  double speed_mps = 10.0;
  double accel_mps2 = 0.0;
  std::optional<double> target_speed_mps;  // defaults to speed_mps
  beaconing::QuasiIds quasi_ids;
  double clock_skew_s = 0.0;
  std::vector<Interval> busy_transfer;
  std::vector<Interval> safety_critical;
};

/// Bulk fleet: vehicle i takes routes[i % routes.size()].
struct FleetGenerator {
  std::size_t count = 0;
  std::vector<std::vector<std::string>> routes;
  double depart_spacing_s = 0.0;
  double offset_spacing_m = 0.0;
  double speed_mps = 13.9;
  double speed_jitter_mps = 0.0;
  beaconing::QuasiIds quasi_ids;
  double quasi_jitter_m = 0.0;
  double clock_skew_max_s = 0.0;
};

struct LockEvent {
  VehicleId vehicle = 0;
  std::string app_id = "app";
  double at_s = 0.0;
  double duration_s = 0.0;
  std::size_t repeat = 1;  // renewals requested every period_s
  double period_s = 0.0;
};

struct DenmEvent {
  VehicleId vehicle = 0;
  double at_s = 0.0;
  beaconing::DenmEventType event_type = beaconing::DenmEventType::kHazard;
};

struct BaseStation {
  Vec2 position;
  double radius_m = 1000.0;
};

struct AdversarySpec {
  adversary::Coverage coverage;
  adversary::LinkerOptions linker;
};

struct SbaSpec {
  double token_ttl_s = 300.0;
  double ec_lifetime_s = 86400.0;
  sba::SigScheme sig_scheme = sba::SigScheme::kMacSharedSecret;
  std::size_t batch_cap = 100;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 1;
  double duration_s = 60.0;
  double tick_s = 0.05;
  double beacon_hz = 10.0;
  double positioning_sigma_m = 0.0;
  double packet_loss = 0.0;
  double radio_range_m = 300.0;
  double ldm_timeout_s = 1.5;

  std::vector<mobility::Segment> segments;
  std::vector<VehicleSpec> vehicles;
  FleetGenerator generator;

  strategy::ChangePolicy policy = strategy::PeriodicPolicy{};
  double silence_s = 0.0;
  bool notify_deactivation = false;
  double max_silent_fraction = 1.0;
  strategy::PoolSpec pool;
  strategy::LockLimits lock_limits;
  std::vector<LockEvent> lock_events;
  std::vector<DenmEvent> denm_events;
  std::vector<BaseStation> base_stations;
  AdversarySpec adversary;
  SbaSpec sba;

  std::int64_t ticks_per_beacon() const;
  std::int64_t total_ticks() const;

  /// Every field with defaults filled in, keys sorted.
  nlohmann::json to_json() const;
  /// Hex SHA-256 of the canonical JSON.
  std::string digest() const;
};

struct Violation {
  std::string field;
  std::string constraint;
};

struct LoadError {
  enum class Kind { kIo, kParse, kValidation } kind = Kind::kValidation;
  std::vector<Violation> violations;

  std::string describe() const;
};

Result<ScenarioConfig, LoadError> load_scenario(const nlohmann::json& document);
Result<ScenarioConfig, LoadError> load_scenario_text(std::string_view text);
/// Reads and parses a file; an unreadable file is a kIo error.
Result<ScenarioConfig, LoadError> load_scenario_file(const std::string& path);

/// Top-level keys that only change the pseudonym policy.
const std::vector<std::string>& policy_fields();

}  // namespace psim::engine
