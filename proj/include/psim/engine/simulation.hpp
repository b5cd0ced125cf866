#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "psim/adversary/scoring.hpp"
#include "psim/adversary/trace_io.hpp"
#include "psim/engine/scenario.hpp"
#include "psim/sba/core_network.hpp"

namespace psim::engine {

struct IdInterval {
  beaconing::StationId id;
  double from = 0.0;
  std::optional<double> until;  // open while in use
};

struct ChangeEvent {
  VehicleId vehicle = 0;
  double t = 0.0;
  bool startup = false;
  bool forced = false;  // active ticket expired
  int region = 0;
  std::optional<beaconing::StationId> old_cam;
  std::optional<beaconing::StationId> old_denm;
  beaconing::StationId new_cam;
  beaconing::StationId new_denm;
  double silence_until = 0.0;
  double odometer_trip_m = 0.0;
  double odometer_since_last_m = 0.0;  // before the reset
  double elapsed_since_last_s = 0.0;   // before the reset
  std::optional<double> sampled_distance_m;
  std::optional<double> sampled_time_s;
};

/// Engine-private record of who used which identifier when.
class GroundTruthLedger {
 public:
  void record_change(const ChangeEvent& event);
  void close(VehicleId vehicle, double t);

  const std::vector<ChangeEvent>& changes() const { return changes_; }
  const std::map<VehicleId, std::vector<IdInterval>>& intervals() const { return intervals_; }
  std::optional<VehicleId> owner(const beaconing::StationId& id) const;

  adversary::GroundTruthView truth_view() const;
  nlohmann::json to_json() const;

 private:
  std::vector<ChangeEvent> changes_;
  std::map<VehicleId, std::vector<IdInterval>> intervals_;
  std::map<beaconing::StationId, VehicleId> owner_;
};

struct RunStats {
  std::uint64_t ticks = 0;
  std::uint64_t changes = 0;  // non-startup
  std::uint64_t startup_changes = 0;
  std::uint64_t forced_changes = 0;
  std::uint64_t deferred_by_lock = 0;
  std::uint64_t deferred_by_readiness = 0;
  std::uint64_t starvation_deferrals = 0;
  std::uint64_t starved_emissions = 0;
  std::uint64_t cams_emitted = 0;
  std::uint64_t denms_emitted = 0;
  std::uint64_t denms_deferred = 0;
  std::uint64_t denms_dropped = 0;
  std::uint64_t notices_emitted = 0;
  std::uint64_t deliveries_attempted = 0;
  std::uint64_t deliveries_lost = 0;
  std::uint64_t trips_completed = 0;
  std::uint64_t lock_grants = 0;
  std::map<std::string, std::uint64_t> lock_denials;
  std::uint64_t replenish_events = 0;
  std::uint64_t replenish_failures = 0;
  std::uint64_t coordinator_commands = 0;
  std::size_t ghost_count_max = 0;
  std::uint64_t ghost_ticks = 0;
  std::uint64_t ghost_entry_ticks = 0;
  std::size_t missing_count_max = 0;
  std::uint64_t missing_entry_ticks = 0;
  double awareness_sum = 0.0;
  std::uint64_t awareness_samples = 0;
  double awareness_min = 1.0;
  double silence_blind_time_s = 0.0;
};

/// Runtime audits of the properties every run must hold.
struct InvariantReport {
  std::uint64_t pool_floor_violations = 0;
  std::uint64_t sybil_violations = 0;
  std::uint64_t stack_switch_violations = 0;
  std::uint64_t stack_switches_measured = 0;
  double max_stack_switch_gap_s = 0.0;
  std::uint64_t silence_violations = 0;
  std::uint64_t silent_fraction_violations = 0;
  std::uint64_t lock_cap_violations = 0;

  std::uint64_t total() const {
    return pool_floor_violations + sybil_violations + stack_switch_violations +
           silence_violations + silent_fraction_violations + lock_cap_violations;
  }
};

struct TickReport {
  std::int64_t tick = 0;
  double now = 0.0;
  std::size_t active = 0;
  std::size_t silent = 0;
  std::size_t ghost_total = 0;
  std::size_t missing_total = 0;
  double mean_awareness = 1.0;
  std::size_t min_pool_valid = 0;  // over active vehicles and scopes
};

struct VehicleSnapshot {
  VehicleId id = 0;
  bool active = false;
  bool done = false;
  Vec2 position;
  std::optional<beaconing::StationId> cam_id;
  std::optional<beaconing::StationId> denm_id;
  bool in_silence = false;
  std::size_t cam_valid = 0;
  std::size_t denm_valid = 0;
};

struct SimulationOptions {
  bool record_trace = false;
  bool keep_tick_reports = false;
};

struct AttackOutcome {
  std::vector<adversary::Tracklet> tracklets;
  adversary::LinkageResult linkage;
  adversary::AttackScore score;
};

/// One scenario run. Each tick: mobility, strategy, sba, beaconing, ingest.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config, SimulationOptions options = {});
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  /// Executes one tick; false once the configured duration is exhausted.
  bool step();
  void run();

  std::int64_t tick() const;
  double now() const;

  const ScenarioConfig& config() const;
  const GroundTruthLedger& ledger() const;
  const adversary::ObservationStore& observations() const;
  const std::vector<adversary::TraceRecord>& trace() const;
  const RunStats& stats() const;
  const InvariantReport& invariants() const;
  const std::vector<TickReport>& tick_reports() const;
  const sba::CoreNetwork& core() const;
  std::vector<VehicleSnapshot> vehicles() const;

  /// Offline attack over everything the eavesdropper heard.
  AttackOutcome analyze() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace psim::engine
