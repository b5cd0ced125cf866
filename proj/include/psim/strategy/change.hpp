#pragma once

#include <optional>
#include <span>
#include <vector>

#include "psim/beaconing/messages.hpp"
#include "psim/common/result.hpp"
#include "psim/mobility/kinematics.hpp"
#include "psim/strategy/locks.hpp"
#include "psim/strategy/pool.hpp"

namespace psim::strategy {

struct ReadinessState {
  bool busy_transfer = false;
  bool safety_critical = false;
  double last_change_time = 0.0;
};

/// No active lock, no transfer in progress, no safety-critical situation.
bool is_change_permitted(const LockState& locks, const ReadinessState& readiness,
                         double now);

/// Pseudonym state of one vehicle: one pool and one active id per scope.
struct IdentityState {
  PseudonymPool cam_pool;
  PseudonymPool denm_pool;
  std::optional<beaconing::StationId> cam_id;
  std::optional<beaconing::StationId> denm_id;
  double silence_until = 0.0;  // silent on [change time, silence_until)

  IdentityState(PoolSpec cam, PoolSpec denm)
      : cam_pool(AppScope::kCam, std::move(cam)),
        denm_pool(AppScope::kDenm, std::move(denm)) {}

  bool in_silence(double now) const { return now < silence_until - kTimeEpsilon; }
  /// Earliest expiry among the active tickets, if any is active.
  std::optional<double> active_valid_until() const;
};

struct ChangeRecord {
  VehicleId vehicle = 0;
  double t = 0.0;
  bool startup = false;
  std::optional<beaconing::StationId> old_cam;
  std::optional<beaconing::StationId> old_denm;
  beaconing::StationId new_cam;
  beaconing::StationId new_denm;
  double silence_until = 0.0;
  /// Broadcast under the old ids before silence starts, when notify is set.
  std::vector<beaconing::DeactivationNotice> notices;
};

enum class ChangeError { kPoolExhausted };

/// Switches every scope to its next ticket at once. Either both scopes
/// switch or neither does. The startup change (no active ids yet) has no
/// silence and no notices. Permission is the caller's responsibility.
Result<ChangeRecord, ChangeError> execute_change(VehicleId vehicle,
                                                 IdentityState& identity,
                                                 mobility::TripState& trip,
                                                 ReadinessState& readiness,
                                                 double silence_s, bool notify,
                                                 double now);

struct CoordinatorCandidate {
  VehicleId id = 0;
  double last_change_time = 0.0;
  bool permitted = true;  // is_change_permitted
  bool due = true;        // change interval elapsed
  bool in_silence = false;
};

/// Vehicles commanded to change this tick, sorted by id. Ready vehicles are
/// taken oldest last_change_time first (lower id on ties) until the region's
/// silent count would exceed max_silent_fraction of its population.
std::vector<VehicleId> coordinate_network_change(
    std::span<const CoordinatorCandidate> view, double max_silent_fraction);

}  // namespace psim::strategy
