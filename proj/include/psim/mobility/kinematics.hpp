#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "psim/common/geometry.hpp"
#include "psim/common/rng.hpp"
#include "psim/common/types.hpp"
#include "psim/mobility/road.hpp"

namespace psim::mobility {

/// Vehicles may exceed a segment's limit by this factor, never more.
inline constexpr double kOverspeedTolerance = 1.2;

struct Kinematics {
  Vec2 position;
  Vec2 velocity;
  double heading = 0.0;  // radians, atan2 of travel direction
};

/// Distance and time bookkeeping for change policies.
struct TripState {
  double trip_start_time = 0.0;
  double odometer_since_trip_start = 0.0;
  double odometer_since_last_change = 0.0;
  double time_since_last_change = 0.0;

  void advance(double distance_m, double dt);
  void reset_change_counters();
};

/// Position along a route plus longitudinal dynamics.
struct MotionState {
  std::size_t segment_index = 0;
  double offset_m = 0.0;
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  double target_speed_mps = 0.0;
  bool complete = false;
  Kinematics kinematics;
};

/// Places a vehicle `offset_m` along the route at the given speed.
MotionState initial_motion(const Route& route, double offset_m,
                           double speed_mps, double accel_mps2,
                           double target_speed_mps);

struct StepResult {
  MotionState state;
  double distance_m = 0.0;
};

/// Advances by |velocity| * dt along the polyline, then applies the
/// acceleration for the next step, capped by target speed and by the
/// overspeed tolerance of the segment now occupied. Running off the final
/// segment marks the trip complete. Throws std::invalid_argument if dt <= 0.
StepResult step_kinematics(const MotionState& state, const Route& route,
                           double dt);

struct PositionedVehicle {
  VehicleId id;
  Vec2 position;
};

/// Vehicles with |position - center| <= radius, sorted by id.
std::vector<VehicleId> region_query(std::span<const PositionedVehicle> world,
                                    Vec2 center, double radius);

/// Isotropic Gaussian perturbation, sigma per axis. sigma == 0 returns the
/// input without consuming randomness.
Vec2 positioning_noise(Vec2 true_position, double sigma, Rng& rng);

/// Uniform grid for repeated closed-ball neighbour queries.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const PositionedVehicle> world, double cell_size);

  /// Same contract as region_query.
  std::vector<VehicleId> query(Vec2 center, double radius) const;

 private:
  std::int64_t key(std::int64_t cx, std::int64_t cy) const;
  std::int64_t cell(double v) const;

  double cell_size_;
  std::vector<PositionedVehicle> world_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

}  // namespace psim::mobility
