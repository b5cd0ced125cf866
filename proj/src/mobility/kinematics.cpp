#include "psim/mobility/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psim::mobility {

void TripState::advance(double distance_m, double dt) {
  odometer_since_trip_start += distance_m;
  odometer_since_last_change += distance_m;
  time_since_last_change += dt;
}

void TripState::reset_change_counters() {
  odometer_since_last_change = 0.0;
  time_since_last_change = 0.0;
}

namespace {

double speed_cap(const MotionState& s, const Route& route) {
  double limit = route.segments[s.segment_index].speed_limit_mps *
                 kOverspeedTolerance;
  return std::min(s.target_speed_mps, limit);
}

void refresh_kinematics(MotionState& s, const Route& route) {
  const Segment& seg = route.segments[s.segment_index];
  Vec2 dir = seg.direction();
  s.kinematics.position = seg.point_at(s.offset_m);
  double speed = s.complete ? 0.0 : s.speed_mps;
  s.kinematics.velocity = dir * speed;
  s.kinematics.heading = std::atan2(dir.y, dir.x);
}

}  // namespace

MotionState initial_motion(const Route& route, double offset_m,
                           double speed_mps, double accel_mps2,
                           double target_speed_mps) {
  if (route.segments.empty()) throw std::invalid_argument("empty route");
  MotionState s;
  s.accel_mps2 = accel_mps2;
  s.target_speed_mps = target_speed_mps;
  double remaining = offset_m;
  while (s.segment_index + 1 < route.segments.size() &&
         remaining >= route.segments[s.segment_index].length()) {
    remaining -= route.segments[s.segment_index].length();
    ++s.segment_index;
  }
  double len = route.segments[s.segment_index].length();
  if (remaining > len) {
    remaining = len;
    s.complete = true;
  }
  s.offset_m = remaining;
  s.speed_mps = std::clamp(speed_mps, 0.0, speed_cap(s, route));
  refresh_kinematics(s, route);
  return s;
}

StepResult step_kinematics(const MotionState& state, const Route& route,
                           double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  StepResult out;
  out.state = state;
  MotionState& s = out.state;
  if (s.complete) return out;

  double travel = s.speed_mps * dt;
  double moved = 0.0;
  double remaining = travel;
  while (remaining > 0.0) {
    double left = route.segments[s.segment_index].length() - s.offset_m;
    if (remaining < left) {
      s.offset_m += remaining;
      moved += remaining;
      remaining = 0.0;
    } else if (s.segment_index + 1 < route.segments.size()) {
      moved += left;
      remaining -= left;
      ++s.segment_index;
      s.offset_m = 0.0;
    } else {
      moved += left;
      s.offset_m = route.segments[s.segment_index].length();
      s.complete = true;
      remaining = 0.0;
    }
  }
  // Exact accounting keeps the odometer equal to the sum of |v| * dt.
  out.distance_m = s.complete ? moved : travel;

  if (!s.complete) {
    s.speed_mps = std::clamp(s.speed_mps + s.accel_mps2 * dt, 0.0,
                             speed_cap(s, route));
  }
  refresh_kinematics(s, route);
  return out;
}

std::vector<VehicleId> region_query(std::span<const PositionedVehicle> world,
                                    Vec2 center, double radius) {
  std::vector<VehicleId> out;
  double r2 = radius * radius;
  for (const auto& v : world) {
    if (squared_distance(v.position, center) <= r2) out.push_back(v.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vec2 positioning_noise(Vec2 true_position, double sigma, Rng& rng) {
  if (sigma == 0.0) return true_position;
  double dx = rng.normal(0.0, sigma);
  double dy = rng.normal(0.0, sigma);
  return {true_position.x + dx, true_position.y + dy};
}

SpatialGrid::SpatialGrid(std::span<const PositionedVehicle> world,
                         double cell_size)
    : cell_size_(cell_size > 0.0 ? cell_size : 1.0),
      world_(world.begin(), world.end()) {
  for (std::size_t i = 0; i < world_.size(); ++i) {
    cells_[key(cell(world_[i].position.x), cell(world_[i].position.y))]
        .push_back(i);
  }
}

std::int64_t SpatialGrid::cell(double v) const {
  return static_cast<std::int64_t>(std::floor(v / cell_size_));
}

std::int64_t SpatialGrid::key(std::int64_t cx, std::int64_t cy) const {
  return (cx << 32) ^ (cy & 0xffffffff);
}

std::vector<VehicleId> SpatialGrid::query(Vec2 center, double radius) const {
  std::vector<VehicleId> out;
  double r2 = radius * radius;
  std::int64_t x0 = cell(center.x - radius), x1 = cell(center.x + radius);
  std::int64_t y0 = cell(center.y - radius), y1 = cell(center.y + radius);
  for (std::int64_t cx = x0; cx <= x1; ++cx) {
    for (std::int64_t cy = y0; cy <= y1; ++cy) {
      auto it = cells_.find(key(cx, cy));
      if (it == cells_.end()) continue;
      for (std::size_t i : it->second) {
        if (squared_distance(world_[i].position, center) <= r2) {
          out.push_back(world_[i].id);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace psim::mobility
