#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psim/common/geometry.hpp"

namespace psim::mobility {

struct Segment {
  std::string id;
  Vec2 start;
  Vec2 end;
  double speed_limit_mps = 13.9;

  double length() const { return distance(start, end); }
  /// Unit vector from start to end.
  Vec2 direction() const;
  Vec2 point_at(double offset_m) const;
};

struct Intersection {
  Vec2 point;
  std::vector<std::string> segment_ids;  // sorted
};

/// Straight directed segments; routes are sequences of segment ids whose
/// consecutive endpoints coincide.
class RoadNetwork {
 public:
  /// Returns an error description, or nullopt on success.
  std::optional<std::string> add_segment(Segment segment);

  const Segment* find(const std::string& id) const;
  const std::vector<Segment>& segments() const { return segments_; }

  /// Points shared by two or more segments (endpoints or proper crossings),
  /// ordered by (x, y).
  std::vector<Intersection> intersections() const;

  /// Resolves ids to segments; fails on unknown ids or disconnected steps.
  std::optional<std::vector<Segment>> resolve_route(
      const std::vector<std::string>& ids, std::string* error = nullptr) const;

 private:
  std::vector<Segment> segments_;
  std::map<std::string, std::size_t> index_;
};

/// Polyline a vehicle follows.
struct Route {
  std::vector<Segment> segments;
  double total_length() const;
};

/// Tolerance for matching endpoints and intersection points.
inline constexpr double kGeometryTolerance = 1e-6;

}  // namespace psim::mobility
