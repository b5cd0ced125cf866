#include "psim/mobility/road.hpp"

#include <algorithm>
#include <cmath>

namespace psim::mobility {

Vec2 Segment::direction() const {
  double len = length();
  return {(end.x - start.x) / len, (end.y - start.y) / len};
}

Vec2 Segment::point_at(double offset_m) const {
  Vec2 d = direction();
  return {start.x + d.x * offset_m, start.y + d.y * offset_m};
}

std::optional<std::string> RoadNetwork::add_segment(Segment segment) {
  if (segment.id.empty()) return "segment id must be non-empty";
  if (index_.count(segment.id)) return "duplicate segment id " + segment.id;
  if (!(segment.length() > 0.0)) return "segment " + segment.id + " has zero length";
  if (!(segment.speed_limit_mps > 0.0)) {
    return "segment " + segment.id + " needs a positive speed limit";
  }
  index_[segment.id] = segments_.size();
  segments_.push_back(std::move(segment));
  return std::nullopt;
}

const Segment* RoadNetwork::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &segments_[it->second];
}

namespace {

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Single intersection point of two closed segments, if any.
std::optional<Vec2> segment_intersection(const Segment& a, const Segment& b) {
  Vec2 r = a.end - a.start;
  Vec2 s = b.end - b.start;
  double denom = cross(r, s);
  Vec2 qp = b.start - a.start;
  if (std::abs(denom) < 1e-12) {
    // Parallel: only shared endpoints count.
    for (Vec2 p : {a.start, a.end}) {
      for (Vec2 q : {b.start, b.end}) {
        if (distance(p, q) <= kGeometryTolerance) return p;
      }
    }
    return std::nullopt;
  }
  double t = cross(qp, s) / denom;
  double u = cross(qp, r) / denom;
  const double eps = 1e-9;
  if (t < -eps || t > 1 + eps || u < -eps || u > 1 + eps) return std::nullopt;
  return Vec2{a.start.x + t * r.x, a.start.y + t * r.y};
}

}  // namespace

std::vector<Intersection> RoadNetwork::intersections() const {
  std::vector<Intersection> out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    for (std::size_t j = i + 1; j < segments_.size(); ++j) {
      auto p = segment_intersection(segments_[i], segments_[j]);
      if (!p) continue;
      auto it = std::find_if(out.begin(), out.end(), [&](const Intersection& x) {
        return distance(x.point, *p) <= kGeometryTolerance;
      });
      if (it == out.end()) {
        out.push_back({*p, {}});
        it = out.end() - 1;
      }
      for (const auto* id : {&segments_[i].id, &segments_[j].id}) {
        if (std::find(it->segment_ids.begin(), it->segment_ids.end(), *id) ==
            it->segment_ids.end()) {
          it->segment_ids.push_back(*id);
        }
      }
    }
  }
  for (auto& x : out) std::sort(x.segment_ids.begin(), x.segment_ids.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
  });
  return out;
}

std::optional<std::vector<Segment>> RoadNetwork::resolve_route(
    const std::vector<std::string>& ids, std::string* error) const {
  std::vector<Segment> out;
  for (const auto& id : ids) {
    const Segment* s = find(id);
    if (!s) {
      if (error) *error = "unknown segment " + id;
      return std::nullopt;
    }
    if (!out.empty() && distance(out.back().end, s->start) > kGeometryTolerance) {
      if (error) *error = "segment " + id + " does not start where " + out.back().id + " ends";
      return std::nullopt;
    }
    out.push_back(*s);
  }
  if (out.empty()) {
    if (error) *error = "route is empty";
    return std::nullopt;
  }
  return out;
}

double Route::total_length() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.length();
  return total;
}

}  // namespace psim::mobility
