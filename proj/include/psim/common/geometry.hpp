#pragma once

#include <cmath>

namespace psim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline double squared_distance(Vec2 a, Vec2 b) { return (a - b).squared_norm(); }

}  // namespace psim
