#pragma once

#include <cmath>
#include <stdexcept>

namespace emp {

/// 2-D vector in meters (positions) or meters/second (velocities).
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2 &operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2 &operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned simulation area anchored at the origin.
struct Rect
{
  double width = 0.0;
  double height = 0.0;

  bool contains(Vec2 p) const
  {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  Vec2 center() const { return {width / 2.0, height / 2.0}; }
};

/// Unit-disk connectivity: the link is valid iff the distance is at most r.
inline bool link_connected(Vec2 a, Vec2 b, double range)
{
  if (!(range > 0.0))
    throw std::invalid_argument("link_connected: range must be positive");
  // Compare squared distances so that the boundary case is exact for
  // representable inputs like (250, 0).
  return norm_sq(a - b) <= range * range;
}

}  // namespace emp
