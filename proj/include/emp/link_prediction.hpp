#pragma once

#include "emp/geometry.hpp"
#include "emp/noise.hpp"

#include <limits>
#include <span>

namespace emp {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Position/velocity belief about one node at `timestamp`.
struct NodeKinematicEstimate
{
  Vec2 position;
  Vec2 velocity;
  double rms_error = 0.0;
  double timestamp = 0.0;
};

struct LinkForecast
{
  double ldt = 0.0;      ///< may be kUnbounded
  double epsilon = 0.0;  ///< may be kUnbounded
  bool risky = false;    ///< ldt < epsilon
};

struct RouteMetric
{
  double ret = kUnbounded;
  int hop_count = 1;
};

Vec2 predict_position(const NodeKinematicEstimate &est, double dt);

/// Same estimate advanced to `t` by linear extrapolation; rms is kept.
NodeKinematicEstimate advance_estimate(const NodeKinematicEstimate &est, double t);

/// Finite-difference velocity between two fixes. Throws std::invalid_argument
/// unless curr is strictly later than prev.
Vec2 estimate_velocity(const Measurement &curr, const Measurement &prev);

/// Largest dt >= 0 for which the linearly extrapolated separation stays
/// within range. kUnbounded for a connected pair with zero relative velocity.
double link_duration(const NodeKinematicEstimate &a, const NodeKinematicEstimate &b,
                     double range);

/// Minimum of the per-link durations. Throws std::invalid_argument on empty input.
double route_expiration(std::span<const double> ldts);

/// Combined position RMS divided by relative speed. 0 when both RMS are 0;
/// kUnbounded when only the speed is 0.
double confidence_level(double a_rms, double b_rms, double rel_speed);

LinkForecast forecast_link(const NodeKinematicEstimate &a, const NodeKinematicEstimate &b,
                           double range);

/// Finite wire encoding of an unbounded duration.
inline double cap_duration(double value, double horizon)
{
  return value < horizon ? value : horizon;
}

}  // namespace emp
