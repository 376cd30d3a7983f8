#pragma once

#include "emp/geometry.hpp"
#include "emp/rng.hpp"

#include <vector>

namespace emp {

struct SpeedRange
{
  double min = 1.0;
  double max = 20.0;
};

struct KinematicState
{
  Vec2 position;
  Vec2 velocity;
  double timestamp = 0.0;
};

struct Waypoint
{
  Vec2 target;
  double speed = 0.0;
  double pause_after = 0.0;
};

/// Throws std::invalid_argument for a degenerate rect or a bad speed range.
void validate_rwp(const Rect &rect, SpeedRange speeds);

Waypoint rwp_next_waypoint(const Rect &rect, SpeedRange speeds, double pause,
                           RngEngine &rng);

/// Motion state of one random-waypoint node between queries.
struct RwpState
{
  KinematicState kin;
  Waypoint waypoint;
  double pause_until = 0.0;  ///< absolute time the current pause ends
  bool paused = false;
  int legs_completed = 0;
};

/// Advances a random-waypoint node by dt seconds. Leg arrivals, pauses and
/// new waypoint draws are handled inside; the returned state is stamped
/// kin.timestamp + dt.
RwpState advance_node(RwpState state, double dt, const Rect &rect, SpeedRange speeds,
                      double pause, RngEngine &rng);

/// Ground-truth trajectory of one node, evaluated lazily in closed form per
/// leg. Queries must be non-decreasing in time.
class RandomWaypointNode
{
 public:
  RandomWaypointNode(const Rect &rect, SpeedRange speeds, double pause, RngEngine rng);

  KinematicState state_at(double t);
  Vec2 position_at(double t) { return state_at(t).position; }

  /// Absolute time at which the current leg (or pause) ends.
  double next_event_time() const;
  int legs_completed() const { return state_.legs_completed; }

 private:
  void roll_to(double t);

  Rect rect_;
  SpeedRange speeds_;
  double pause_;
  RngEngine rng_;
  RwpState state_;
  Vec2 leg_start_;
  double leg_start_time_ = 0.0;
  double leg_end_time_ = 0.0;
};

}  // namespace emp
