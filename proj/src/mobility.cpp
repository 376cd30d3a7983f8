#include "emp/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emp {
namespace {

double uniform_open(RngEngine &rng, double lo, double hi)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  double v = dist(rng);
  while (v <= lo || v >= hi)
    v = dist(rng);
  return v;
}

Vec2 clamp_to(const Rect &rect, Vec2 p)
{
  return {std::clamp(p.x, 0.0, rect.width), std::clamp(p.y, 0.0, rect.height)};
}

}  // namespace

void validate_rwp(const Rect &rect, SpeedRange speeds)
{
  if (!(rect.width > 0.0) || !(rect.height > 0.0))
    throw std::invalid_argument("random waypoint: simulation area must be non-degenerate");
  if (!(speeds.min > 0.0) || speeds.min > speeds.max || !std::isfinite(speeds.max))
    throw std::invalid_argument("random waypoint: speed range must satisfy 0 < v_min <= v_max");
}

Waypoint rwp_next_waypoint(const Rect &rect, SpeedRange speeds, double pause, RngEngine &rng)
{
  validate_rwp(rect, speeds);
  Waypoint wp;
  wp.target = {uniform_open(rng, 0.0, rect.width), uniform_open(rng, 0.0, rect.height)};
  if (speeds.min == speeds.max) {
    wp.speed = speeds.min;
  } else {
    std::uniform_real_distribution<double> speed(speeds.min, speeds.max);
    wp.speed = speed(rng);
  }
  wp.pause_after = pause;
  return wp;
}

RwpState advance_node(RwpState s, double dt, const Rect &rect, SpeedRange speeds,
                      double pause, RngEngine &rng)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("advance_node: dt must be positive");
  const double end = s.kin.timestamp + dt;
  double now = s.kin.timestamp;
  while (now < end) {
    if (s.paused) {
      if (s.pause_until > end) {
        now = end;
        break;
      }
      now = s.pause_until;
      s.paused = false;
      s.waypoint = rwp_next_waypoint(rect, speeds, pause, rng);
      continue;
    }
    const Vec2 to_target = s.waypoint.target - s.kin.position;
    const double dist = norm(to_target);
    const double time_to_arrive = dist / s.waypoint.speed;
    const double remaining = end - now;
    if (time_to_arrive <= remaining) {
      s.kin.position = s.waypoint.target;
      now += time_to_arrive;
      ++s.legs_completed;
      if (s.waypoint.pause_after > 0.0) {
        s.paused = true;
        s.pause_until = now + s.waypoint.pause_after;
        s.kin.velocity = {};
      } else {
        s.waypoint = rwp_next_waypoint(rect, speeds, pause, rng);
      }
      if (time_to_arrive == remaining)
        break;
    } else {
      const Vec2 dir = to_target / dist;
      s.kin.position = clamp_to(rect, s.kin.position + dir * (s.waypoint.speed * remaining));
      s.kin.velocity = dir * s.waypoint.speed;
      now = end;
    }
  }
  if (!s.paused) {
    const Vec2 to_target = s.waypoint.target - s.kin.position;
    const double dist = norm(to_target);
    s.kin.velocity = dist > 0.0 ? to_target * (s.waypoint.speed / dist) : Vec2{};
  }
  s.kin.timestamp = end;
  return s;
}

RandomWaypointNode::RandomWaypointNode(const Rect &rect, SpeedRange speeds, double pause,
                                       RngEngine rng)
    : rect_(rect), speeds_(speeds), pause_(pause), rng_(std::move(rng))
{
  validate_rwp(rect_, speeds_);
  state_.kin.position = {uniform_open(rng_, 0.0, rect_.width),
                         uniform_open(rng_, 0.0, rect_.height)};
  state_.waypoint = rwp_next_waypoint(rect_, speeds_, pause_, rng_);
  leg_start_ = state_.kin.position;
  leg_start_time_ = 0.0;
  leg_end_time_ = distance(leg_start_, state_.waypoint.target) / state_.waypoint.speed;
}

double RandomWaypointNode::next_event_time() const { return leg_end_time_; }

void RandomWaypointNode::roll_to(double t)
{
  while (t >= leg_end_time_) {
    if (state_.paused) {
      state_.paused = false;
      state_.waypoint = rwp_next_waypoint(rect_, speeds_, pause_, rng_);
      leg_start_ = state_.kin.position;
      leg_start_time_ = leg_end_time_;
      leg_end_time_ = leg_start_time_ + distance(leg_start_, state_.waypoint.target) /
                                            state_.waypoint.speed;
      continue;
    }
    state_.kin.position = state_.waypoint.target;
    ++state_.legs_completed;
    leg_start_ = state_.kin.position;
    leg_start_time_ = leg_end_time_;
    if (state_.waypoint.pause_after > 0.0) {
      state_.paused = true;
      state_.pause_until = leg_start_time_ + state_.waypoint.pause_after;
      leg_end_time_ = state_.pause_until;
    } else {
      state_.waypoint = rwp_next_waypoint(rect_, speeds_, pause_, rng_);
      leg_end_time_ = leg_start_time_ + distance(leg_start_, state_.waypoint.target) /
                                            state_.waypoint.speed;
    }
  }
}

KinematicState RandomWaypointNode::state_at(double t)
{
  if (t < state_.kin.timestamp)
    throw std::logic_error("RandomWaypointNode: queries must be non-decreasing in time");
  roll_to(t);
  KinematicState out;
  out.timestamp = t;
  if (state_.paused) {
    out.position = leg_start_;
    out.velocity = {};
  } else {
    const double span = leg_end_time_ - leg_start_time_;
    const double f = span > 0.0 ? (t - leg_start_time_) / span : 1.0;
    const Vec2 delta = state_.waypoint.target - leg_start_;
    out.position = clamp_to(rect_, leg_start_ + delta * f);
    const double len = norm(delta);
    out.velocity = len > 0.0 ? delta * (state_.waypoint.speed / len) : Vec2{};
  }
  state_.kin.timestamp = t;
  return out;
}

}  // namespace emp
