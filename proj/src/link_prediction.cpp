#include "emp/link_prediction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emp {

Vec2 predict_position(const NodeKinematicEstimate &est, double dt)
{
  if (dt < 0.0)
    throw std::invalid_argument("predict_position: dt must be non-negative");
  return est.position + est.velocity * dt;
}

NodeKinematicEstimate advance_estimate(const NodeKinematicEstimate &est, double t)
{
  NodeKinematicEstimate out = est;
  out.position = predict_position(est, t - est.timestamp);
  out.timestamp = t;
  return out;
}

Vec2 estimate_velocity(const Measurement &curr, const Measurement &prev)
{
  const double dt = curr.timestamp - prev.timestamp;
  if (!(dt > 0.0))
    throw std::invalid_argument("estimate_velocity: fixes must be strictly ordered in time");
  return (curr.measured_position - prev.measured_position) / dt;
}

double link_duration(const NodeKinematicEstimate &a, const NodeKinematicEstimate &b,
                     double range)
{
  if (!(range > 0.0))
    throw std::invalid_argument("link_duration: range must be positive");
  const Vec2 dx = a.position - b.position;
  const Vec2 dv = a.velocity - b.velocity;
  const double c = norm_sq(dx) - range * range;
  const double qa = norm_sq(dv);
  if (qa == 0.0)
    return c <= 0.0 ? kUnbounded : 0.0;
  const double qb = dot(dx, dv);  // half of the linear coefficient
  const double disc = qb * qb - qa * c;
  if (disc < 0.0)
    return 0.0;  // never within range
  // Larger root of qa t^2 + 2 qb t + c = 0, in the cancellation-free form.
  const double sq = std::sqrt(disc);
  double upper;
  if (qb <= 0.0) {
    upper = (-qb + sq) / qa;
  } else {
    // -qb + sq = -c / (qb + sq)
    upper = -c / (qb + sq);
  }
  return std::max(upper, 0.0);
}

double route_expiration(std::span<const double> ldts)
{
  if (ldts.empty())
    throw std::invalid_argument("route_expiration: route has no links");
  return *std::min_element(ldts.begin(), ldts.end());
}

double confidence_level(double a_rms, double b_rms, double rel_speed)
{
  if (rel_speed < 0.0)
    throw std::invalid_argument("confidence_level: relative speed must be non-negative");
  const double spread = std::hypot(a_rms, b_rms);
  if (spread == 0.0)
    return 0.0;
  if (rel_speed == 0.0)
    return kUnbounded;
  return spread / rel_speed;
}

LinkForecast forecast_link(const NodeKinematicEstimate &a, const NodeKinematicEstimate &b,
                           double range)
{
  LinkForecast f;
  f.ldt = link_duration(a, b, range);
  f.epsilon = confidence_level(a.rms_error, b.rms_error, norm(a.velocity - b.velocity));
  f.risky = f.ldt < f.epsilon;
  return f;
}

}  // namespace emp
