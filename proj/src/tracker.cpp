#include "emp/tracker.hpp"

#include <stdexcept>

namespace emp {

void LocationTracker::add_fix(const Measurement &fix)
{
  if (!last_) {
    filter_ = filter_init(fix, model_);
    last_ = fix;
    return;
  }
  if (!(fix.timestamp > last_->timestamp))
    throw std::logic_error("LocationTracker: fixes must be strictly increasing in time");
  prev_ = last_;
  last_ = fix;
  const Vec2 vel = estimate_velocity(*last_, *prev_);
  StateVector z;
  z << fix.measured_position.x, fix.measured_position.y, vel.x, vel.y;
  const FilterState prior = time_update(filter_, fix.timestamp, model_.q_scale);
  filter_ = measurement_update(prior, z, model_);
}

NodeKinematicEstimate LocationTracker::raw_estimate(double now) const
{
  if (!last_)
    throw std::logic_error("LocationTracker: no fix yet");
  NodeKinematicEstimate est;
  est.position = last_->measured_position;
  est.velocity = prev_ ? estimate_velocity(*last_, *prev_) : Vec2{};
  est.timestamp = last_->timestamp;
  return advance_estimate(est, now);
}

NodeKinematicEstimate LocationTracker::filtered_estimate(double now) const
{
  if (!last_)
    throw std::logic_error("LocationTracker: no fix yet");
  NodeKinematicEstimate est;
  est.position = {filter_.x_hat(0), filter_.x_hat(1)};
  est.velocity = {filter_.x_hat(2), filter_.x_hat(3)};
  est.rms_error = position_rms(filter_).rms_error;
  est.timestamp = filter_.last_update;
  return advance_estimate(est, now);
}

}  // namespace emp
