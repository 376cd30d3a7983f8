#include "emp/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace emp {
namespace {

StateMatrix symmetrize(const StateMatrix &m) { return 0.5 * (m + m.transpose()); }

FilterState restart_from(const StateVector &z, const FilterState &prior,
                         const FilterModel &model)
{
  FilterState s;
  s.x_hat = z;
  s.P = model.R;
  s.last_update = prior.last_update;
  s.resets = prior.resets + 1;
  return s;
}

}  // namespace

FilterModel FilterModel::from_sigma(double sigma, double period, bool diagonal_only,
                                    double q_scale)
{
  if (!(sigma >= 0.0))
    throw std::invalid_argument("FilterModel: sigma must be non-negative");
  if (!(period > 0.0))
    throw std::invalid_argument("FilterModel: measurement period must be positive");
  if (!(q_scale >= 0.0))
    throw std::invalid_argument("FilterModel: q_scale must be non-negative");
  FilterModel m;
  m.measurement_period = period;
  m.q_scale = q_scale;
  const double var = sigma * sigma;
  for (int axis = 0; axis < 2; ++axis) {
    m.R(axis, axis) = var;
    m.R(axis + 2, axis + 2) = 2.0 * var / (period * period);
    if (!diagonal_only) {
      m.R(axis, axis + 2) = var / period;
      m.R(axis + 2, axis) = var / period;
    }
  }
  return m;
}

StateMatrix transition(double dt)
{
  StateMatrix a = StateMatrix::Identity();
  a(0, 2) = dt;
  a(1, 3) = dt;
  return a;
}

StateMatrix process_noise(double dt, double q_scale)
{
  StateMatrix q = StateMatrix::Zero();
  if (q_scale == 0.0 || dt == 0.0)
    return q;
  const double pos = q_scale * dt * dt * dt / 3.0;
  const double vel = q_scale * dt;
  q.diagonal() << pos, pos, vel, vel;
  return q;
}

FilterState filter_init(const Measurement &first, const FilterModel &model)
{
  FilterState s;
  s.x_hat << first.measured_position.x, first.measured_position.y, 0.0, 0.0;
  s.P = model.R;
  s.last_update = first.timestamp;
  return s;
}

FilterState time_update(const FilterState &s, double now, double q_scale)
{
  if (now < s.last_update)
    throw std::logic_error("time_update: cannot predict backwards in time");
  const double dt = now - s.last_update;
  if (dt == 0.0)
    return s;
  const StateMatrix a = transition(dt);
  FilterState out = s;
  out.x_hat = a * s.x_hat;
  out.P = symmetrize(a * s.P * a.transpose() + process_noise(dt, q_scale));
  out.last_update = now;
  return out;
}

StateMatrix kalman_gain(const StateMatrix &prior_P, const StateMatrix &R)
{
  const StateMatrix innovation = symmetrize(prior_P + R);
  Eigen::LDLT<StateMatrix> ldlt(innovation);
  // K = P S^-1; both symmetric, so K^T = S^-1 P.
  return ldlt.solve(prior_P).transpose();
}

FilterState measurement_update(const FilterState &prior, const StateVector &z,
                               const FilterModel &model)
{
  if (model.R.isZero(0.0)) {
    // Perfect measurement: K = I.
    FilterState out = prior;
    out.x_hat = z;
    out.P.setZero();
    return out;
  }
  const StateMatrix innovation = symmetrize(prior.P + model.R);
  Eigen::LDLT<StateMatrix> ldlt(innovation);
  const auto d = ldlt.vectorD();
  const double scale = std::max(1.0, innovation.diagonal().cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 1e-12 * scale)
    return restart_from(z, prior, model);

  const StateMatrix k = ldlt.solve(prior.P).transpose();
  FilterState out = prior;
  out.x_hat = prior.x_hat + k * (z - prior.x_hat);
  out.P = symmetrize((StateMatrix::Identity() - k) * prior.P);
  return out;
}

PositionErrorStats position_rms(const FilterState &s)
{
  double px = s.P(0, 0);
  double py = s.P(1, 1);
  if (px < 0.0 || py < 0.0) {
    std::clog << "position_rms: clamping negative variance (" << px << ", " << py << ")\n";
    px = std::max(px, 0.0);
    py = std::max(py, 0.0);
  }
  return {std::sqrt(px + py)};
}

StateMatrix joseph_covariance(const StateMatrix &prior_P, const StateMatrix &K,
                              const StateMatrix &R)
{
  const StateMatrix ikh = StateMatrix::Identity() - K;
  return ikh * prior_P * ikh.transpose() + K * R * K.transpose();
}

}  // namespace emp
