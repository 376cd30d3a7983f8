#pragma once

#include "emp/noise.hpp"

#include <Eigen/Dense>

namespace emp {

using StateVector = Eigen::Vector4d;  // (pos_x, pos_y, vel_x, vel_y)
using StateMatrix = Eigen::Matrix4d;

struct FilterModel
{
  StateMatrix R = StateMatrix::Zero();
  double measurement_period = 1.0;
  /// White-acceleration process noise intensity (m^2/s^3). Zero ignores
  /// process errors entirely.
  double q_scale = 0.0;

  /// Analytic R for fixes with per-axis std-dev sigma taken every period
  /// seconds. Velocity pseudo-measurements are finite differences of fixes,
  /// so their variance is 2 sigma^2 / period^2 and, unless diagonal_only,
  /// they covary with the position fix by sigma^2 / period.
  static FilterModel from_sigma(double sigma, double period, bool diagonal_only = true,
                                double q_scale = 0.0);
};

struct FilterState
{
  StateVector x_hat = StateVector::Zero();
  StateMatrix P = StateMatrix::Zero();
  double last_update = 0.0;
  int resets = 0;  ///< measurement updates that hit a singular innovation covariance
};

struct PositionErrorStats
{
  double rms_error = 0.0;
};

/// A = [[I, dT I], [0, I]].
StateMatrix transition(double dt);
StateMatrix process_noise(double dt, double q_scale);

FilterState filter_init(const Measurement &first, const FilterModel &model);

/// Constant-velocity prediction to `now`. Throws std::logic_error when now
/// precedes the last update.
FilterState time_update(const FilterState &s, double now, double q_scale = 0.0);

/// Standard correction with B = I. On a singular innovation covariance the
/// filter restarts from the measurement (x_hat = z, P = R) and counts a reset.
FilterState measurement_update(const FilterState &prior, const StateVector &z,
                               const FilterModel &model);

PositionErrorStats position_rms(const FilterState &s);

/// Joseph stabilized form (I-K) P (I-K)^T + K R K^T; reference for tests.
StateMatrix joseph_covariance(const StateMatrix &prior_P, const StateMatrix &K,
                              const StateMatrix &R);
StateMatrix kalman_gain(const StateMatrix &prior_P, const StateMatrix &R);

}  // namespace emp
