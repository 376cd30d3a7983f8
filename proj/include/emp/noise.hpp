#pragma once

#include "emp/geometry.hpp"
#include "emp/mobility.hpp"
#include "emp/rng.hpp"

namespace emp {

/// Zero-mean isotropic Gaussian location error, sigma meters per axis.
struct NoiseModel
{
  double sigma = 0.0;
};

struct Measurement
{
  Vec2 measured_position;
  double timestamp = 0.0;
};

/// Draws one fix. Always consumes two normal draws from rng so that noise
/// streams stay aligned across sigma values (sigma = 0 returns the truth).
Measurement measure_position(const KinematicState &state, const NoiseModel &noise,
                             RngEngine &rng);

}  // namespace emp
