#include "emp/noise.hpp"

#include <random>
#include <stdexcept>

namespace emp {

Measurement measure_position(const KinematicState &state, const NoiseModel &noise,
                             RngEngine &rng)
{
  if (!(noise.sigma >= 0.0))
    throw std::invalid_argument("measure_position: sigma must be non-negative");
  std::normal_distribution<double> standard(0.0, 1.0);
  const double wx = standard(rng);
  const double wy = standard(rng);
  Measurement m;
  m.timestamp = state.timestamp;
  m.measured_position = state.position;
  if (noise.sigma > 0.0)
    m.measured_position += Vec2{wx, wy} * noise.sigma;
  return m;
}

}  // namespace emp
