#pragma once

// Brute-force references used to check the closed-form and filtering code.

#include "emp/link_prediction.hpp"
#include "emp/rng.hpp"

#include <cstdint>

namespace emp::oracles {

struct GridLdtOptions
{
  double step = 1e-3;
  double horizon = 3600.0;
};

/// Last grid time in [0, horizon] at which the linearly moving pair is within
/// range, found by marching the relative trajectory. Returns 0 when the pair is
/// never in range and kUnbounded when still in range at the horizon.
double grid_link_duration(const NodeKinematicEstimate &a, const NodeKinematicEstimate &b,
                          double range, const GridLdtOptions &opt = {});

struct LdtComparison
{
  std::size_t pairs = 0;
  std::size_t agreements = 0;
  std::size_t unbounded = 0;
  std::size_t connected = 0;  ///< pairs with a positive oracle duration
  double max_abs_error = 0.0; ///< over finite pairs
  double seconds = 0.0;
};

struct LdtComparisonParams
{
  std::size_t pairs = 10000;
  double width = 2000.0;
  double height = 1500.0;
  double max_speed = 20.0;
  double range = 250.0;
  double tolerance = 2e-3;
  std::uint64_t seed = 1;
};

/// Draws random estimate pairs and compares link_duration with the grid oracle.
LdtComparison compare_link_duration(const LdtComparisonParams &p);

struct KalmanMcParams
{
  double sigma = 20.0;
  int fixes = 50;
  double period = 1.0;
  int trials = 200;
  bool diagonal_only = true;
  std::uint64_t seed = 1;
};

struct KalmanMcReport
{
  double raw_rms = 0.0;        ///< radial RMS of the last raw fix
  double filtered_rms = 0.0;   ///< radial RMS of the last filtered position
  double empirical_var = 0.0;  ///< per-axis sample variance of the filtered error
  double reported_var = 0.0;   ///< mean of the filter's per-axis position variance
  double seconds = 0.0;
};

/// Static-target Monte-Carlo of the location tracker.
KalmanMcReport kalman_static_target(const KalmanMcParams &p);

}  // namespace emp::oracles
