#pragma once

#include "emp/kalman.hpp"
#include "emp/link_prediction.hpp"

#include <optional>

namespace emp {

/// Per-node location service. Feeds periodic fixes into the Kalman filter and
/// also keeps the raw fixes, so both the raw (finite-difference) view and the
/// filtered view are available from the same measurement sequence.
class LocationTracker
{
 public:
  explicit LocationTracker(FilterModel model) : model_(std::move(model)) {}

  void add_fix(const Measurement &fix);

  bool has_fix() const { return last_.has_value(); }

  /// Latest fix with the finite-difference velocity of the last two fixes
  /// (zero until two fixes exist), extrapolated to `now`. rms is 0.
  NodeKinematicEstimate raw_estimate(double now) const;

  /// Kalman estimate extrapolated to `now`; rms comes from the a-posteriori
  /// covariance of the last correction.
  NodeKinematicEstimate filtered_estimate(double now) const;

  const FilterState &filter() const { return filter_; }
  const FilterModel &model() const { return model_; }

 private:
  FilterModel model_;
  FilterState filter_;
  std::optional<Measurement> last_;
  std::optional<Measurement> prev_;
};

}  // namespace emp
