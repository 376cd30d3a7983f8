#include "emp/oracles/oracles.hpp"

#include "emp/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace emp::oracles {
namespace {

double elapsed(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double grid_link_duration(const NodeKinematicEstimate &a, const NodeKinematicEstimate &b,
                          double range, const GridLdtOptions &opt)
{
  const Vec2 dx = a.position - b.position;
  const Vec2 dv = a.velocity - b.velocity;
  const double speed = norm(dv);
  auto gap = [&](std::int64_t k) {
    const double t = static_cast<double>(k) * opt.step;
    return norm(dx + dv * t) - range;
  };
  const auto last = static_cast<std::int64_t>(std::floor(opt.horizon / opt.step));
  if (speed == 0.0)
    return gap(0) <= 0.0 ? kUnbounded : 0.0;

  // March in whole grid steps. The gap changes by at most speed * dt, so a step
  // of |gap| / speed cannot jump over a boundary crossing.
  std::int64_t k = 0;
  std::int64_t last_inside = -1;
  while (k <= last) {
    const double g = gap(k);
    if (g <= 0.0)
      last_inside = k;
    else if (last_inside >= 0)
      break;  // left the range for good
    const auto skip =
        static_cast<std::int64_t>(std::floor(std::abs(g) / speed / opt.step));
    k += std::max<std::int64_t>(1, skip);
  }
  if (last_inside < 0)
    return 0.0;
  if (k > last && gap(last) <= 0.0)
    return kUnbounded;
  // The coarse march may have skipped inside-points just before the exit.
  std::int64_t j = last_inside;
  while (j + 1 <= last && gap(j + 1) <= 0.0)
    ++j;
  if (j == last)
    return kUnbounded;
  return static_cast<double>(j) * opt.step;
}

LdtComparison compare_link_duration(const LdtComparisonParams &p)
{
  const auto t0 = std::chrono::steady_clock::now();
  RngEngine rng = make_stream(p.seed, 0, StreamKind::kMobility);
  std::uniform_real_distribution<double> ux(0.0, p.width);
  std::uniform_real_distribution<double> uy(0.0, p.height);
  std::uniform_real_distribution<double> speed(0.0, p.max_speed);
  std::uniform_real_distribution<double> heading(0.0, 2.0 * std::acos(-1.0));
  std::uniform_real_distribution<double> near(-p.range, p.range);
  auto draw_velocity = [&] {
    const double s = speed(rng);
    const double h = heading(rng);
    return Vec2{s * std::cos(h), s * std::sin(h)};
  };

  GridLdtOptions opt;
  LdtComparison out;
  for (std::size_t i = 0; i < p.pairs; ++i) {
    NodeKinematicEstimate a, b;
    a.position = {ux(rng), uy(rng)};
    // Half the pairs start near each other so most of them are connected.
    if (i % 2 == 0) {
      b.position = {std::clamp(a.position.x + near(rng), 0.0, p.width),
                    std::clamp(a.position.y + near(rng), 0.0, p.height)};
    } else {
      b.position = {ux(rng), uy(rng)};
    }
    a.velocity = draw_velocity();
    b.velocity = draw_velocity();

    const double exact = link_duration(a, b, p.range);
    const double grid = grid_link_duration(a, b, p.range, opt);
    ++out.pairs;
    if (grid > 0.0)
      ++out.connected;
    bool agree;
    if (grid == kUnbounded) {
      ++out.unbounded;
      agree = exact >= opt.horizon;
    } else {
      const double err = std::abs(exact - grid);
      out.max_abs_error = std::max(out.max_abs_error, err);
      agree = err <= p.tolerance;
    }
    if (agree)
      ++out.agreements;
  }
  out.seconds = elapsed(t0);
  return out;
}

KalmanMcReport kalman_static_target(const KalmanMcParams &p)
{
  const auto t0 = std::chrono::steady_clock::now();
  const FilterModel model = FilterModel::from_sigma(p.sigma, p.period, p.diagonal_only);
  const Vec2 truth{500.0, 400.0};
  std::normal_distribution<double> noise(0.0, p.sigma);

  double raw_sq = 0.0, filt_sq = 0.0, reported = 0.0;
  double sum_ex = 0.0, sum_ey = 0.0;
  for (int trial = 0; trial < p.trials; ++trial) {
    RngEngine rng = make_stream(p.seed, static_cast<std::uint64_t>(trial), StreamKind::kNoise);
    LocationTracker tracker(model);
    Measurement fix;
    for (int k = 0; k < p.fixes; ++k) {
      fix.timestamp = k * p.period;
      fix.measured_position = {truth.x + noise(rng), truth.y + noise(rng)};
      tracker.add_fix(fix);
    }
    const double t_end = fix.timestamp;
    const Vec2 raw_err = fix.measured_position - truth;
    const Vec2 filt_err = tracker.filtered_estimate(t_end).position - truth;
    raw_sq += norm_sq(raw_err);
    filt_sq += norm_sq(filt_err);
    sum_ex += filt_err.x;
    sum_ey += filt_err.y;
    const auto &P = tracker.filter().P;
    reported += 0.5 * (P(0, 0) + P(1, 1));
  }
  const double n = p.trials;
  KalmanMcReport r;
  r.raw_rms = std::sqrt(raw_sq / n);
  r.filtered_rms = std::sqrt(filt_sq / n);
  // Per-axis variance about the sample mean, pooled over both axes.
  const double mean_sq = (sum_ex * sum_ex + sum_ey * sum_ey) / (n * n);
  r.empirical_var = (filt_sq / n - mean_sq) * n / (n - 1.0) / 2.0;
  r.reported_var = reported / n;
  r.seconds = elapsed(t0);
  return r;
}

}  // namespace emp::oracles
