#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emp/kalman.hpp"
#include "emp/oracles/oracles.hpp"
#include "emp/tracker.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace emp;

namespace {

Measurement fix_at(double t, Vec2 p)
{
  Measurement m;
  m.measured_position = p;
  m.timestamp = t;
  return m;
}

StateMatrix random_psd(RngEngine &rng, double scale)
{
  std::normal_distribution<double> n(0.0, 1.0);
  StateMatrix L;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      L(i, j) = n(rng) * scale;
  return L * L.transpose() + 1e-3 * StateMatrix::Identity();
}

bool symmetric(const StateMatrix &P) { return (P - P.transpose()).cwiseAbs().maxCoeff() < 1e-9; }

double min_eigen(const StateMatrix &P)
{
  return Eigen::SelfAdjointEigenSolver<StateMatrix>(P).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("measurement covariance from sigma")
{
  const FilterModel diag = FilterModel::from_sigma(20.0, 1.0, true);
  CHECK(diag.R(0, 0) == doctest::Approx(400.0));
  CHECK(diag.R(1, 1) == doctest::Approx(400.0));
  CHECK(diag.R(2, 2) == doctest::Approx(800.0));
  CHECK(diag.R(0, 2) == 0.0);
  const FilterModel cross = FilterModel::from_sigma(20.0, 2.0, false);
  CHECK(cross.R(2, 2) == doctest::Approx(200.0));
  CHECK(cross.R(0, 2) == doctest::Approx(200.0));
  CHECK(cross.R(2, 0) == doctest::Approx(200.0));
  CHECK(cross.R(0, 3) == 0.0);
  CHECK(min_eigen(cross.R) >= -1e-9);
}

TEST_CASE("filter_init")
{
  const FilterModel model = FilterModel::from_sigma(10.0, 1.0);
  const FilterState s = filter_init(fix_at(3.0, {100, 200}), model);
  CHECK(s.x_hat == StateVector(100, 200, 0, 0));
  CHECK(s.P == model.R);
  CHECK(s.last_update == 3.0);
  const FilterState t = filter_init(fix_at(3.0, {100, 200}), model);
  CHECK(s.x_hat == t.x_hat);
  CHECK(s.P == t.P);
}

TEST_CASE("time_update")
{
  FilterState s;
  s.x_hat = StateVector(0, 0, 10, 0);
  s.P = FilterModel::from_sigma(5.0, 1.0).R;
  const FilterState p = time_update(s, 2.0);
  CHECK(p.x_hat == StateVector(20, 0, 10, 0));
  CHECK(p.last_update == 2.0);
  CHECK(p.P.trace() >= s.P.trace());
  CHECK(symmetric(p.P));
  const FilterState same = time_update(s, 0.0);
  CHECK(same.x_hat == s.x_hat);
  CHECK(same.P == s.P);
  s.last_update = 5.0;
  CHECK_THROWS_AS(time_update(s, 4.0), std::logic_error);
}

TEST_CASE("time_update grows the covariance trace")
{
  // Holds whenever position and velocity errors are not anti-correlated,
  // which covers every covariance the filter itself produces.
  RngEngine rng(2);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    FilterState s;
    StateMatrix P = random_psd(rng, 3.0);
    P.block<2, 2>(0, 2).setZero();
    P.block<2, 2>(2, 0).setZero();
    s.P = P;
    CHECK(time_update(s, u(rng)).P.trace() >= s.P.trace());
  }
  LocationTracker t(FilterModel::from_sigma(20.0, 1.0, false));
  for (int k = 0; k < 30; ++k) {
    t.add_fix(fix_at(k, {k * 3.0, 0.0}));
    CHECK(time_update(t.filter(), k + u(rng)).P.trace() >= t.filter().P.trace());
  }
}

TEST_CASE("measurement_update limits")
{
  FilterState prior;
  prior.x_hat = StateVector(1, 2, 3, 4);
  prior.P = 50.0 * StateMatrix::Identity();
  const StateVector z(10, 20, 30, 40);

  SUBCASE("perfect measurement")
  {
    FilterModel model;  // R = 0
    const FilterState post = measurement_update(prior, z, model);
    CHECK(post.x_hat == z);
    CHECK(post.P.isZero());
  }
  SUBCASE("perfect prior")
  {
    FilterState certain = prior;
    certain.P.setZero();
    const FilterState post = measurement_update(certain, z, FilterModel::from_sigma(20.0, 1.0));
    CHECK((post.x_hat - prior.x_hat).norm() < 1e-12);
  }
  SUBCASE("singular innovation covariance restarts")
  {
    FilterModel model;
    model.R = StateMatrix::Zero();
    model.R(0, 0) = 1.0;  // singular, and the prior is singular too
    FilterState certain = prior;
    certain.P.setZero();
    const FilterState post = measurement_update(certain, z, model);
    CHECK(post.resets == 1);
    CHECK(post.x_hat == z);
    CHECK(post.P == model.R);
  }
}

TEST_CASE("measurement_update keeps P symmetric PSD and shrinks rms")
{
  RngEngine rng(3);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int i = 0; i < 300; ++i) {
    FilterState prior;
    prior.P = random_psd(rng, 4.0);
    prior.x_hat = StateVector(n(rng), n(rng), n(rng), n(rng));
    FilterModel model;
    model.R = random_psd(rng, 2.0);
    const StateVector z(n(rng), n(rng), n(rng), n(rng));
    const FilterState post = measurement_update(prior, z, model);
    REQUIRE(symmetric(post.P));
    REQUIRE(min_eigen(post.P) >= -1e-9);
    REQUIRE(position_rms(post).rms_error <= position_rms(prior).rms_error + 1e-9);
  }
}

TEST_CASE("simple covariance form matches the Joseph form")
{
  RngEngine rng(4);
  for (int i = 0; i < 200; ++i) {
    const StateMatrix P = random_psd(rng, 3.0);
    const StateMatrix R = random_psd(rng, 1.5);
    const StateMatrix K = kalman_gain(P, R);
    const StateMatrix simple = (StateMatrix::Identity() - K) * P;
    const StateMatrix joseph = joseph_covariance(P, K, R);
    REQUIRE((simple - joseph).norm() <= 1e-6 * joseph.norm());
  }
}

TEST_CASE("position_rms")
{
  FilterState s;
  s.P(0, 0) = 100.0;
  s.P(1, 1) = 100.0;
  CHECK(position_rms(s).rms_error == doctest::Approx(14.142).epsilon(1e-4));
  CHECK(position_rms(FilterState{}).rms_error == 0.0);
  s.P(1, 1) = -1e-12;
  CHECK(position_rms(s).rms_error == doctest::Approx(10.0));
}

TEST_CASE("static target contracts the error")
{
  oracles::KalmanMcParams p;
  p.trials = 200;
  const oracles::KalmanMcReport r = oracles::kalman_static_target(p);
  CHECK(r.filtered_rms < 20.0);
  CHECK(r.filtered_rms < r.raw_rms);
}

TEST_CASE("innovations of a static target are zero mean")
{
  const double sigma = 20.0;
  const FilterModel model = FilterModel::from_sigma(sigma, 1.0);
  std::normal_distribution<double> noise(0.0, sigma);
  double sum = 0.0, sum_sq = 0.0;
  int count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RngEngine rng = make_stream(17, trial, StreamKind::kNoise);
    Vec2 prev{noise(rng), noise(rng)};
    FilterState s = filter_init(fix_at(0.0, prev), model);
    for (int k = 1; k < 30; ++k) {
      const Vec2 m{noise(rng), noise(rng)};
      const StateVector z(m.x, m.y, m.x - prev.x, m.y - prev.y);
      prev = m;
      const FilterState prior = time_update(s, k);
      const double innov = z(0) - prior.x_hat(0);
      sum += innov;
      sum_sq += innov * innov;
      ++count;
      s = measurement_update(prior, z, model);
    }
  }
  const double mean = sum / count;
  const double se = std::sqrt((sum_sq / count - mean * mean) / count);
  CHECK(std::abs(mean) < 3.0 * se);
}

TEST_CASE("tracker with zero noise reproduces the raw estimate")
{
  LocationTracker t(FilterModel::from_sigma(0.0, 1.0));
  const Vec2 v{3, -2};
  for (int k = 0; k < 20; ++k) {
    const Vec2 p = Vec2{50, 60} + v * static_cast<double>(k) + (k > 10 ? Vec2{k * 1.0, 0} : Vec2{});
    t.add_fix(fix_at(k, p));
    const auto raw = t.raw_estimate(k + 0.4);
    const auto filt = t.filtered_estimate(k + 0.4);
    REQUIRE(raw.position == filt.position);
    REQUIRE(raw.velocity == filt.velocity);
    REQUIRE(filt.rms_error == 0.0);
  }
}

TEST_CASE("tracker velocity and ordering")
{
  LocationTracker t(FilterModel::from_sigma(5.0, 1.0));
  CHECK_FALSE(t.has_fix());
  t.add_fix(fix_at(0.0, {0, 0}));
  CHECK(t.has_fix());
  CHECK(t.raw_estimate(0.0).velocity == Vec2{0, 0});
  CHECK(t.filtered_estimate(0.0).velocity == Vec2{0, 0});
  t.add_fix(fix_at(1.0, {10, 0}));
  CHECK(t.raw_estimate(1.0).velocity == Vec2{10, 0});
  CHECK(t.raw_estimate(3.0).position == Vec2{30, 0});
  CHECK_THROWS(t.add_fix(fix_at(1.0, {10, 0})));
}

TEST_CASE("tracker is deterministic")
{
  auto run = [] {
    LocationTracker t(FilterModel::from_sigma(20.0, 1.0, true, 2.0));
    RngEngine rng(5);
    std::normal_distribution<double> n(0.0, 20.0);
    for (int k = 0; k < 50; ++k)
      t.add_fix(fix_at(k, {k * 5.0 + n(rng), n(rng)}));
    return t.filter();
  };
  const FilterState a = run(), b = run();
  CHECK(a.x_hat == b.x_hat);
  CHECK(a.P == b.P);
}
