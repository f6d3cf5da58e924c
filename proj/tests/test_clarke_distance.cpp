#include <doctest.h>

#include <random>

#include "offmorse/clarke_distance.hpp"
#include "offmorse/errors.hpp"
#include "test_helpers.hpp"

using namespace offmorse;
using offmorse::testing::two_points;
using offmorse::testing::v2;

TEST_CASE("Clarke gradient of d_Y") {
  const PointCloud origin = PointCloud::from_rows({{0.0, 0.0}});
  auto g = clarke_gradient_distance(origin, v2(0.0, 2.0));
  CHECK(g.generators.size() == 1);
  CHECK(g.delta() == doctest::Approx(1.0));

  const PointCloud pair = PointCloud::from_rows({{-1.0, 0.0}, {1.0, 0.0}});
  g = clarke_gradient_distance(pair, v2(0.0, 1.0));
  CHECK(g.generators.size() == 2);
  CHECK(g.delta() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  const double h = std::sqrt(0.39);
  g = clarke_gradient_distance(two_points(), v2(0.0, h), 1e-6);
  // |(u1 + u2) / 2| with u_i = (x - y_i) / |x - y_i|.
  const Eigen::Vector2d u1 = (v2(0.0, h) - v2(-0.5, 0.0)).normalized();
  const Eigen::Vector2d u2 = (v2(0.0, h) - v2(0.5, 0.0)).normalized();
  CHECK(g.delta() == doctest::Approx((0.5 * (u1 + u2)).norm()).epsilon(1e-12));
  CHECK(g.delta() == doctest::Approx(0.7806).epsilon(1e-4));

  CHECK_THROWS_AS(clarke_gradient_distance(pair, v2(1.0, 0.0)), Error);
}

TEST_CASE("property: generators are unit vectors and delta lies in [0, 1]") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const PointCloud ring = offmorse::testing::ring(9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = clarke_gradient_distance(ring, v2(u(rng), u(rng)), 1e-3);
    for (Index i = 0; i < g.generators.size(); ++i) CHECK(g.generators[i].norm() == doctest::Approx(1.0));
    CHECK(g.delta() >= 0.0);
    CHECK(g.delta() <= 1.0 + 1e-12);
  }
}

TEST_CASE("property: delta of d_Y is lower semi-continuous") {
  // Approaching a bisector point from one side: the limit inferior of Delta
  // is at least Delta at the limit (Delta jumps down, never up).
  const PointCloud y = two_points();
  const Eigen::Vector2d x = v2(0.0, 0.9);
  const double at_x = clarke_gradient_distance(y, x, 1e-9).delta();
  double tail_min = 1.0;
  for (int i = 1; i <= 200; ++i) {
    const double t = std::pow(0.9, i);
    tail_min = std::min(tail_min, clarke_gradient_distance(y, Eigen::Vector2d(x + v2(t, 0.3 * t)), 1e-9).delta());
  }
  CHECK(tail_min >= at_x - 1e-6);
}

TEST_CASE("shell sampling") {
  const PointCloud origin = PointCloud::from_rows({{0.0, 0.0}});
  const Eigen::MatrixXd s = shell_sample(origin, 1.0, 0.1, 0.05);
  REQUIRE(s.cols() > 0);
  for (Index k = 0; k < s.cols(); ++k) {
    CHECK(s.col(k).norm() >= 0.9 - 1e-12);
    CHECK(s.col(k).norm() <= 1.1 + 1e-12);
  }
  CHECK_THROWS_AS(shell_sample(origin, 1.0, 0.1, 5.0), Error);
  CHECK_THROWS_AS(shell_sample(origin, 1.0, 1.5, 0.05), Error);

  const Eigen::MatrixXd pair = shell_sample(two_points(), 0.8, 0.05, 0.02);
  double closest = 1e9;
  for (Index k = 0; k < pair.cols(); ++k) closest = std::min(closest, (pair.col(k) - v2(0.0, 0.6245)).norm());
  CHECK(closest <= 0.02);
}

TEST_CASE("regular value certificates") {
  const PointCloud origin = PointCloud::from_rows({{0.0, 0.0}});
  auto cert = certify_regular_value(origin, 1.0, 0.9, 0.1, 0.02);
  CHECK(cert.verdict == Verdict::Certified);
  CHECK(cert.mu_observed == doctest::Approx(1.0));

  cert = certify_regular_value(two_points(), 0.5, 0.5, 0.05, 0.01);
  CHECK(cert.verdict == Verdict::Refuted);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness_delta < 0.5);
  const double dw = distance(two_points(), *cert.witness);
  CHECK(dw >= 0.45 - 1e-12);
  CHECK(dw <= 0.55 + 1e-12);

  cert = certify_regular_value(two_points(), 0.8, 0.6, 0.05, 0.016);
  CHECK(cert.verdict == Verdict::Certified);
  // On the bisector at distance s, Delta = sqrt(s^2 - 0.25) / s; the shell
  // starts at s = 0.75 so the sampled minimum cannot beat that closed form
  // by more than the sampling slack.
  const double bound = std::sqrt(0.75 * 0.75 - 0.25) / 0.75;
  CHECK(bound == doctest::Approx(0.745356).epsilon(1e-5));
  CHECK(cert.mu_observed >= bound - cert.slack);
  CHECK(cert.mu_observed <= bound + cert.slack);
}

TEST_CASE("mu-reach of finite clouds") {
  const PointCloud origin = PointCloud::from_rows({{0.0, 0.0}});
  auto est = mu_reach_estimate(origin, 0.5, 0.01);
  CHECK_FALSE(est.violation_found);
  CHECK(est.lower_bracket <= est.upper_bracket);

  for (double mu : {0.3, 0.5, 0.9, 0.99}) {
    est = mu_reach_estimate(two_points(), mu, 0.01);
    CHECK(est.violation_found);
    CHECK(est.lower_bracket <= 0.5 + 1e-12);
    CHECK(est.upper_bracket >= 0.5 - 1e-12);
    CHECK(est.upper_bracket - est.lower_bracket <= 0.01 + 1e-12);
  }
  CHECK_THROWS_AS(mu_reach_estimate(two_points(), 0.0, 0.01), Error);
  CHECK_THROWS_AS(mu_reach_estimate(two_points(), 0.5, 0.0), Error);
}

TEST_CASE("mu-reach against dense bisector sampling") {
  // Oracle: for three collinear points the smallest d_Y with a sampled Delta
  // below mu sits on a bisector; scan both bisectors directly.
  const PointCloud y = PointCloud::from_rows({{-1.0, 0.0}, {0.0, 0.0}, {1.5, 0.0}});
  const double mu = 0.6;
  double oracle = 1e9;
  for (double bx : {-0.5, 0.75}) {
    for (int k = 0; k <= 20000; ++k) {
      const double t = 3.0 * k / 20000.0;
      const Eigen::Vector2d x = v2(bx, t);
      const auto g = clarke_gradient_distance(y, x, 1e-9);
      if (g.nearest.size() >= 2 && g.delta() < mu) oracle = std::min(oracle, distance(y, x));
    }
  }
  const auto est = mu_reach_estimate(y, mu, 0.005);
  REQUIRE(est.violation_found);
  CHECK(est.lower_bracket <= oracle + 0.005);
  CHECK(est.upper_bracket >= oracle - 0.005);
}
