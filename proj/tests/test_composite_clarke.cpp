#include <doctest.h>

#include <functional>
#include <random>

#include "offmorse/composite_clarke.hpp"
#include "offmorse/errors.hpp"
#include "test_helpers.hpp"

using namespace offmorse;
using offmorse::testing::two_points;
using offmorse::testing::v2;

namespace {

OffsetSet unit_ball() { return OffsetSet(PointCloud::from_rows({{0.0, 0.0}}), 1.0); }
SmoothFunction height() { return SmoothFunction::linear(v2(0.0, 1.0)); }

Eigen::Vector2d central_difference(const std::function<double(const Eigen::Vector2d&)>& g, const Eigen::Vector2d& x,
                                   double step) {
  Eigen::Vector2d out;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e(k) = step;
    out(k) = (g(x + e) - g(x - e)) / (2.0 * step);
  }
  return out;
}

}  // namespace

TEST_CASE("smooth function families") {
  const SmoothFunction lin = SmoothFunction::linear(v2(1.0, -2.0));
  CHECK(lin.value(v2(3.0, 1.0)) == doctest::Approx(1.0));
  CHECK(lin.hessian().isZero());
  CHECK(lin.lipschitz_on_box(v2(-1, -1), v2(1, 1)) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(SmoothFunction::linear(v2(0.0, 0.0)), Error);

  const SmoothFunction q = SmoothFunction::quadratic(v2(3.0, 0.0), 1);
  CHECK(q.value(v2(1.0, 0.0)) == doctest::Approx(2.0));
  CHECK(q.hessian().isApprox(Eigen::Matrix2d::Identity()));
  CHECK(q.lipschitz_on_box(v2(-1, -1), v2(1, 1)) >= 4.0);
  CHECK_THROWS_AS(SmoothFunction::quadratic(v2(0.0, 0.0), 2), Error);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const SmoothFunction& f : {lin, q, SmoothFunction::quadratic(v2(0.3, -0.2), -1)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Vector2d x(u(rng), u(rng));
      const Eigen::Vector2d fd = central_difference([&](const Eigen::Vector2d& z) { return f.value(z); }, x, 1e-5);
      CHECK((f.gradient(x) - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("phi values") {
  const CompositeLevelFunction ball(unit_ball(), height(), 0.0);
  CHECK(phi_value(ball, v2(0.0, -1.0)) == 0.0);
  CHECK(phi_value(ball, v2(0.0, 2.0)) == doctest::Approx(3.0));

  const OffsetSet disks(two_points(), 0.8);
  const CompositeLevelFunction low(disks, height(), -0.7);
  const Eigen::Vector2d crease = v2(0.0, -std::sqrt(0.39));
  CHECK(distance(disks.cloud(), crease) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(phi_value(low, crease) == doctest::Approx(0.0755).epsilon(1e-3));

  const auto only = CompositeLevelFunction::distance_only(PointCloud::from_rows({{0.0, 0.0}}), 0.0);
  CHECK(only.value(v2(3.0, 4.0)) == doctest::Approx(5.0));
}

TEST_CASE("Clarke generators of phi by case") {
  const CompositeLevelFunction ball(unit_ball(), height(), 0.0);
  auto g = phi_clarke_generators(ball, v2(0.0, 2.0));
  REQUIRE(g.size() == 1);
  CHECK((Eigen::Vector2d(g[0]) - v2(0.0, 2.0)).norm() <= 1e-12);
  CHECK(delta_phi(ball, v2(0.0, 2.0)) == doctest::Approx(2.0));

  const CompositeLevelFunction ball_high(unit_ball(), height(), 1.0);
  CHECK(delta_phi(ball_high, v2(0.5, 0.0)) == 0.0);
  CHECK(delta_phi(ball, v2(0.0, -0.5)) == 0.0);  // interior, f < c

  // Interior with f > c: just grad f.
  const CompositeLevelFunction ball_low(unit_ball(), height(), -0.9);
  g = phi_clarke_generators(ball_low, v2(0.0, 0.0));
  REQUIRE(g.size() == 1);
  CHECK(delta_phi(ball_low, v2(0.0, 0.0)) == doctest::Approx(1.0));

  // Lower crease of the two-disk scenario with c = -1: boundary, f > c.
  const OffsetSet disks(two_points(), 0.8);
  const CompositeLevelFunction below(disks, height(), -1.0);
  const Eigen::Vector2d crease = v2(0.0, -std::sqrt(0.39));
  g = phi_clarke_generators(below, crease, {1e-6, 1e-7, 1e-7});
  CHECK(g.size() == 3);
  // Oracle: brute force over convex weights of {e2, n1 + e2, n2 + e2}.
  const Eigen::Vector2d n1 = (crease - v2(-0.5, 0.0)) / 0.8;
  const Eigen::Vector2d n2 = (crease - v2(0.5, 0.0)) / 0.8;
  const Eigen::Vector2d e2 = v2(0.0, 1.0);
  double oracle = 1e9;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; i + j <= 1000; ++j) {
      const double a = i / 1000.0, b = j / 1000.0;
      oracle = std::min(oracle, (a * e2 + b * (n1 + e2) + (1 - a - b) * (n2 + e2)).norm());
    }
  }
  const double d = delta_phi(below, crease, {1e-6, 1e-7, 1e-7});
  CHECK(d > 0.0);
  CHECK(d == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("property: singleton generators match finite differences of phi") {
  const OffsetSet disks(two_points(), 0.8);
  const CompositeLevelFunction clf(disks, SmoothFunction::quadratic(v2(0.2, 0.1), 1), 0.3);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const auto g = phi_clarke_generators(clf, x);
    if (g.size() != 1) continue;
    // Stay away from kinks: both case terms must be clearly resolved.
    const double dm = distance(disks.cloud(), x) - 0.8;
    const double fm = clf.function()->value(x) - 0.3;
    if (std::abs(dm) < 1e-3 || std::abs(fm) < 1e-3 || std::abs(x(0)) < 1e-3) continue;
    const Eigen::Vector2d fd = central_difference([&](const Eigen::Vector2d& z) { return clf.value(z); }, x, 1e-7);
    CHECK((Eigen::Vector2d(g[0]) - fd).norm() <= 1e-5);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("property: phi decreases as the level rises") {
  const OffsetSet disks(two_points(), 0.8);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double c = u(rng);
    const double c2 = c + std::abs(u(rng));
    CHECK(CompositeLevelFunction(disks, height(), c2).value(x) <= CompositeLevelFunction(disks, height(), c).value(x));
    CHECK(CompositeLevelFunction(disks, height(), c).value(x) >= 0.0);
  }
}

TEST_CASE("delta of phi on the band of a regular level") {
  // Below min f|X = -1 the band phi^{-1}(0, K] is empty: phi >= 1 on X.
  const CompositeLevelFunction below(unit_ball(), height(), -2.0);
  CHECK(below.value(v2(0.0, -1.0)) == doctest::Approx(1.0));

  const CompositeLevelFunction clf(unit_ball(), height(), -0.9);
  double worst = 1e9;
  int sampled = 0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const Eigen::Vector2d x = v2(-1.1 + 0.011 * i, -1.1 + 0.011 * j);
      const double phi = clf.value(x);
      if (phi <= 1e-9 || phi > 0.05) continue;
      worst = std::min(worst, delta_phi(clf, x));
      ++sampled;
    }
  }
  CHECK(sampled >= 100);
  CHECK(worst > 0.3);
}

TEST_CASE("regular-value openness on the two-disk scenario") {
  // c = -0.7 is a regular value; nearby levels c +- a keep Delta(grad phi)
  // bounded away from zero on phi^{-1}(0, 0.05] away from the bisector ridge.
  const OffsetSet disks(two_points(), 0.8);
  for (double a : {-0.01, 0.0, 0.01}) {
    const CompositeLevelFunction clf(disks, height(), -0.7 + a);
    double worst = 1e9;
    for (int i = 0; i <= 160; ++i) {
      for (int j = 0; j <= 160; ++j) {
        const Eigen::Vector2d x = v2(-1.6 + 0.02 * i, -1.6 + 0.02 * j);
        const double phi = clf.value(x);
        if (phi <= 1e-9 || phi > 0.05) continue;
        worst = std::min(worst, delta_phi(clf, x));
      }
    }
    CHECK(worst > 0.1);
  }
}
