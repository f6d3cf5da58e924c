#include <doctest.h>

#include <functional>
#include <random>

#include "offmorse/convex_geometry.hpp"
#include "offmorse/errors.hpp"

using namespace offmorse;
using Index = Eigen::Index;

namespace {

GeneratorSet<double> gens(std::initializer_list<std::initializer_list<double>> cols) {
  std::vector<Eigen::VectorXd> list;
  for (const auto& c : cols) {
    Eigen::VectorXd v(static_cast<Index>(c.size()));
    Index k = 0;
    for (double x : c) v(k++) = x;
    list.push_back(v);
  }
  return GeneratorSet<double>::from_list(list);
}

// Dense barycentric grid: min |sum w_i v_i| over weights on a lattice of step 1/n.
double grid_min_norm(const Eigen::MatrixXd& v, int n) {
  const Index m = v.cols();
  double best = 1e300;
  std::vector<int> w(static_cast<std::size_t>(m), 0);
  // Enumerate compositions of n into m parts.
  std::function<void(Index, int)> rec = [&](Index i, int left) {
    if (i == m - 1) {
      w[static_cast<std::size_t>(i)] = left;
      Eigen::VectorXd p = Eigen::VectorXd::Zero(v.rows());
      for (Index k = 0; k < m; ++k) p += (double(w[static_cast<std::size_t>(k)]) / n) * v.col(k);
      best = std::min(best, p.norm());
      return;
    }
    for (int a = 0; a <= left; ++a) {
      w[static_cast<std::size_t>(i)] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, n);
  return best;
}



}  // namespace

TEST_CASE("min-norm point on small examples") {
  auto r = min_norm_point(gens({{1, 0}, {0, 1}}));
  CHECK(r.point(0) == doctest::Approx(0.5));
  CHECK(r.point(1) == doctest::Approx(0.5));
  CHECK(r.norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

  r = min_norm_point(gens({{1, 0}, {-1, 0}}));
  CHECK(r.norm <= 1e-12);
  CHECK(r.coefficients(0) == doctest::Approx(0.5));

  r = min_norm_point(gens({{1, 1}, {1, -1}, {2, 0}}));
  CHECK(r.point(0) == doctest::Approx(1.0));
  CHECK(r.norm == doctest::Approx(1.0));

  r = min_norm_point(gens({{3, 4}}));
  CHECK(r.norm == doctest::Approx(5.0));

  // Duplicated generators: ties broken toward the lowest index.
  r = min_norm_point(gens({{1, 0}, {1, 0}}));
  CHECK(r.norm == doctest::Approx(1.0));
  CHECK(r.coefficients.sum() == doctest::Approx(1.0));
}

TEST_CASE("generator set validation") {
  CHECK_THROWS_AS(GeneratorSet<double>(Eigen::MatrixXd(2, 0)), Error);
  Eigen::MatrixXd bad(2, 1);
  bad << 1, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(GeneratorSet<double>{bad}, Error);
  CHECK_THROWS_AS(gens({{1, 0}, {1, 0, 0}}), Error);
}

TEST_CASE("min-norm point matches a dense convex-weight grid") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = 2 + trial % 2;
    const Index m = 2 + trial % 2;
    Eigen::MatrixXd v(d, m);
    for (Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
    const auto r = min_norm_point(GeneratorSet<double>(v));
    const int n = 400;
    const double oracle = grid_min_norm(v, n);
    CHECK(r.norm <= oracle + 1e-12);
    CHECK(r.norm >= oracle - 2.0 * v.colwise().norm().maxCoeff() / n);
  }
}

TEST_CASE("property: Wolfe optimality certificate") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index d = 1 + trial % 4;
    const Index m = 1 + trial % 8;
    Eigen::MatrixXd v(d, m);
    for (Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
    const auto r = min_norm_point(GeneratorSet<double>(v));
    CHECK(r.coefficients.minCoeff() >= 0.0);
    CHECK(r.coefficients.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((v * r.coefficients - r.point).norm() <= 1e-10);
    const double w2 = r.point.squaredNorm();
    for (Index i = 0; i < m; ++i) CHECK(v.col(i).dot(r.point) >= w2 - 1e-9);
  }
}

TEST_CASE("property: delta is invariant under orthogonal maps and homogeneous") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd v(3, 5);
    for (Index i = 0; i < v.size(); ++i) v.data()[i] = u(rng);
    Eigen::MatrixXd a(3, 3);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
    const double base = delta(GeneratorSet<double>(v));
    CHECK(delta(GeneratorSet<double>(q * v)) == doctest::Approx(base).epsilon(1e-9));
    CHECK(delta(GeneratorSet<double>(2.5 * v)) == doctest::Approx(2.5 * base).epsilon(1e-9));
  }
}

TEST_CASE("cone membership and polar test") {
  const auto wedge = gens({{1, 0}, {0, 1}});
  CHECK(cone_membership(wedge, Eigen::VectorXd(Eigen::Vector2d(2, 3)), 1e-9).member);
  const auto outside = cone_membership(wedge, Eigen::VectorXd(Eigen::Vector2d(-1, 1)), 1e-9);
  CHECK_FALSE(outside.member);
  CHECK(outside.residual == doctest::Approx(1.0));
  CHECK(cone_membership(wedge, Eigen::VectorXd(Eigen::Vector2d(0, 0)), 1e-9).member);
  CHECK_THROWS_AS(cone_membership(wedge, Eigen::VectorXd(Eigen::Vector2d(1, 1)), 0.0), Error);

  CHECK(polar_test(wedge, Eigen::VectorXd(Eigen::Vector2d(-1, -1)), 0.0));
  CHECK_FALSE(polar_test(wedge, Eigen::VectorXd(Eigen::Vector2d(1, -2)), 0.0));
}

TEST_CASE("property: NNLS residual is orthogonal to the active set") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd g(3, 4);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = u(rng);
    const Eigen::VectorXd v = Eigen::Vector3d(u(rng), u(rng), u(rng));
    const Eigen::VectorXd w = nonnegative_least_squares<double>(g, v);
    const Eigen::VectorXd dual = g.transpose() * (v - g * w);
    for (Index i = 0; i < w.size(); ++i) {
      CHECK(w(i) >= 0.0);
      CHECK(dual(i) <= 1e-9);
      if (w(i) > 1e-9) CHECK(std::abs(dual(i)) <= 1e-9);
    }
  }
}

TEST_CASE("angular gap between cones") {
  const auto a = gens({{1, 0}, {0, 1}});
  const auto b = gens({{1, 0}, {1, 1}});
  CHECK(cone_angular_gap(a, a) <= 1e-12);
  CHECK(cone_angular_gap(a, b) == doctest::Approx(M_PI / 4).epsilon(1e-9));
  const auto ray = gens({{0, 1}});
  CHECK(angle_to_cone(ray, Eigen::VectorXd(Eigen::Vector2d(0, -1))) == doctest::Approx(M_PI));
}
