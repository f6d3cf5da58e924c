#pragma once

#include <Eigen/Dense>

#include <optional>

#include "offmorse/convex_geometry.hpp"
#include "offmorse/geometry_core.hpp"

namespace offmorse {

/// f(x) = <u, x> (Linear) or f(x) = (s/2) |x - p|^2 with s = +-1 (Quadratic).
/// Both families have constant Hessians.
class SmoothFunction {
 public:
  enum class Kind { Linear, Quadratic };

  static SmoothFunction linear(Eigen::VectorXd u);
  static SmoothFunction quadratic(Eigen::VectorXd p, int sign);

  Kind kind() const { return kind_; }
  Index dimension() const { return vec_.size(); }
  /// u for Linear, p for Quadratic.
  const Eigen::VectorXd& vector() const { return vec_; }
  int sign() const { return sign_; }

  double value(const VecRef& x) const;
  Eigen::VectorXd gradient(const VecRef& x) const;
  Eigen::MatrixXd hessian() const;

  /// Upper bound of |grad f| over the axis-aligned box [lower, upper].
  double lipschitz_on_box(const VecRef& lower, const VecRef& upper) const;

 private:
  SmoothFunction(Kind kind, Eigen::VectorXd vec, int sign) : kind_(kind), vec_(std::move(vec)), sign_(sign) {}

  Kind kind_;
  Eigen::VectorXd vec_;
  int sign_;
};

const char* to_string(SmoothFunction::Kind k);

struct CompositeTolerances {
  double near = kDefaultTolNear;
  double boundary = kDefaultTolBoundary;
  double level = 1e-7;
};

/// phi(x) = max(d_Y(x) - eps, 0) + max(f(x) - c, 0).  With no f the second
/// term is dropped; eps = 0 is allowed so that phi = d_Y can be flowed.
class CompositeLevelFunction {
 public:
  CompositeLevelFunction(const OffsetSet& offset, SmoothFunction f, double level);
  /// phi = max(d_Y - eps, 0), eps >= 0.
  static CompositeLevelFunction distance_only(PointCloud cloud, double epsilon);

  const PointCloud& cloud() const { return cloud_; }
  double epsilon() const { return epsilon_; }
  const std::optional<SmoothFunction>& function() const { return f_; }
  double level() const { return level_; }
  Index dimension() const { return cloud_.dimension(); }

  double value(const VecRef& x) const;

 private:
  CompositeLevelFunction(PointCloud cloud, double epsilon, std::optional<SmoothFunction> f, double level);

  PointCloud cloud_;
  double epsilon_;
  std::optional<SmoothFunction> f_;
  double level_;
};

double phi_value(const CompositeLevelFunction& clf, const VecRef& x);

/// Generators whose hull is the Clarke gradient of phi at x, by membership of
/// x in X and the sign of f(x) - c.  Ties on either classification emit the
/// union of both sides (a superset hull).
GeneratorSet<double> phi_clarke_generators(const CompositeLevelFunction& clf, const VecRef& x,
                                           const CompositeTolerances& tols = {});

double delta_phi(const CompositeLevelFunction& clf, const VecRef& x, const CompositeTolerances& tols = {});

}  // namespace offmorse
