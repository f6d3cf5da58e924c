#include "offmorse/composite_clarke.hpp"

#include <cmath>
#include <vector>

#include "offmorse/errors.hpp"

namespace offmorse {

SmoothFunction SmoothFunction::linear(Eigen::VectorXd u) {
  if (u.size() == 0 || !u.allFinite() || u.norm() == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "linear function needs a finite nonzero u");
  }
  return SmoothFunction(Kind::Linear, std::move(u), 1);
}

SmoothFunction SmoothFunction::quadratic(Eigen::VectorXd p, int sign) {
  if (p.size() == 0 || !p.allFinite()) throw Error(ErrorCode::InvalidArgument, "quadratic centre must be finite");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "quadratic sign must be +1 or -1");
  return SmoothFunction(Kind::Quadratic, std::move(p), sign);
}

const char* to_string(SmoothFunction::Kind k) {
  return k == SmoothFunction::Kind::Linear ? "linear" : "quadratic";
}

double SmoothFunction::value(const VecRef& x) const {
  if (kind_ == Kind::Linear) return vec_.dot(x);
  return 0.5 * sign_ * (x - vec_).squaredNorm();
}

Eigen::VectorXd SmoothFunction::gradient(const VecRef& x) const {
  if (kind_ == Kind::Linear) return vec_;
  return sign_ * (x - vec_);
}

Eigen::MatrixXd SmoothFunction::hessian() const {
  const Index d = vec_.size();
  if (kind_ == Kind::Linear) return Eigen::MatrixXd::Zero(d, d);
  return sign_ * Eigen::MatrixXd::Identity(d, d);
}

double SmoothFunction::lipschitz_on_box(const VecRef& lower, const VecRef& upper) const {
  if (kind_ == Kind::Linear) return vec_.norm();
  // |x - p| is maximised at the box corner farthest from p.
  Eigen::VectorXd far(vec_.size());
  for (Index k = 0; k < vec_.size(); ++k) {
    far(k) = std::max(std::abs(lower(k) - vec_(k)), std::abs(upper(k) - vec_(k)));
  }
  return far.norm();
}

CompositeLevelFunction::CompositeLevelFunction(PointCloud cloud, double epsilon, std::optional<SmoothFunction> f,
                                               double level)
    : cloud_(std::move(cloud)), epsilon_(epsilon), f_(std::move(f)), level_(level) {
  if (!(epsilon_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  if (f_ && f_->dimension() != cloud_.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "function and cloud dimensions differ");
  }
}

CompositeLevelFunction::CompositeLevelFunction(const OffsetSet& offset, SmoothFunction f, double level)
    : CompositeLevelFunction(offset.cloud(), offset.epsilon(), std::move(f), level) {}

CompositeLevelFunction CompositeLevelFunction::distance_only(PointCloud cloud, double epsilon) {
  return CompositeLevelFunction(std::move(cloud), epsilon, std::nullopt, 0.0);
}

double CompositeLevelFunction::value(const VecRef& x) const {
  double phi = std::max(distance(cloud_, x) - epsilon_, 0.0);
  if (f_) phi += std::max(f_->value(x) - level_, 0.0);
  return phi;
}

double phi_value(const CompositeLevelFunction& clf, const VecRef& x) { return clf.value(x); }

GeneratorSet<double> phi_clarke_generators(const CompositeLevelFunction& clf, const VecRef& x,
                                           const CompositeTolerances& tols) {
  const Index d = clf.dimension();
  const PointCloud& cloud = clf.cloud();
  const double margin = distance(cloud, x) - clf.epsilon();

  // Sign of f - c: -1 below, 0 on the level band, +1 above.
  int f_side = -1;
  Eigen::VectorXd grad_f = Eigen::VectorXd::Zero(d);
  if (const auto& f = clf.function()) {
    const double gap = f->value(x) - clf.level();
    f_side = gap > tols.level ? 1 : (gap < -tols.level ? -1 : 0);
    grad_f = f->gradient(x);
  }

  // Unit directions of the distance term; on Y itself (eps = 0) the Clarke
  // gradient of d_Y is the unit ball, represented by the cross-polytope.
  std::vector<Eigen::VectorXd> dist_gens;
  if (margin >= -tols.boundary) {
    if (distance(cloud, x) > 10.0 * tols.near) {
      for (Index i : nearest_set(cloud, x, tols.near)) dist_gens.push_back((x - cloud.point(i)).normalized());
    } else {
      for (Index k = 0; k < d; ++k) {
        dist_gens.push_back(Eigen::VectorXd::Unit(d, k));
        dist_gens.push_back(-Eigen::VectorXd::Unit(d, k));
      }
    }
  }

  const bool interior_side = margin <= tols.boundary;  // Interior or Boundary
  const bool outside_side = margin >= -tols.boundary;  // Boundary or Outside
  const bool f_below = f_side <= 0;
  const bool f_above = f_side >= 0;

  std::vector<Eigen::VectorXd> gens;
  if (interior_side) {
    if (f_below) gens.push_back(Eigen::VectorXd::Zero(d));
    if (f_above) gens.push_back(grad_f);
  }
  if (outside_side) {
    for (const auto& g : dist_gens) {
      if (f_below) gens.push_back(g);
      if (f_above) gens.push_back(g + grad_f);
    }
  }
  return GeneratorSet<double>::from_list(gens);
}

double delta_phi(const CompositeLevelFunction& clf, const VecRef& x, const CompositeTolerances& tols) {
  return delta(phi_clarke_generators(clf, x, tols));
}

}  // namespace offmorse
