#pragma once

// Min-norm point of a convex hull, conic feasibility and polar tests.
//
// Both the min-norm point (Wolfe's corral method) and the cone membership
// test (Lawson-Hanson nonnegative least squares) are active-set schemes that
// solve small least-squares problems on the current support with a
// rank-revealing decomposition.  Ties are broken by lowest generator index so
// results are deterministic for a fixed input order.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "offmorse/errors.hpp"

namespace offmorse {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Finite list of vectors stored column-wise.  Read as a convex hull by
/// min_norm_point and as a generated cone by cone_membership / polar_test.
template <typename Scalar>
class GeneratorSet {
 public:
  GeneratorSet() = default;

  explicit GeneratorSet(MatrixX<Scalar> columns) : vectors_(std::move(columns)) {
    if (vectors_.cols() == 0 || vectors_.rows() == 0) {
      throw Error(ErrorCode::EmptyInput, "generator set needs at least one vector");
    }
    if (!vectors_.allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "generator set contains NaN or Inf");
    }
  }

  static GeneratorSet from_list(const std::vector<VectorX<Scalar>>& list) {
    if (list.empty()) throw Error(ErrorCode::EmptyInput, "generator set needs at least one vector");
    MatrixX<Scalar> m(list.front().size(), static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].size() != m.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "generators must share one dimension");
      }
      m.col(static_cast<Eigen::Index>(i)) = list[i];
    }
    return GeneratorSet(std::move(m));
  }

  Eigen::Index dimension() const { return vectors_.rows(); }
  Eigen::Index size() const { return vectors_.cols(); }
  const MatrixX<Scalar>& matrix() const { return vectors_; }
  auto operator[](Eigen::Index i) const { return vectors_.col(i); }

 private:
  MatrixX<Scalar> vectors_;
};

template <typename Scalar>
struct MinNormResult {
  VectorX<Scalar> point;
  Scalar norm{0};
  VectorX<Scalar> coefficients;
};

template <typename Scalar>
struct ConeMembership {
  bool member{false};
  Scalar residual{0};
  VectorX<Scalar> weights;
};

namespace detail {

template <typename Scalar>
constexpr Scalar rank_threshold() {
  return Scalar(1e-12);
}

template <typename Scalar>
MatrixX<Scalar> gather(const MatrixX<Scalar>& all, const std::vector<Eigen::Index>& support) {
  MatrixX<Scalar> sub(all.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = all.col(support[k]);
  return sub;
}

// Minimal-norm least-squares solution of a * x = b; rank decided at 1e-12.
template <typename Scalar>
VectorX<Scalar> least_squares(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> cod(a);
  cod.setThreshold(rank_threshold<Scalar>());
  return cod.solve(b);
}

// Weights alpha with sum 1 minimising |q * alpha|, via the bordered KKT system.
template <typename Scalar>
VectorX<Scalar> affine_minimizer(const MatrixX<Scalar>& q) {
  const Eigen::Index k = q.cols();
  MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = q.transpose() * q;
  kkt.topRightCorner(k, 1).setOnes();
  kkt.bottomLeftCorner(1, k).setOnes();
  VectorX<Scalar> rhs = VectorX<Scalar>::Zero(k + 1);
  rhs(k) = Scalar(1);
  VectorX<Scalar> alpha = least_squares<Scalar>(kkt, rhs).head(k);
  const Scalar total = alpha.sum();
  if (std::abs(total) > Scalar(1e-300)) alpha /= total;
  return alpha;
}

}  // namespace detail

/// Nearest point to the origin in Conv(gens).  The result satisfies the
/// supporting-hyperplane certificate <v, point> >= |point|^2 - 1e-9 for every
/// generator v.
template <typename Scalar>
MinNormResult<Scalar> min_norm_point(const GeneratorSet<Scalar>& gens) {
  using Index = Eigen::Index;
  const MatrixX<Scalar>& p = gens.matrix();
  const Index m = p.cols();

  Scalar scale = p.colwise().squaredNorm().maxCoeff();
  if (scale <= Scalar(0)) scale = Scalar(1);
  // Rescale so tolerances are relative; the minimiser is scale-equivariant.
  const MatrixX<Scalar> q = p / std::sqrt(scale);
  const Scalar opt_tol = Scalar(1e-13);
  const Scalar weight_tol = Scalar(1e-14);

  Index start = 0;
  Scalar best = q.col(0).squaredNorm();
  for (Index i = 1; i < m; ++i) {
    const Scalar sq = q.col(i).squaredNorm();
    if (sq < best) {
      best = sq;
      start = i;
    }
  }

  std::vector<Index> corral{start};
  VectorX<Scalar> weights = VectorX<Scalar>::Ones(1);
  VectorX<Scalar> x = q.col(start);

  const int max_major = 100 + 50 * static_cast<int>(m);
  for (int major = 0; major < max_major; ++major) {
    const Scalar xx = x.squaredNorm();
    Index entering = -1;
    Scalar lowest = xx - opt_tol;
    for (Index i = 0; i < m; ++i) {
      const Scalar v = q.col(i).dot(x);
      if (v < lowest) {
        lowest = v;
        entering = i;
      }
    }
    if (entering < 0) break;
    if (std::find(corral.begin(), corral.end(), entering) != corral.end()) break;

    corral.push_back(entering);
    weights.conservativeResize(weights.size() + 1);
    weights(weights.size() - 1) = Scalar(0);

    for (int minor = 0; minor < 4 * static_cast<int>(m) + 8; ++minor) {
      const VectorX<Scalar> alpha = detail::affine_minimizer<Scalar>(detail::gather<Scalar>(q, corral));
      if (alpha.minCoeff() > weight_tol) {
        weights = alpha;
        break;
      }
      Scalar theta = Scalar(1);
      for (Index k = 0; k < alpha.size(); ++k) {
        if (alpha(k) <= weight_tol) {
          const Scalar denom = weights(k) - alpha(k);
          if (denom > Scalar(0)) theta = std::min(theta, weights(k) / denom);
        }
      }
      weights = theta * alpha + (Scalar(1) - theta) * weights;

      std::vector<Index> kept;
      std::vector<Scalar> kept_w;
      for (Index k = 0; k < weights.size(); ++k) {
        if (weights(k) > weight_tol) {
          kept.push_back(corral[static_cast<std::size_t>(k)]);
          kept_w.push_back(weights(k));
        }
      }
      if (kept.empty()) {
        Index arg = 0;
        weights.maxCoeff(&arg);
        kept.push_back(corral[static_cast<std::size_t>(arg)]);
        kept_w.push_back(Scalar(1));
      }
      corral = std::move(kept);
      weights = Eigen::Map<VectorX<Scalar>>(kept_w.data(), static_cast<Index>(kept_w.size()));
      weights /= weights.sum();
    }
    x = detail::gather<Scalar>(q, corral) * weights;
  }

  MinNormResult<Scalar> result;
  result.coefficients = VectorX<Scalar>::Zero(m);
  for (std::size_t k = 0; k < corral.size(); ++k) {
    result.coefficients(corral[k]) = std::max(weights(static_cast<Index>(k)), Scalar(0));
  }
  result.coefficients /= result.coefficients.sum();
  result.point = p * result.coefficients;
  result.norm = result.point.norm();
  return result;
}

/// Distance from the origin to Conv(gens).
template <typename Scalar>
Scalar delta(const GeneratorSet<Scalar>& gens) {
  return min_norm_point(gens).norm;
}

/// Nonnegative least squares min |G w - v|, w >= 0 (Lawson-Hanson).
template <typename Scalar>
VectorX<Scalar> nonnegative_least_squares(const MatrixX<Scalar>& g, const VectorX<Scalar>& v) {
  using Index = Eigen::Index;
  const Index m = g.cols();
  Scalar scale = std::max(g.colwise().norm().maxCoeff(), v.norm());
  if (scale <= Scalar(0)) scale = Scalar(1);
  const Scalar tol = Scalar(1e-13) * scale * scale;

  VectorX<Scalar> w = VectorX<Scalar>::Zero(m);
  std::vector<Index> passive;
  auto in_passive = [&](Index i) { return std::find(passive.begin(), passive.end(), i) != passive.end(); };

  for (int outer = 0; outer < 3 * static_cast<int>(m) + 10; ++outer) {
    const VectorX<Scalar> dual = g.transpose() * (v - g * w);
    Index entering = -1;
    Scalar largest = tol;
    for (Index i = 0; i < m; ++i) {
      if (!in_passive(i) && dual(i) > largest) {
        largest = dual(i);
        entering = i;
      }
    }
    if (entering < 0) break;
    passive.push_back(entering);

    for (int inner = 0; inner < 3 * static_cast<int>(m) + 10; ++inner) {
      const VectorX<Scalar> s = detail::least_squares<Scalar>(detail::gather<Scalar>(g, passive), v);
      if (s.minCoeff() > Scalar(0)) {
        for (std::size_t k = 0; k < passive.size(); ++k) w(passive[k]) = s(static_cast<Index>(k));
        break;
      }
      Scalar alpha = Scalar(1);
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Scalar sk = s(static_cast<Index>(k));
        const Scalar wk = w(passive[k]);
        if (sk <= Scalar(0) && wk - sk > Scalar(0)) alpha = std::min(alpha, wk / (wk - sk));
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Index i = passive[k];
        w(i) += alpha * (s(static_cast<Index>(k)) - w(i));
      }
      std::vector<Index> kept;
      for (Index i : passive) {
        if (w(i) > Scalar(1e-15) * scale) {
          kept.push_back(i);
        } else {
          w(i) = Scalar(0);
        }
      }
      passive = std::move(kept);
      if (passive.empty()) break;
    }
  }
  return w;
}

/// v in Cone(gens) up to tol * max(1, |v|); reports the residual and weights.
template <typename Scalar>
ConeMembership<Scalar> cone_membership(const GeneratorSet<Scalar>& gens, const VectorX<Scalar>& v, Scalar tol) {
  if (!(tol > Scalar(0))) throw Error(ErrorCode::InvalidArgument, "cone_membership needs tol > 0");
  if (v.size() != gens.dimension()) throw Error(ErrorCode::DimensionMismatch, "vector vs generators");
  ConeMembership<Scalar> out;
  out.weights = nonnegative_least_squares<Scalar>(gens.matrix(), v);
  out.residual = (gens.matrix() * out.weights - v).norm();
  out.member = out.residual <= tol * std::max(Scalar(1), v.norm());
  return out;
}

/// u lies in the polar cone of Cone(gens): <u, g> <= tol for all g.
template <typename Scalar>
bool polar_test(const GeneratorSet<Scalar>& gens, const VectorX<Scalar>& u, Scalar tol) {
  if (tol < Scalar(0)) throw Error(ErrorCode::InvalidArgument, "polar_test needs tol >= 0");
  if (u.size() != gens.dimension()) throw Error(ErrorCode::DimensionMismatch, "vector vs generators");
  return ((gens.matrix().transpose() * u).array() <= tol).all();
}

/// Angle between a unit direction and a closed convex cone.
template <typename Scalar>
Scalar angle_to_cone(const GeneratorSet<Scalar>& cone, const VectorX<Scalar>& unit) {
  const VectorX<Scalar> w = nonnegative_least_squares<Scalar>(cone.matrix(), unit);
  const VectorX<Scalar> proj = cone.matrix() * w;
  const Scalar along = proj.norm();
  if (along <= Scalar(1e-14)) {
    Scalar best = -1;
    for (Eigen::Index i = 0; i < cone.size(); ++i) {
      const Scalar n = cone[i].norm();
      if (n > Scalar(0)) best = std::max(best, cone[i].dot(unit) / n);
    }
    return std::acos(std::clamp(best, Scalar(-1), Scalar(1)));
  }
  return std::atan2((unit - proj).norm(), along);
}

/// Angular Hausdorff gap between two pointed cones, measured over the
/// normalised generators and 7 interior directions of each generator pair.
template <typename Scalar>
Scalar cone_angular_gap(const GeneratorSet<Scalar>& a, const GeneratorSet<Scalar>& b) {
  auto one_sided = [](const GeneratorSet<Scalar>& from, const GeneratorSet<Scalar>& to) {
    Scalar worst = 0;
    auto visit = [&](const VectorX<Scalar>& dir) {
      const Scalar n = dir.norm();
      if (n <= Scalar(1e-14)) return;
      worst = std::max(worst, angle_to_cone<Scalar>(to, dir / n));
    };
    for (Eigen::Index i = 0; i < from.size(); ++i) {
      const VectorX<Scalar> gi = from[i].normalized();
      visit(gi);
      for (Eigen::Index j = i + 1; j < from.size(); ++j) {
        const VectorX<Scalar> gj = from[j].normalized();
        for (int k = 1; k < 8; ++k) {
          const Scalar t = Scalar(k) / Scalar(8);
          visit((Scalar(1) - t) * gi + t * gj);
        }
      }
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace offmorse
