#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "offmorse/convex_geometry.hpp"
#include "offmorse/geometry_core.hpp"

namespace offmorse {

/// Clarke gradient of d_Y at a point outside Y: the hull of the unit
/// directions (x - y) / |x - y| over the nearest samples y.
struct ClarkeGradientApprox {
  Eigen::VectorXd base_point;
  std::vector<Index> nearest;
  GeneratorSet<double> generators;
  MinNormResult<double> min_norm;

  double delta() const { return min_norm.norm; }
};

ClarkeGradientApprox clarke_gradient_distance(const PointCloud& cloud, const VecRef& x,
                                              double tol_near = kDefaultTolNear);

/// Grid samples of the shell eps - delta <= d_Y <= eps + delta, plus each
/// sample pushed along its nearest-sample ray onto the level eps when that
/// stays in the shell.  Columns of the returned matrix are points.
Eigen::MatrixXd shell_sample(const PointCloud& cloud, double epsilon, double delta, double spacing);

enum class Verdict { Certified, Refuted, Inconclusive };
const char* to_string(Verdict v);

struct RegularValueCertificate {
  double epsilon{};
  double mu_required{};
  double shell_halfwidth{};
  double mu_observed{};  // min of the pooled Delta over the sampled shell
  Index sample_count{};
  double sample_spacing{};
  double slack{};
  Verdict verdict{Verdict::Inconclusive};
  std::optional<Eigen::VectorXd> witness;  // set when Refuted
  double witness_delta{};
};

/// Sampling certificate that epsilon is a regular value of d_Y with
/// Delta(grad d_Y) >= mu_required on the shell.  Each sample is scored by the
/// pooled Delta: the hull of directions to every sample within
/// d_Y(x) + 2 * spacing, which bounds Delta from below on the spacing-ball
/// around x up to the direction drift.  A refutation requires an exact
/// witness (a point equidistant to the active samples) with
/// Delta < mu_required - slack.
RegularValueCertificate certify_regular_value(const PointCloud& cloud, double epsilon, double mu_required,
                                              double delta, double spacing);

struct MuReachEstimate {
  double mu{};
  double lower_bracket{};
  double upper_bracket{};
  double resolution{};
  bool violation_found{};  // false: no violation inside the search window
};

/// Brackets reach_mu(Y) by binary search over s in (0, diameter + extent].
MuReachEstimate mu_reach_estimate(const PointCloud& cloud, double mu, double resolution, double extent = 1.0);

/// Pooled Delta used by the shell sampler (exposed for tests).
double pooled_delta(const PointCloud& cloud, const VecRef& x, double pool);

/// Point nearest to x that is equidistant to the samples active in the
/// pooled min-norm combination at x (x itself when only one is active).
Eigen::VectorXd equidistant_refinement(const PointCloud& cloud, const VecRef& x, double pool);

}  // namespace offmorse
