#include "offmorse/clarke_distance.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "offmorse/errors.hpp"

namespace offmorse {

namespace {

// Visits lower + k * spacing for every multi-index k inside [lower, upper].
void for_each_grid_point(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, double spacing,
                         const std::function<void(const Eigen::VectorXd&)>& visit) {
  const Index d = lower.size();
  Eigen::VectorXi counts(d);
  for (Index k = 0; k < d; ++k) {
    counts(k) = static_cast<int>(std::floor((upper(k) - lower(k)) / spacing)) + 1;
  }
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(d);
  Eigen::VectorXd x(d);
  while (true) {
    for (Index k = 0; k < d; ++k) x(k) = lower(k) + spacing * idx(k);
    visit(x);
    Index k = 0;
    while (k < d) {
      if (++idx(k) < counts(k)) break;
      idx(k) = 0;
      ++k;
    }
    if (k == d) break;
  }
}

GeneratorSet<double> unit_directions(const PointCloud& cloud, const VecRef& x, const std::vector<Index>& indices) {
  Eigen::MatrixXd dirs(cloud.dimension(), static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    dirs.col(static_cast<Index>(k)) = (x - cloud.point(indices[k])).normalized();
  }
  return GeneratorSet<double>(std::move(dirs));
}

double exact_delta(const PointCloud& cloud, const VecRef& x) {
  return delta(unit_directions(cloud, x, nearest_set(cloud, x, kDefaultTolNear)));
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ClarkeGradientApprox clarke_gradient_distance(const PointCloud& cloud, const VecRef& x, double tol_near) {
  const double d = distance(cloud, x);
  if (!(d > 10.0 * tol_near)) {
    throw Error(ErrorCode::BasePointOnCloud, "Clarke gradient of d_Y requested on the sample set");
  }
  ClarkeGradientApprox out{x, nearest_set(cloud, x, tol_near), {}, {}};
  out.generators = unit_directions(cloud, x, out.nearest);
  out.min_norm = min_norm_point(out.generators);
  return out;
}

double pooled_delta(const PointCloud& cloud, const VecRef& x, double pool) {
  return delta(unit_directions(cloud, x, nearest_set(cloud, x, pool)));
}

Eigen::VectorXd equidistant_refinement(const PointCloud& cloud, const VecRef& x, double pool) {
  const std::vector<Index> pooled = nearest_set(cloud, x, pool);
  const MinNormResult<double> mn = min_norm_point(unit_directions(cloud, x, pooled));
  std::vector<Index> active;
  for (std::size_t k = 0; k < pooled.size(); ++k) {
    if (mn.coefficients(static_cast<Index>(k)) > 1e-12) active.push_back(pooled[k]);
  }
  if (active.size() < 2) return x;

  const auto y0 = cloud.point(active.front());
  Eigen::MatrixXd a(static_cast<Index>(active.size()) - 1, cloud.dimension());
  Eigen::VectorXd rhs(a.rows());
  for (std::size_t k = 1; k < active.size(); ++k) {
    const auto yk = cloud.point(active[k]);
    a.row(static_cast<Index>(k) - 1) = 2.0 * (yk - y0).transpose();
    rhs(static_cast<Index>(k) - 1) = yk.squaredNorm() - y0.squaredNorm();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  cod.setThreshold(1e-12);
  return x + cod.solve(rhs - a * x);
}

Eigen::MatrixXd shell_sample(const PointCloud& cloud, double epsilon, double delta, double spacing) {
  if (!(delta > 0.0 && delta < epsilon)) throw Error(ErrorCode::InvalidArgument, "shell needs 0 < delta < epsilon");
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  const double lo = epsilon - delta;
  const double hi = epsilon + delta;
  const Eigen::VectorXd lower = cloud.bbox_min().array() - hi;
  const Eigen::VectorXd upper = cloud.bbox_max().array() + hi;

  std::vector<Eigen::VectorXd> kept;
  for_each_grid_point(lower, upper, spacing, [&](const Eigen::VectorXd& x) {
    const double d = distance(cloud, x);
    if (d < lo || d > hi) return;
    kept.push_back(x);
    const std::vector<Index> nearest = nearest_set(cloud, x, kDefaultTolNear);
    const auto y = cloud.point(nearest.front());
    const Eigen::VectorXd projected = y + epsilon * (x - y).normalized();
    const double dp = distance(cloud, projected);
    if (dp >= lo && dp <= hi && (projected - x).norm() > 1e-12) kept.push_back(projected);
  });
  if (kept.empty()) throw Error(ErrorCode::EmptyShell, "no grid point lands in the shell; refine the spacing");

  Eigen::MatrixXd out(cloud.dimension(), static_cast<Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) out.col(static_cast<Index>(i)) = kept[i];
  return out;
}

RegularValueCertificate certify_regular_value(const PointCloud& cloud, double epsilon, double mu_required,
                                              double delta, double spacing) {
  if (!(mu_required > 0.0 && mu_required <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "mu_required must lie in (0, 1]");
  }
  const Eigen::MatrixXd samples = shell_sample(cloud, epsilon, delta, spacing);
  const double pool = 2.0 * spacing;

  RegularValueCertificate cert;
  cert.epsilon = epsilon;
  cert.mu_required = mu_required;
  cert.shell_halfwidth = delta;
  cert.sample_count = samples.cols();
  cert.sample_spacing = spacing;
  cert.slack = spacing;
  cert.mu_observed = std::numeric_limits<double>::infinity();

  double best_witness = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < samples.cols(); ++i) {
    const auto x = samples.col(i);
    const double pd = pooled_delta(cloud, x, pool);
    cert.mu_observed = std::min(cert.mu_observed, pd);
    if (pd >= mu_required) continue;

    const Eigen::VectorXd z = equidistant_refinement(cloud, x, pool);
    const double dz = distance(cloud, z);
    if (dz < epsilon - delta || dz > epsilon + delta) continue;
    const double wz = exact_delta(cloud, z);
    if (wz < mu_required - cert.slack && wz < best_witness) {
      best_witness = wz;
      cert.witness = z;
      cert.witness_delta = wz;
    }
  }

  if (cert.witness) {
    cert.verdict = Verdict::Refuted;
  } else if (cert.mu_observed >= mu_required) {
    cert.verdict = Verdict::Certified;
  } else {
    cert.verdict = Verdict::Inconclusive;
  }
  return cert;
}

MuReachEstimate mu_reach_estimate(const PointCloud& cloud, double mu, double resolution, double extent) {
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mu must lie in (0, 1]");
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  const double window = cloud.diameter() + std::max(extent, resolution);
  const double pool = 2.0 * resolution;
  const Eigen::VectorXd lower = cloud.bbox_min().array() - window;
  const Eigen::VectorXd upper = cloud.bbox_max().array() + window;

  // Smallest offset value carrying an exact witness with Delta < mu.
  double threshold = std::numeric_limits<double>::infinity();
  for_each_grid_point(lower, upper, resolution, [&](const Eigen::VectorXd& x) {
    const double d = distance(cloud, x);
    if (d <= 1e-12 || d > window) return;
    if (pooled_delta(cloud, x, pool) >= mu) return;
    const Eigen::VectorXd z = equidistant_refinement(cloud, x, pool);
    const double dz = distance(cloud, z);
    if (dz <= 1e-12 || dz >= threshold) return;
    if (exact_delta(cloud, z) < mu) threshold = dz;
  });

  MuReachEstimate est{mu, 0.0, window, resolution, threshold <= window};
  if (!est.violation_found) {
    est.lower_bracket = window;
    est.upper_bracket = window;
    return est;
  }
  double lo = 0.0;
  double hi = window;
  for (int it = 0; it < 40 && hi - lo > resolution; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (threshold <= mid) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  est.lower_bracket = lo;
  est.upper_bracket = hi;
  return est;
}

}  // namespace offmorse
