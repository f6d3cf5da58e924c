#include "offmorse/ball_arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "offmorse/errors.hpp"

namespace offmorse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t - std::numbers::pi;
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

Eigen::Vector2d on_circle(const Eigen::Vector2d& c, double r, double theta) {
  return c + r * Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

bool uncovered(const PointCloud& cloud, double eps, const Eigen::Vector2d& x, Index skip_i, Index skip_j,
               double cover) {
  for (Index k = 0; k < cloud.size(); ++k) {
    if (k == skip_i || k == skip_j) continue;
    if ((x - cloud.point(k)).norm() < eps - cover) return false;
  }
  return true;
}

void require_planar(const OffsetSet& offset) {
  if (offset.dimension() != 2) throw Error(ErrorCode::InvalidArgument, "ball arrangement is implemented for d = 2");
}

// Intersection points of two radius-eps circles; throws on tangency.
std::vector<Eigen::Vector2d> circle_pair(const Eigen::Vector2d& yi, const Eigen::Vector2d& yj, double eps,
                                         double tol_tangent, Index i, Index j) {
  const Eigen::Vector2d d = yj - yi;
  const double len = d.norm();
  if (std::abs(len - 2.0 * eps) <= tol_tangent) {
    throw Error(ErrorCode::TangentPair, "balls " + std::to_string(i) + " and " + std::to_string(j) +
                                            " are tangent; perturb the scenario");
  }
  if (len >= 2.0 * eps) return {};
  const double h = std::sqrt(eps * eps - 0.25 * len * len);
  const Eigen::Vector2d mid = 0.5 * (yi + yj);
  const Eigen::Vector2d perp = Eigen::Vector2d(-d.y(), d.x()) / len;
  return {mid + h * perp, mid - h * perp};
}

}  // namespace

bool ArcStratum::contains_angle(double theta, double tol) const {
  if (full_circle) return true;
  for (const auto& iv : intervals) {
    double t = iv.begin + std::fmod(theta - iv.begin + 2.0 * kTwoPi, kTwoPi);
    if (t <= iv.end + tol) return true;
    if (t - kTwoPi >= iv.begin - tol) return true;
  }
  return false;
}

const char* to_string(StratumKind k) {
  switch (k) {
    case StratumKind::Interior: return "interior";
    case StratumKind::Arc: return "arc";
    case StratumKind::Crease: return "crease";
  }
  return "?";
}

const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::None: return "none";
    case Degeneracy::ZeroGradient: return "zero gradient";
    case Degeneracy::WedgeBoundary: return "wedge-boundary normal";
    case Degeneracy::ZeroRestrictedHessian: return "zero restricted Hessian";
  }
  return "?";
}

std::vector<BoundaryStratum> enumerate_strata(const OffsetSet& offset, const ArrangementTolerances& tols) {
  require_planar(offset);
  const PointCloud& cloud = offset.cloud();
  const double eps = offset.epsilon();
  const double tol_tangent = tols.tangent_rel * eps;
  const Index n = cloud.size();

  std::vector<std::vector<double>> cut_angles(static_cast<std::size_t>(n));
  std::vector<std::vector<CreaseVertex>> creases(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector2d> seen;

  for (Index i = 0; i < n; ++i) {
    const Eigen::Vector2d yi = cloud.point(i);
    for (Index j = i + 1; j < n; ++j) {
      const Eigen::Vector2d yj = cloud.point(j);
      for (const Eigen::Vector2d& x : circle_pair(yi, yj, eps, tol_tangent, i, j)) {
        cut_angles[static_cast<std::size_t>(i)].push_back(std::atan2(x.y() - yi.y(), x.x() - yi.x()));
        cut_angles[static_cast<std::size_t>(j)].push_back(std::atan2(x.y() - yj.y(), x.x() - yj.x()));
        if (!uncovered(cloud, eps, x, i, j, tols.cover)) continue;
        const bool duplicate =
            std::any_of(seen.begin(), seen.end(), [&](const Eigen::Vector2d& s) { return (s - x).norm() < 1e-9; });
        if (duplicate) continue;
        seen.push_back(x);
        creases[static_cast<std::size_t>(i)].push_back({x, i, j, (x - yi).normalized(), (x - yj).normalized()});
      }
    }
  }

  std::vector<BoundaryStratum> out;
  for (Index i = 0; i < n; ++i) {
    const Eigen::Vector2d yi = cloud.point(i);
    auto& cuts = cut_angles[static_cast<std::size_t>(i)];
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-12; }), cuts.end());

    ArcStratum arc{i, yi, eps, {}, false};
    if (cuts.empty()) {
      arc.full_circle = uncovered(cloud, eps, on_circle(yi, eps, 0.0), i, i, tols.cover);
    } else {
      const std::size_t m = cuts.size();
      std::vector<AngularInterval> pieces;
      for (std::size_t k = 0; k < m; ++k) {
        const double a = cuts[k];
        const double b = (k + 1 < m) ? cuts[k + 1] : cuts[0] + kTwoPi;
        if (uncovered(cloud, eps, on_circle(yi, eps, 0.5 * (a + b)), i, i, tols.cover)) pieces.push_back({a, b});
      }
      // Merge pieces that share an endpoint, including across the wrap.
      for (const auto& p : pieces) {
        if (!arc.intervals.empty() && std::abs(arc.intervals.back().end - p.begin) < 1e-12) {
          arc.intervals.back().end = p.end;
        } else {
          arc.intervals.push_back(p);
        }
      }
      if (arc.intervals.size() > 1 &&
          std::abs(arc.intervals.back().end - (arc.intervals.front().begin + kTwoPi)) < 1e-12) {
        arc.intervals.front() = {arc.intervals.back().begin, arc.intervals.front().end + kTwoPi};
        arc.intervals.pop_back();
      }
      if (arc.intervals.size() == 1 && arc.intervals.front().end - arc.intervals.front().begin >= kTwoPi - 1e-12) {
        arc.intervals.clear();
        arc.full_circle = true;
      }
      for (auto& iv : arc.intervals) {
        const double len = iv.end - iv.begin;
        iv.begin = wrap_angle(iv.begin);
        iv.end = iv.begin + len;
      }
      std::sort(arc.intervals.begin(), arc.intervals.end(),
                [](const AngularInterval& a, const AngularInterval& b) { return a.begin < b.begin; });
    }
    if (arc.full_circle || !arc.intervals.empty()) out.emplace_back(std::move(arc));

    auto& mine = creases[static_cast<std::size_t>(i)];
    std::sort(mine.begin(), mine.end(), [&](const CreaseVertex& a, const CreaseVertex& b) {
      return std::atan2(a.normal_i.y(), a.normal_i.x()) < std::atan2(b.normal_i.y(), b.normal_i.x());
    });
    for (auto& c : mine) out.emplace_back(std::move(c));
  }
  return out;
}

GeneratorSet<double> normal_cone(const OffsetSet& offset, const VecRef& x, double tol) {
  const PointCloud& cloud = offset.cloud();
  const double eps = offset.epsilon();
  if (std::abs(distance(cloud, x) - eps) > tol) throw Error(ErrorCode::NotOnBoundary, "point is not on the boundary");
  std::vector<Eigen::VectorXd> gens;
  for (Index i = 0; i < cloud.size(); ++i) {
    const Eigen::VectorXd v = x - cloud.point(i);
    if (std::abs(v.norm() - eps) <= tol) gens.push_back(v.normalized());
  }
  return GeneratorSet<double>::from_list(gens);
}

RestrictedHessian restricted_hessian(const OffsetSet& offset, const CriticalPointRecord& record,
                                     const SmoothFunction& f, const ArrangementTolerances& tols) {
  if (record.stratum == StratumKind::Crease) {
    throw Error(ErrorCode::CreaseStratum, "crease strata have no finite tangent directions in the plane");
  }
  if (record.stratum != StratumKind::Arc) {
    throw Error(ErrorCode::InvalidArgument, "restricted Hessian is defined on boundary arcs");
  }
  const Eigen::Vector2d c = offset.cloud().point(record.ball_i);
  const double rho = offset.epsilon();
  const Eigen::Vector2d& x = record.location;
  const Eigen::Vector2d& n = record.normal;
  const Eigen::Vector2d t(-n.y(), n.x());
  const double kappa = n.dot(x - c) / (rho * rho);
  const Eigen::Matrix2d hf = f.hessian();
  const double h = t.dot(hf * t) + record.gradient_norm * kappa;
  if (h < -tols.hessian) return {h, 1, false};
  if (h > tols.hessian) return {h, 0, false};
  return {h, 0, true};
}

std::vector<CriticalPointRecord> find_critical_points(const OffsetSet& offset, const SmoothFunction& f,
                                                      const ArrangementTolerances& tols) {
  require_planar(offset);
  if (f.dimension() != 2) throw Error(ErrorCode::DimensionMismatch, "function dimension must be 2");
  const PointCloud& cloud = offset.cloud();
  const double eps = offset.epsilon();
  const std::vector<BoundaryStratum> strata = enumerate_strata(offset, tols);

  std::vector<Eigen::Vector2d> crease_locations;
  for (const auto& s : strata)
    if (const auto* c = std::get_if<CreaseVertex>(&s)) crease_locations.push_back(c->location);

  auto make_record = [&](const Eigen::Vector2d& x, StratumKind kind) {
    CriticalPointRecord r;
    r.location = x;
    r.value = f.value(x);
    const Eigen::Vector2d g = f.gradient(x);
    r.gradient_norm = g.norm();
    if (r.gradient_norm > 0.0) r.normal = -g / r.gradient_norm;
    r.stratum = kind;
    return r;
  };
  auto require_gradient = [&](const Eigen::Vector2d& x) {
    if (f.gradient(x).norm() < 1e-9) {
      throw Error(ErrorCode::GradientVanishesOnX, "grad f vanishes at a boundary candidate");
    }
  };

  std::vector<CriticalPointRecord> records;

  if (f.kind() == SmoothFunction::Kind::Quadratic) {
    const Eigen::Vector2d p = f.vector();
    const double margin = distance(cloud, p) - eps;
    if (std::abs(margin) <= tols.boundary) {
      throw Error(ErrorCode::GradientVanishesOnX, "quadratic centre lies on the boundary of X");
    }
    if (margin < 0.0) {
      CriticalPointRecord r = make_record(p, StratumKind::Interior);
      r.index = f.sign() < 0 ? 2 : 0;
      r.hessian_restricted = static_cast<double>(f.sign());
      records.push_back(r);
    }
  }

  for (const auto& s : strata) {
    if (const auto* arc = std::get_if<ArcStratum>(&s)) {
      const Eigen::Vector2d y = arc->center;
      std::optional<Eigen::Vector2d> candidate;
      bool circle_degenerate = false;
      if (f.kind() == SmoothFunction::Kind::Linear) {
        candidate = y - eps * Eigen::Vector2d(f.vector()).normalized();
      } else {
        const Eigen::Vector2d to_p = Eigen::Vector2d(f.vector()) - y;
        const double dist_p = to_p.norm();
        if (f.sign() > 0) {
          if (dist_p > eps) candidate = y + eps * to_p / dist_p;
        } else if (dist_p > 1e-12) {
          candidate = y - eps * to_p / dist_p;
        } else {
          // Every point of the circle has grad f parallel to the normal.
          candidate = y + Eigen::Vector2d(eps, 0.0);
          circle_degenerate = true;
        }
      }
      if (!candidate) continue;
      const Eigen::Vector2d x = *candidate;
      const double theta = std::atan2(x.y() - y.y(), x.x() - y.x());
      if (!arc->contains_angle(theta, 1e-12)) continue;
      if (!uncovered(cloud, eps, x, arc->ball, arc->ball, tols.cover)) continue;
      const bool on_crease = std::any_of(crease_locations.begin(), crease_locations.end(),
                                         [&](const Eigen::Vector2d& c) { return (c - x).norm() < 1e-7; });
      if (on_crease) continue;  // handled as a wedge-boundary hit by the crease test
      require_gradient(x);

      CriticalPointRecord r = make_record(x, StratumKind::Arc);
      r.ball_i = arc->ball;
      const RestrictedHessian h = restricted_hessian(offset, r, f, tols);
      r.hessian_restricted = h.value;
      r.index = h.index;
      if (h.degenerate || circle_degenerate) r.degeneracy = Degeneracy::ZeroRestrictedHessian;
      records.push_back(r);
    } else {
      const auto& crease = std::get<CreaseVertex>(s);
      const Eigen::Vector2d& x = crease.location;
      require_gradient(x);
      const Eigen::Vector2d v = -f.gradient(x).normalized();
      Eigen::MatrixXd wedge(2, 2);
      wedge << crease.normal_i, crease.normal_j;
      const auto membership =
          cone_membership<double>(GeneratorSet<double>(wedge), Eigen::VectorXd(v), tols.wedge);
      if (!membership.member) continue;

      CriticalPointRecord r = make_record(x, StratumKind::Crease);
      r.ball_i = crease.ball_i;
      r.ball_j = crease.ball_j;
      r.index = 0;
      r.infinite_count = 1;
      const double orient = cross(crease.normal_i, crease.normal_j) >= 0.0 ? 1.0 : -1.0;
      r.wedge_margin = std::min(orient * cross(crease.normal_i, v), orient * cross(v, crease.normal_j));
      if (r.wedge_margin < tols.wedge) r.degeneracy = Degeneracy::WedgeBoundary;
      records.push_back(r);
    }
  }

  std::sort(records.begin(), records.end(), [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.location.x() != b.location.x()) return a.location.x() < b.location.x();
    return a.location.y() < b.location.y();
  });
  std::vector<CriticalPointRecord> merged;
  for (const auto& r : records) {
    const bool dup = std::any_of(merged.begin(), merged.end(), [&](const CriticalPointRecord& m) {
      return (m.location - r.location).norm() < 1e-7;
    });
    if (!dup) merged.push_back(r);
  }
  return merged;
}

MorseReport check_morse(const std::vector<CriticalPointRecord>& records, const ArrangementTolerances& tols) {
  MorseReport report;
  report.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].degenerate()) {
      ++report.degenerate_count;
      report.morse = false;
      report.issues.push_back("record " + std::to_string(i) + " degenerate: " + to_string(records[i].degeneracy));
    }
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      report.min_separation = std::min(report.min_separation, (records[i].location - records[j].location).norm());
    }
  }
  if (report.min_separation < tols.sep) {
    report.isolated = false;
    report.morse = false;
    report.issues.push_back("critical points closer than the isolation tolerance");
  }

  std::vector<Index> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return records[static_cast<std::size_t>(a)].value < records[static_cast<std::size_t>(b)].value;
  });
  for (Index i : order) {
    const auto& r = records[static_cast<std::size_t>(i)];
    if (report.levels.empty() || r.value - report.levels.back().value > tols.value) {
      report.levels.push_back({r.value, {}, {}});
    }
    report.levels.back().records.push_back(i);
    report.levels.back().lambdas.push_back(r.lambda());
  }
  for (auto& level : report.levels) std::sort(level.lambdas.begin(), level.lambdas.end());
  return report;
}

}  // namespace offmorse
