#pragma once

// Boundary strata of a planar union of equal balls and the critical points
// of a smooth function restricted to it.
//
// The boundary of X = Y^eps in the plane is a cycle of circular arcs joined
// at crease vertices where two circles cross.  Arcs carry one finite
// principal curvature (1 / eps); creases carry a wedge of normals and one
// infinite curvature.  A point x is critical for f restricted to X when
// -grad f(x) lies in the normal cone at x; the cell it attaches has
// dimension lambda = index of the restricted Hessian + infinite curvatures.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "offmorse/composite_clarke.hpp"
#include "offmorse/convex_geometry.hpp"
#include "offmorse/geometry_core.hpp"

namespace offmorse {

struct ArrangementTolerances {
  double tangent_rel = 1e-7;  // tol_tangent = tangent_rel * eps
  double cover = 1e-9;        // a point is uncovered when min |x - y_k| >= eps - cover
  double wedge = 1e-6;        // strict-interior margin for crease criticality
  double value = 1e-7;        // critical-value grouping
  double sep = 1e-5;          // isolation witness
  double hessian = 1e-9;      // |H| below this is degenerate
  double boundary = kDefaultTolBoundary;
};

/// Counter-clockwise angular range [begin, end] with begin in [-pi, pi).
struct AngularInterval {
  double begin;
  double end;
};

struct ArcStratum {
  Index ball;
  Eigen::Vector2d center;
  double radius;
  std::vector<AngularInterval> intervals;
  bool full_circle;

  bool contains_angle(double theta, double tol = 1e-12) const;
};

struct CreaseVertex {
  Eigen::Vector2d location;
  Index ball_i;
  Index ball_j;
  Eigen::Vector2d normal_i;
  Eigen::Vector2d normal_j;
};

using BoundaryStratum = std::variant<ArcStratum, CreaseVertex>;

/// Strata sorted by ball index, each ball's arc first, then its creases
/// (with higher-index partners) by angle.
std::vector<BoundaryStratum> enumerate_strata(const OffsetSet& offset, const ArrangementTolerances& tols = {});

/// Unit normals (x - y_i) / |x - y_i| over the balls whose sphere passes
/// through x within tol.  Works in any dimension.
GeneratorSet<double> normal_cone(const OffsetSet& offset, const VecRef& x, double tol = kDefaultTolBoundary);

enum class StratumKind { Interior, Arc, Crease };
enum class Degeneracy { None, ZeroGradient, WedgeBoundary, ZeroRestrictedHessian };

const char* to_string(StratumKind k);
const char* to_string(Degeneracy d);

struct CriticalPointRecord {
  Eigen::Vector2d location;
  double value{};
  double gradient_norm{};
  Eigen::Vector2d normal{Eigen::Vector2d::Zero()};  // -grad f / |grad f|
  StratumKind stratum{StratumKind::Arc};
  Index ball_i{-1};
  Index ball_j{-1};
  std::optional<double> hessian_restricted;
  int index{};
  int infinite_count{};
  double wedge_margin{};
  Degeneracy degeneracy{Degeneracy::None};

  int lambda() const { return index + infinite_count; }
  bool degenerate() const { return degeneracy != Degeneracy::None; }
};

struct RestrictedHessian {
  double value;
  int index;
  bool degenerate;
};

/// H = <H_f t, t> + |grad f| * kappa on an arc record, with t the unit
/// tangent and kappa = <n, x - c> / rho^2 for the stratum sphere (c, rho).
RestrictedHessian restricted_hessian(const OffsetSet& offset, const CriticalPointRecord& record,
                                     const SmoothFunction& f, const ArrangementTolerances& tols = {});

/// Critical points of f restricted to X, sorted by value then location.
std::vector<CriticalPointRecord> find_critical_points(const OffsetSet& offset, const SmoothFunction& f,
                                                      const ArrangementTolerances& tols = {});

struct CriticalLevel {
  double value;
  std::vector<Index> records;
  std::vector<int> lambdas;  // ascending
};

struct MorseReport {
  bool morse{true};
  Index degenerate_count{};
  bool isolated{true};
  double min_separation{};  // infinity when fewer than two records
  std::vector<CriticalLevel> levels;
  std::vector<std::string> issues;
};

MorseReport check_morse(const std::vector<CriticalPointRecord>& records, const ArrangementTolerances& tols = {});

}  // namespace offmorse
