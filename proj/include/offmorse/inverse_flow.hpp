#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "offmorse/composite_clarke.hpp"

namespace offmorse {

struct FlowParams {
  double a{};
  double b{};
  double mu_min{};
  double step{};         // h
  double pool_radius{};  // rho
  int max_steps{};
  double landing_slack{};
  double rate_slack{};

  /// h = 0.01 (b - a) / mu_min, rho = h / 2, four times the minimal step
  /// budget, landing slack 1e-4 (b - a), rate slack 0.1 mu_min.
  static FlowParams with_defaults(double a, double b, double mu_min);

  int minimal_step_budget() const;
  void validate() const;
};

enum class Termination { Landed, CriticalEncountered, StepLimit };
const char* to_string(Termination t);

struct Trajectory {
  std::vector<Eigen::VectorXd> vertices;
  std::vector<double> phi_values;
  double arc_length{};
  Termination termination{Termination::StepLimit};
  std::optional<Eigen::VectorXd> critical_point;

  double phi_drop() const { return phi_values.front() - phi_values.back(); }
};

/// Discrete approximate inverse flow of phi from the b-sublevel down to the
/// a-sublevel: unit steps along -W / |W|, W the min-norm point of the
/// generators pooled over x and the stencil x +- rho e_k (stencil points
/// outside the band (a, b] are skipped).  A step is accepted only when phi
/// drops by at least (mu_min - rate_slack) times its length; the step is
/// halved otherwise.  The last step is bisected to land in
/// [a - landing_slack, a].
Trajectory descend(const CompositeLevelFunction& clf, const VecRef& x0, const FlowParams& params,
                   const CompositeTolerances& tols = {});

struct RetractionEntry {
  Eigen::VectorXd start;
  Eigen::VectorXd end;
  Termination termination;
  Index steps;
  double arc_length;
  double phi_start;
  double phi_end;
};

struct RetractionResult {
  std::vector<RetractionEntry> entries;
  Index landed{};
  Index critical{};
  Index step_limited{};

  /// False when any sample met a critical point or ran out of steps.
  bool ok() const { return critical == 0 && step_limited == 0; }
};

/// Maps every sample (columns) through descend.
RetractionResult retract_samples(const CompositeLevelFunction& clf, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                 const FlowParams& params, const CompositeTolerances& tols = {});

}  // namespace offmorse
