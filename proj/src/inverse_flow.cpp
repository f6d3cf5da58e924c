#include "offmorse/inverse_flow.hpp"

#include <cmath>

#include "offmorse/errors.hpp"

namespace offmorse {

FlowParams FlowParams::with_defaults(double a, double b, double mu_min) {
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "flow band needs a < b");
  if (!(mu_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_min must be positive");
  FlowParams p;
  p.a = a;
  p.b = b;
  p.mu_min = mu_min;
  p.step = 0.01 * (b - a) / mu_min;
  p.pool_radius = 0.5 * p.step;
  p.max_steps = 4 * p.minimal_step_budget();
  p.landing_slack = 1e-4 * (b - a);
  p.rate_slack = 0.1 * mu_min;
  return p;
}

int FlowParams::minimal_step_budget() const {
  return static_cast<int>(std::ceil((b - a) / (0.5 * mu_min * step)));
}

void FlowParams::validate() const {
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "flow band needs a < b");
  if (!(mu_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_min must be positive");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (!(pool_radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pool radius must be nonnegative");
  if (!(landing_slack > 0.0)) throw Error(ErrorCode::InvalidArgument, "landing slack must be positive");
  if (!(rate_slack >= 0.0 && rate_slack < mu_min)) throw Error(ErrorCode::InvalidArgument, "rate slack out of range");
  if (max_steps < minimal_step_budget()) {
    throw Error(ErrorCode::InvalidArgument, "max_steps below ceil((b - a) / ((mu_min / 2) h))");
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Landed: return "Landed";
    case Termination::CriticalEncountered: return "CriticalEncountered";
    case Termination::StepLimit: return "StepLimit";
  }
  return "?";
}

namespace {

Eigen::MatrixXd pooled_generators(const CompositeLevelFunction& clf, const Eigen::VectorXd& x,
                                  const FlowParams& params, const CompositeTolerances& tols) {
  std::vector<Eigen::MatrixXd> blocks{phi_clarke_generators(clf, x, tols).matrix()};
  Index total = blocks.front().cols();
  if (params.pool_radius > 0.0) {
    const Index d = x.size();
    for (Index k = 0; k < d; ++k) {
      for (double sign : {1.0, -1.0}) {
        const Eigen::VectorXd probe = x + sign * params.pool_radius * Eigen::VectorXd::Unit(d, k);
        if (clf.value(probe) <= params.a) continue;
        blocks.push_back(phi_clarke_generators(clf, probe, tols).matrix());
        total += blocks.back().cols();
      }
    }
  }
  Eigen::MatrixXd all(x.size(), total);
  Index col = 0;
  for (const auto& b : blocks) {
    all.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return all;
}

}  // namespace

Trajectory descend(const CompositeLevelFunction& clf, const VecRef& x0, const FlowParams& params,
                   const CompositeTolerances& tols) {
  params.validate();
  if (x0.size() != clf.dimension()) throw Error(ErrorCode::DimensionMismatch, "start point dimension");
  Eigen::VectorXd x = x0;
  double phi = clf.value(x);
  if (phi > params.b) throw Error(ErrorCode::InvalidArgument, "start point lies above the b-sublevel");

  Trajectory traj;
  traj.vertices.push_back(x);
  traj.phi_values.push_back(phi);
  if (phi <= params.a) {
    traj.termination = Termination::Landed;
    return traj;
  }

  const double certified_rate = params.mu_min - params.rate_slack;
  auto record = [&](const Eigen::VectorXd& next, double phi_next) {
    traj.arc_length += (next - x).norm();
    x = next;
    phi = phi_next;
    traj.vertices.push_back(x);
    traj.phi_values.push_back(phi);
  };
  auto critical_here = [&]() {
    traj.termination = Termination::CriticalEncountered;
    traj.critical_point = x;
    return traj;
  };

  for (int step = 0; step < params.max_steps; ++step) {
    const MinNormResult<double> w = min_norm_point(GeneratorSet<double>(pooled_generators(clf, x, params, tols)));
    if (w.norm < params.mu_min) return critical_here();
    const Eigen::VectorXd dir = -w.point / w.norm;

    double t = params.step;
    bool accepted = false;
    for (int halving = 0; halving <= 20 && !accepted; ++halving, t *= 0.5) {
      const Eigen::VectorXd next = x + t * dir;
      const double phi_next = clf.value(next);
      if (phi_next <= params.a) {
        // Bisect for the first crossing of the a-level along the step.
        double lo = 0.0;
        double hi = t;
        Eigen::VectorXd land = next;
        double phi_land = phi_next;
        for (int it = 0; it < 60 && hi - lo > 1e-15 * t; ++it) {
          const double mid = 0.5 * (lo + hi);
          const Eigen::VectorXd probe = x + mid * dir;
          const double phi_probe = clf.value(probe);
          if (phi_probe > params.a) {
            lo = mid;
          } else {
            hi = mid;
            land = probe;
            phi_land = phi_probe;
          }
        }
        record(land, phi_land);
        traj.termination = Termination::Landed;
        return traj;
      }
      if (phi_next <= phi - certified_rate * t) {
        record(next, phi_next);
        accepted = true;
      }
    }
    if (!accepted) return critical_here();
  }
  traj.termination = Termination::StepLimit;
  return traj;
}

RetractionResult retract_samples(const CompositeLevelFunction& clf, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                 const FlowParams& params, const CompositeTolerances& tols) {
  RetractionResult out;
  out.entries.reserve(static_cast<std::size_t>(samples.cols()));
  for (Index i = 0; i < samples.cols(); ++i) {
    const Trajectory t = descend(clf, samples.col(i), params, tols);
    out.entries.push_back({t.vertices.front(), t.vertices.back(), t.termination,
                           static_cast<Index>(t.vertices.size()) - 1, t.arc_length, t.phi_values.front(),
                           t.phi_values.back()});
    switch (t.termination) {
      case Termination::Landed: ++out.landed; break;
      case Termination::CriticalEncountered: ++out.critical; break;
      case Termination::StepLimit: ++out.step_limited; break;
    }
  }
  return out;
}

}  // namespace offmorse
