#include "offmorse/morse_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "offmorse/errors.hpp"

namespace offmorse {

const char* to_string(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::Pass: return "Pass";
    case OverallVerdict::CheckFailure: return "CheckFailure";
    case OverallVerdict::NotApplicable: return "NotApplicable";
    case OverallVerdict::Degenerate: return "Degenerate";
    case OverallVerdict::Unstable: return "Unstable";
  }
  return "?";
}

int exit_code(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::Pass: return 0;
    case OverallVerdict::CheckFailure: return 1;
    case OverallVerdict::NotApplicable: return 2;
    case OverallVerdict::Degenerate: return 3;
    case OverallVerdict::Unstable: return 4;
  }
  return 1;
}

ConstancyCheck check_constancy(const BettiProfile& profile, const std::vector<double>& critical_values) {
  std::vector<double> cuts = critical_values;
  std::sort(cuts.begin(), cuts.end());
  const double inf = std::numeric_limits<double>::infinity();

  ConstancyCheck out;
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    IntervalCheck iv{k == 0 ? -inf : cuts[k - 1], k == cuts.size() ? inf : cuts[k], true, 0, 0, 0};
    for (const BettiRow& row : profile.rows) {
      if (!(row.c > iv.lower && row.c < iv.upper)) continue;
      if (iv.rows == 0) {
        iv.b0 = row.b0;
        iv.b1 = row.b1;
      } else if (row.b0 != iv.b0 || row.b1 != iv.b1) {
        iv.pass = false;
      }
      ++iv.rows;
    }
    out.pass = out.pass && iv.pass;
    out.intervals.push_back(iv);
  }
  return out;
}

bool check_handle_attachment(const BettiNumbers& before, const BettiNumbers& after, const std::vector<int>& lambdas) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "a critical level carries at least one cell");
  if (lambdas.size() > 8) throw Error(ErrorCode::TooManyCellsPerLevel, "more than 8 cells on one level");

  int expected_dchi = 0;
  for (int l : lambdas) expected_dchi += (l % 2 == 0) ? 1 : -1;
  const int chi_before = before.b0 - before.b1;
  const int chi_after = after.b0 - after.b1;
  if (chi_after - chi_before != expected_dchi) return false;

  const std::size_t p = lambdas.size();
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    // Planar sublevel sets have no b2: a 0-cell must create b0 and a 2-cell
    // must close a cycle.  Creations are applied before destructions.
    int b[2] = {before.b0, before.b1};
    std::vector<int> kills;
    bool valid = true;
    for (std::size_t k = 0; k < p && valid; ++k) {
      const int l = lambdas[k];
      const bool create = (mask >> k & 1u) != 0;
      if (create) {
        if (l >= 2) valid = false;
        else ++b[l];
      } else {
        if (l == 0) valid = false;
        else kills.push_back(l - 1);
      }
    }
    if (!valid) continue;
    for (int dim : kills) {
      if (--b[dim] < 0) valid = false;
    }
    if (valid && b[0] == after.b0 && b[1] == after.b1) return true;
  }
  return false;
}

bool check_euler_total(const BettiRow& final_row, const std::vector<int>& lambdas) {
  int total = 0;
  for (int l : lambdas) total += (l % 2 == 0) ? 1 : -1;
  return final_row.chi == total;
}

std::vector<double> plan_sweep_values(const std::vector<double>& critical_values, double margin, double top_value) {
  std::vector<double> cuts = critical_values;
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> values;
  if (!cuts.empty()) {
    values.push_back(cuts.front() - margin);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k];
      const double hi = cuts[k + 1];
      if (hi - lo > 4.0 * margin) {
        values.push_back(lo + margin);
        values.push_back(0.5 * (lo + hi));
        values.push_back(hi - margin);
      } else {
        values.push_back(0.5 * (lo + hi));
      }
    }
    values.push_back(cuts.back() + margin);
  }
  if (values.empty() || top_value > values.back()) values.push_back(top_value);
  return values;
}

namespace {

double max_on_box(const SmoothFunction& f, const GridSpec& box) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : {box.lower.x(), box.upper.x()})
    for (double y : {box.lower.y(), box.upper.y()}) best = std::max(best, f.value(Eigen::Vector2d(x, y)));
  if (f.kind() == SmoothFunction::Kind::Quadratic && f.sign() < 0) {
    const Eigen::Vector2d clamped = Eigen::Vector2d(f.vector()).cwiseMax(box.lower).cwiseMin(box.upper);
    best = std::max(best, f.value(clamped));
  }
  return best;
}

ThinConeCheck thin_cone_check(const OffsetSet& offset, double mu_observed, const ArrangementTolerances& tols) {
  ThinConeCheck out;
  out.min_delta = std::numeric_limits<double>::infinity();
  for (const auto& s : enumerate_strata(offset, tols)) {
    const auto* crease = std::get_if<CreaseVertex>(&s);
    if (!crease) continue;
    Eigen::MatrixXd wedge(2, 2);
    wedge << crease->normal_i, crease->normal_j;
    const double d = delta(GeneratorSet<double>(wedge));
    ++out.creases;
    out.min_delta = std::min(out.min_delta, d);
    if (d < mu_observed) out.pass = false;
  }
  return out;
}

}  // namespace

SweepResult sweep_scenario(const Scenario& s, const std::vector<double>& critical_values) {
  const OffsetSet& offset = s.offset;
  const GridSpec box = GridSpec::covering(offset, s.grid.h, s.grid.margin);
  const double lip = s.function.lipschitz_on_box(box.lower, box.upper);
  double range = critical_values.empty() ? 0.0 : critical_values.back() - critical_values.front();
  if (range <= 0.0) range = 1.0;

  SweepResult out;
  out.margin = std::max(4.0 * s.grid.h * lip, s.sweep.offset_fraction * range);
  const std::vector<double> values =
      plan_sweep_values(critical_values, out.margin, max_on_box(s.function, box) + out.margin);

  for (double c : values) {
    double gap = std::numeric_limits<double>::infinity();
    for (double v : critical_values) gap = std::min(gap, std::abs(c - v));
    // Features near a critical value have size ~ gap / Lip; resolve them.
    const double h_c = std::clamp(gap / (4.0 * lip), s.grid.h / 16.0, s.grid.h);
    try {
      const StableBetti sb =
          stable_betti(offset, s.function, c, GridSpec::covering(offset, h_c, s.grid.margin), s.sweep.max_refinements);
      out.profile.rows.push_back({c, sb.betti.b0, sb.betti.b1, sb.betti.chi, sb.spacing});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unstable) throw;
      out.profile.stable = false;
      out.notes.push_back(e.what());
    }
  }
  return out;
}

VerificationReport run_scenario(const Scenario& s) {
  VerificationReport report;
  report.scenario = s.name;
  const OffsetSet& offset = s.offset;
  const PointCloud& cloud = offset.cloud();

  report.certificate =
      certify_regular_value(cloud, offset.epsilon(), s.mu_required, s.certify.delta, s.certify.spacing);
  if (report.certificate.verdict != Verdict::Certified) {
    report.verdict = OverallVerdict::NotApplicable;
    report.notes.push_back(std::string("certificate ") + to_string(report.certificate.verdict) +
                           ": offset not certified complementary regular, no Morse claims made");
    return report;
  }

  const ArrangementTolerances arr_tols = s.tolerances.arrangement();
  report.records = find_critical_points(offset, s.function, arr_tols);
  report.morse = check_morse(report.records, arr_tols);
  report.morse_evaluated = true;
  for (const CriticalLevel& level : report.morse.levels) {
    report.critical_table.push_back({level.value, level.lambdas, level.records});
  }
  report.thin_cones = thin_cone_check(offset, report.certificate.mu_observed, arr_tols);
  if (!report.morse.morse) {
    report.verdict = OverallVerdict::Degenerate;
    report.notes.push_back("f restricted to X is not Morse; scenario must be perturbed");
    return report;
  }

  std::vector<double> critical_values;
  for (const auto& level : report.critical_table) critical_values.push_back(level.value);

  SweepResult sweep = sweep_scenario(s, critical_values);
  report.sweep = std::move(sweep.profile);
  report.sweep_margin = sweep.margin;
  report.notes.insert(report.notes.end(), sweep.notes.begin(), sweep.notes.end());
  if (!report.sweep.stable) {
    report.verdict = OverallVerdict::Unstable;
    return report;
  }

  report.checks_evaluated = true;
  report.constancy = check_constancy(report.sweep, critical_values);

  bool handles_ok = true;
  for (const auto& level : report.critical_table) {
    const BettiRow* below = nullptr;
    const BettiRow* above = nullptr;
    for (const BettiRow& row : report.sweep.rows) {
      if (row.c < level.value) below = &row;
      if (row.c > level.value && !above) above = &row;
    }
    const BettiNumbers before = below ? BettiNumbers{below->b0, below->b1, below->chi} : BettiNumbers{};
    const BettiNumbers after = above ? BettiNumbers{above->b0, above->b1, above->chi} : BettiNumbers{};
    HandleCheck hc{level.value, level.lambdas, before, after, false, !(before == after)};
    hc.pass = check_handle_attachment(before, after, level.lambdas);
    handles_ok = handles_ok && hc.pass;
    if (!hc.visible_change) {
      report.notes.push_back("critical value " + std::to_string(level.value) +
                             ": no visible homology change (cells cancel in Betti numbers)");
    }
    report.handles.push_back(hc);
  }

  std::vector<int> all_lambdas;
  for (const auto& r : report.records) all_lambdas.push_back(r.lambda());
  const BettiRow& final_row = report.sweep.rows.back();
  report.euler_chi = final_row.chi;
  report.euler_expected = 0;
  for (int l : all_lambdas) report.euler_expected += (l % 2 == 0) ? 1 : -1;
  report.euler_total = check_euler_total(final_row, all_lambdas);

  const bool all_ok = report.constancy.pass && handles_ok && report.euler_total;
  report.verdict = all_ok ? OverallVerdict::Pass : OverallVerdict::CheckFailure;
  return report;
}

}  // namespace offmorse
