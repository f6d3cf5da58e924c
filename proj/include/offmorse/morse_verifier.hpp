#pragma once

#include <string>
#include <vector>

#include "offmorse/ball_arrangement.hpp"
#include "offmorse/clarke_distance.hpp"
#include "offmorse/cubical_homology.hpp"
#include "offmorse/scenario.hpp"

namespace offmorse {

enum class OverallVerdict { Pass, CheckFailure, NotApplicable, Degenerate, Unstable };
const char* to_string(OverallVerdict v);

/// 0 pass, 1 check failure, 2 not applicable, 3 degenerate, 4 unstable grid.
int exit_code(OverallVerdict v);

struct IntervalCheck {
  double lower;  // -inf for the first interval
  double upper;  // +inf for the last interval
  bool pass;
  Index rows;
  int b0;
  int b1;
};

struct ConstancyCheck {
  bool pass{true};
  std::vector<IntervalCheck> intervals;
};

/// Rows inside each open interval between consecutive critical values (and
/// before the first / after the last) must share (b0, b1).  An interval
/// without rows passes and reports (0, 0).
ConstancyCheck check_constancy(const BettiProfile& profile, const std::vector<double>& critical_values);

/// Delta chi matches sum (-1)^lambda and the Betti change can be produced by
/// attaching the cells one at a time, each lambda-cell either raising
/// b_lambda or lowering b_(lambda-1).  At most 8 cells per level.
bool check_handle_attachment(const BettiNumbers& before, const BettiNumbers& after, const std::vector<int>& lambdas);

/// chi of the final sweep row equals sum over all critical points of (-1)^lambda.
bool check_euler_total(const BettiRow& final_row, const std::vector<int>& lambdas);

struct HandleCheck {
  double value;
  std::vector<int> lambdas;
  BettiNumbers before;
  BettiNumbers after;
  bool pass;
  bool visible_change;
};

struct ThinConeCheck {
  bool pass{true};
  Index creases{};
  double min_delta{};  // +inf without creases
};

struct CriticalTableLevel {
  double value;
  std::vector<int> lambdas;
  std::vector<Index> records;
};

struct VerificationReport {
  std::string scenario;
  RegularValueCertificate certificate;
  bool morse_evaluated{false};
  MorseReport morse;
  std::vector<CriticalPointRecord> records;
  std::vector<CriticalTableLevel> critical_table;
  ThinConeCheck thin_cones;
  BettiProfile sweep;
  double sweep_margin{};
  bool checks_evaluated{false};
  ConstancyCheck constancy;
  std::vector<HandleCheck> handles;
  bool euler_total{false};
  int euler_chi{};
  int euler_expected{};
  std::vector<std::string> notes;
  OverallVerdict verdict{OverallVerdict::NotApplicable};
};

/// Planned sweep values: one below the first critical value, for each gap
/// the midpoint plus c_k + m and c_(k+1) - m when the gap exceeds 4m, one
/// above the last critical value and one above max f on the grid box.
std::vector<double> plan_sweep_values(const std::vector<double>& critical_values, double margin, double top_value);

struct SweepResult {
  BettiProfile profile;
  double margin{};
  std::vector<std::string> notes;  // one per unstable sweep value
};

/// Stabilised Betti numbers at the planned values.  The starting spacing at
/// each value is min(h, gap / (4 Lip f)), floored at h / 16, where gap is the
/// distance to the nearest critical value.
SweepResult sweep_scenario(const Scenario& s, const std::vector<double>& critical_values);

/// certify -> strata -> critical points -> Morse check -> Betti sweep ->
/// constancy, handle attachment and Euler checks.  TangentPair propagates
/// as an Error; an unstable grid yields the Unstable verdict.
VerificationReport run_scenario(const Scenario& s);

}  // namespace offmorse
