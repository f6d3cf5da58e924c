#include <doctest.h>

#include <filesystem>

#include "offmorse/errors.hpp"
#include "offmorse/morse_verifier.hpp"
#include "offmorse/report_io.hpp"
#include "offmorse/scenario.hpp"
#include "test_helpers.hpp"

using namespace offmorse;
using nlohmann::json;

namespace {

const std::filesystem::path kScenarios = OFFMORSE_SCENARIO_DIR;

json two_disk_doc() {
  return json::parse(R"({
    "name": "t", "dimension": 2, "points": [[-0.5, 0.0], [0.5, 0.0]],
    "epsilon": 0.8, "mu": 0.6, "function": {"type": "linear", "u": [0.0, 1.0]},
    "grid": {"h": 0.005}
  })");
}

BettiRow row(double c, int b0, int b1) { return {c, b0, b1, b0 - b1, 0.01}; }

}  // namespace

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(two_disk_doc());
  CHECK(s.offset.epsilon() == 0.8);
  CHECK(s.grid.h == 0.005);
  CHECK(s.certify.delta == doctest::Approx(0.08));
  CHECK(s.certify.spacing == doctest::Approx(0.016));
  CHECK(s.sweep.max_refinements == 4);
  CHECK_FALSE(s.flow.has_value());

  json bad = two_disk_doc();
  bad["colour"] = "red";
  CHECK_THROWS_AS(parse_scenario(bad), Error);
  bad = two_disk_doc();
  bad["function"] = {{"type", "cubic"}};
  CHECK_THROWS_AS(parse_scenario(bad), Error);
  bad = two_disk_doc();
  bad["function"]["u"] = {1.0};
  CHECK_THROWS_AS(parse_scenario(bad), Error);
  bad = two_disk_doc();
  bad.erase("epsilon");
  CHECK_THROWS_AS(parse_scenario(bad), Error);
  bad = two_disk_doc();
  bad["mu"] = 1.5;
  CHECK_THROWS_AS(parse_scenario(bad), Error);
  bad = two_disk_doc();
  bad["points_file"] = "x.txt";
  CHECK_THROWS_AS(parse_scenario(bad), Error);
  bad = two_disk_doc();
  bad["tolerances"] = {{"wedge", 1e-5}, {"nope", 1.0}};
  CHECK_THROWS_AS(parse_scenario(bad), Error);

  const Scenario ring = load_scenario(kScenarios / "annulus.json");
  CHECK(ring.offset.cloud().size() == 24);
  CHECK(ring.name == "annulus");
  CHECK_THROWS_AS(load_scenario(kScenarios / "missing.json"), Error);
}

TEST_CASE("constancy check") {
  BettiProfile p;
  p.rows = {row(-0.9, 0, 0), row(-0.75, 2, 0), row(-0.7, 2, 0), row(-0.5, 1, 0), row(1.0, 1, 0)};
  const std::vector<double> crit{-0.8, -0.6245};
  auto c = check_constancy(p, crit);
  CHECK(c.pass);
  REQUIRE(c.intervals.size() == 3);
  CHECK(c.intervals[1].rows == 2);
  CHECK(c.intervals[1].b0 == 2);

  // A corrupted row inside an interval must be caught.
  p.rows[2].b0 = 3;
  c = check_constancy(p, crit);
  CHECK_FALSE(c.pass);
  CHECK_FALSE(c.intervals[1].pass);
  CHECK(c.intervals[0].pass);
}

TEST_CASE("handle attachment bookkeeping") {
  CHECK(check_handle_attachment({0, 0, 0}, {1, 0, 1}, {0}));
  CHECK(check_handle_attachment({0, 0, 0}, {2, 0, 2}, {0, 0}));
  CHECK(check_handle_attachment({2, 0, 2}, {1, 0, 1}, {1}));
  CHECK(check_handle_attachment({1, 0, 1}, {1, 1, 0}, {1}));
  CHECK(check_handle_attachment({3, 0, 3}, {1, 0, 1}, {1, 1}));
  CHECK(check_handle_attachment({1, 1, 0}, {1, 0, 1}, {2}));
  CHECK(check_handle_attachment({2, 0, 2}, {1, 1, 0}, {1, 1}));
  CHECK_FALSE(check_handle_attachment({2, 0, 2}, {3, 0, 3}, {1}));
  CHECK_FALSE(check_handle_attachment({1, 0, 1}, {1, 0, 1}, {0}));
  CHECK_FALSE(check_handle_attachment({1, 0, 1}, {2, 0, 2}, {2}));
  // A 0-cell and a 1-cell on one level can cancel in homology.
  CHECK(check_handle_attachment({1, 0, 1}, {1, 0, 1}, {0, 1}));
  CHECK_THROWS_AS(check_handle_attachment({0, 0, 0}, {0, 0, 0}, {}), Error);
  CHECK_THROWS_AS(check_handle_attachment({0, 0, 0}, {9, 0, 9}, std::vector<int>(9, 0)), Error);

  CHECK(check_euler_total(row(1.0, 1, 0), {0, 0, 1}));
  CHECK(check_euler_total(row(1.0, 1, 1), {0, 0, 0, 1, 1, 0, 1, 1}));
  CHECK_FALSE(check_euler_total(row(1.0, 1, 0), {0, 1}));
}

TEST_CASE("sweep value placement") {
  const auto v = plan_sweep_values({-0.8, -0.6245}, 0.02, 0.9);
  REQUIRE(v.size() == 6);
  CHECK(v[0] == doctest::Approx(-0.82));
  CHECK(v[1] == doctest::Approx(-0.78));
  CHECK(v[2] == doctest::Approx(-0.71225));
  CHECK(v[3] == doctest::Approx(-0.6445));
  CHECK(v[4] == doctest::Approx(-0.6045));
  CHECK(v[5] == doctest::Approx(0.9));

  const auto narrow = plan_sweep_values({0.0, 0.05}, 0.02, 0.0);
  REQUIRE(narrow.size() == 3);
  CHECK(narrow[1] == doctest::Approx(0.025));
}

TEST_CASE("two-disk scenario end to end") {
  const VerificationReport r = run_scenario(load_scenario(kScenarios / "two_disk.json"));
  CHECK(r.verdict == OverallVerdict::Pass);
  CHECK(exit_code(r.verdict) == 0);
  REQUIRE(r.critical_table.size() == 2);
  CHECK(r.critical_table[0].lambdas == std::vector<int>{0, 0});
  CHECK(r.critical_table[1].lambdas == std::vector<int>{1});
  CHECK(r.critical_table[1].value == doctest::Approx(-0.6245).epsilon(1e-4));
  CHECK(r.euler_chi == 1);
  CHECK(r.euler_expected == 1);
  CHECK(r.thin_cones.pass);
  CHECK(r.thin_cones.creases == 2);

  // Oracle rows at the levels used to describe the scenario.
  const Scenario s = load_scenario(kScenarios / "two_disk.json");
  const GridSpec spec = GridSpec::covering(s.offset, s.grid.h);
  CHECK(stable_betti(s.offset, s.function, -0.9, spec).betti == BettiNumbers{0, 0, 0});
  CHECK(stable_betti(s.offset, s.function, -0.7, spec).betti == BettiNumbers{2, 0, 2});
  CHECK(stable_betti(s.offset, s.function, -0.5, spec).betti == BettiNumbers{1, 0, 1});
  CHECK(stable_betti(s.offset, s.function, 1.0, spec).betti == BettiNumbers{1, 0, 1});
}

TEST_CASE("negative controls") {
  const VerificationReport r = run_scenario(load_scenario(kScenarios / "negative" / "two_point_eps05.json"));
  CHECK(r.verdict == OverallVerdict::NotApplicable);
  CHECK(exit_code(r.verdict) == 2);
  CHECK_FALSE(r.morse_evaluated);

  const Scenario tangent = load_scenario(kScenarios / "negative" / "tangent_pair.json");
  try {
    find_critical_points(tangent.offset, tangent.function);
    FAIL("tangent pair accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TangentPair);
  }
}

TEST_CASE("reports are reproducible and well formed") {
  const Scenario s = load_scenario(kScenarios / "two_disk.json");
  const std::string a = dump_report(run_scenario(s));
  const std::string b = dump_report(run_scenario(s));
  CHECK(a == b);
  const json j = json::parse(a);
  CHECK(j.at("verdict") == "Pass");
  CHECK(j.at("exit_code") == 0);
  CHECK(j.at("critical_points").size() == 3);
  CHECK(j.at("checks").at("euler_total").at("pass") == true);
  // First constancy interval is unbounded below.
  CHECK(j.at("checks").at("constancy").at("intervals")[0].at("lower").is_null());

  const std::string csv = profile_csv(run_scenario(s).sweep);
  CHECK(csv.rfind("c,b0,b1,chi,h\n", 0) == 0);
  const std::string text = render_text(run_scenario(s));
  CHECK(text.find("verdict: Pass") != std::string::npos);
}
