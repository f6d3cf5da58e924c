// Command-line front end: certify, critical, sweep, flow, verify, report.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "offmorse/errors.hpp"
#include "offmorse/morse_verifier.hpp"
#include "offmorse/report_io.hpp"
#include "offmorse/scenario.hpp"

namespace fs = std::filesystem;
using namespace offmorse;

namespace {

constexpr int kInputError = 5;

struct Output {
  std::string out_path;
  std::string csv_dir;

  void emit(const std::string& text) const {
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out_path);
    f << text;
  }

  void csv(const std::string& name, const std::string& text) const {
    if (csv_dir.empty()) return;
    fs::create_directories(csv_dir);
    std::ofstream f(fs::path(csv_dir) / name);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write CSV into " + csv_dir);
    f << text;
  }
};

std::vector<double> parse_pair(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      out.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + field + "' in " + what);
    }
  }
  return out;
}

int error_exit(const Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  switch (e.code()) {
    case ErrorCode::TangentPair:
    case ErrorCode::GradientVanishesOnX:
      return exit_code(OverallVerdict::Degenerate);
    case ErrorCode::Unstable:
      return exit_code(OverallVerdict::Unstable);
    default:
      return kInputError;
  }
}

std::vector<double> critical_values_of(const Scenario& s) {
  const auto records = find_critical_points(s.offset, s.function, s.tolerances.arrangement());
  std::vector<double> values;
  for (const auto& level : check_morse(records, s.tolerances.arrangement()).levels) values.push_back(level.value);
  return values;
}

int cmd_certify(const std::string& path, bool text, const Output& out) {
  const Scenario s = load_scenario(path);
  const auto cert =
      certify_regular_value(s.offset.cloud(), s.offset.epsilon(), s.mu_required, s.certify.delta, s.certify.spacing);
  if (text) {
    std::ostringstream os;
    os << to_string(cert.verdict) << " mu_observed=" << cert.mu_observed << " samples=" << cert.sample_count << "\n";
    out.emit(os.str());
  } else {
    out.emit(to_json(cert).dump(2) + "\n");
  }
  return cert.verdict == Verdict::Certified ? 0 : exit_code(OverallVerdict::NotApplicable);
}

int cmd_critical(const std::string& path, const Output& out) {
  const Scenario s = load_scenario(path);
  const auto records = find_critical_points(s.offset, s.function, s.tolerances.arrangement());
  out.emit(to_json(records).dump(2) + "\n");
  out.csv("critical.csv", critical_csv(records));
  return check_morse(records, s.tolerances.arrangement()).morse ? 0 : exit_code(OverallVerdict::Degenerate);
}

int cmd_sweep(const std::string& path, const Output& out) {
  const Scenario s = load_scenario(path);
  const SweepResult sweep = sweep_scenario(s, critical_values_of(s));
  const std::string csv = profile_csv(sweep.profile);
  out.emit(csv);
  out.csv("sweep.csv", csv);
  for (const auto& n : sweep.notes) std::cerr << "note: " << n << "\n";
  return sweep.profile.stable ? 0 : exit_code(OverallVerdict::Unstable);
}

int cmd_flow(const std::string& path, const std::string& start, const std::string& band, std::optional<double> level,
             std::optional<double> mu_min, const Output& out) {
  const Scenario s = load_scenario(path);
  const std::vector<double> x0 = parse_pair(start, "--start");
  if (static_cast<Index>(x0.size()) != s.offset.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "--start needs one coordinate per dimension");
  }

  FlowSettings settings = s.flow.value_or(FlowSettings{0.0, 0.0, 1.0, 0.5, {}, {}, {}, {}});
  if (!band.empty()) {
    const std::vector<double> ab = parse_pair(band, "--band");
    if (ab.size() != 2) throw Error(ErrorCode::InvalidArgument, "--band expects a,b");
    settings.a = ab[0];
    settings.b = ab[1];
  } else if (!s.flow) {
    throw Error(ErrorCode::InvalidArgument, "no flow band: pass --band a,b or add a flow section");
  }
  if (level) settings.level = *level;
  if (mu_min) settings.mu_min = *mu_min;

  const CompositeLevelFunction clf(s.offset, s.function, settings.level);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Index>(x0.size()));
  const Trajectory t = descend(clf, x, settings.params(), s.tolerances.composite());
  const std::string csv = trajectory_csv(t);
  out.emit(csv);
  out.csv("trajectory.csv", csv);
  std::cerr << to_string(t.termination) << " after " << t.vertices.size() - 1 << " steps, arc length " << t.arc_length
            << "\n";
  return t.termination == Termination::Landed ? 0 : 1;
}

int verify_one(const fs::path& path, bool json, const Output& out) {
  const Scenario s = load_scenario(path);
  const VerificationReport report = run_scenario(s);
  out.emit(json ? dump_report(report) : render_text(report));
  if (!out.csv_dir.empty()) {
    const std::string stem = s.name + "_";
    out.csv(stem + "critical.csv", critical_csv(report.records));
    out.csv(stem + "sweep.csv", profile_csv(report.sweep));
  }
  return exit_code(report.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morse theory checks for offsets of point clouds"};
  app.require_subcommand(1);

  Output out;
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out.out_path, "write output to this file instead of stdout");
    cmd->add_option("--csv-dir", out.csv_dir, "also write CSV tables into this directory");
  };

  std::string scenario;
  bool text = false;
  bool json = false;

  auto* certify = app.add_subcommand("certify", "certify that epsilon is a regular value of d_Y");
  certify->add_option("scenario", scenario, "scenario JSON")->required();
  certify->add_flag("--text", text, "one-line text summary instead of JSON");
  add_output(certify);

  auto* critical = app.add_subcommand("critical", "critical points of f restricted to X");
  critical->add_option("scenario", scenario, "scenario JSON")->required();
  add_output(critical);

  auto* sweep = app.add_subcommand("sweep", "Betti profile of the sublevel sets as CSV");
  sweep->add_option("scenario", scenario, "scenario JSON")->required();
  add_output(sweep);

  std::string start;
  std::string band;
  std::optional<double> level;
  std::optional<double> mu_min;
  auto* flow = app.add_subcommand("flow", "approximate inverse flow trajectory as CSV");
  flow->add_option("scenario", scenario, "scenario JSON")->required();
  flow->add_option("--start", start, "start point x,y")->required();
  flow->add_option("--band", band, "band a,b (defaults to the scenario flow section)");
  flow->add_option("--level", level, "level c of phi = d_X + max(f - c, 0)");
  flow->add_option("--mu-min", mu_min, "required lower bound on Delta(grad phi)");
  add_output(flow);

  std::string all_dir;
  auto* verify = app.add_subcommand("verify", "full pipeline; exit code reports the verdict");
  verify->add_option("scenario", scenario, "scenario JSON");
  verify->add_option("--all", all_dir, "verify every *.json scenario in a directory");
  verify->add_flag("--json", json, "emit the JSON report instead of text");
  add_output(verify);

  bool as_text = false;
  auto* report = app.add_subcommand("report", "full pipeline, report only");
  report->add_option("scenario", scenario, "scenario JSON")->required();
  auto* json_flag = report->add_flag("--json", json, "JSON report");
  auto* text_flag = report->add_flag("--text", as_text, "text report");
  json_flag->excludes(text_flag);
  add_output(report);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*certify) return cmd_certify(scenario, text, out);
    if (*critical) return cmd_critical(scenario, out);
    if (*sweep) return cmd_sweep(scenario, out);
    if (*flow) return cmd_flow(scenario, start, band, level, mu_min, out);
    if (*verify) {
      if (all_dir.empty() == scenario.empty()) {
        std::cerr << "verify needs exactly one of <scenario> or --all <dir>\n";
        return kInputError;
      }
      if (scenario.empty()) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(all_dir))
          if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        int worst = 0;
        for (const auto& f : files) {
          int code = 0;
          try {
            code = verify_one(f, json, out);
          } catch (const Error& e) {
            code = error_exit(e);
          }
          std::cerr << f.filename().string() << ": exit " << code << "\n";
          worst = std::max(worst, code);
        }
        return worst;
      }
      return verify_one(scenario, json, out);
    }
    if (*report) {
      const VerificationReport r = run_scenario(load_scenario(scenario));
      out.emit(json ? dump_report(r) : render_text(r));
      return exit_code(r.verdict);
    }
  } catch (const Error& e) {
    return error_exit(e);
  }
  return 0;
}
