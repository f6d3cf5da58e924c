#include "offmorse/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace offmorse {

using nlohmann::json;

namespace {

json vec(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i) + 0.0);  // no -0
  return out;
}

// JSON has no infinities; unbounded interval ends become null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace

json to_json(const RegularValueCertificate& cert) {
  json j{{"epsilon", cert.epsilon},
         {"mu_required", cert.mu_required},
         {"shell_halfwidth", cert.shell_halfwidth},
         {"mu_observed", cert.mu_observed},
         {"sample_count", cert.sample_count},
         {"sample_spacing", cert.sample_spacing},
         {"slack", cert.slack},
         {"verdict", to_string(cert.verdict)}};
  if (cert.witness) {
    j["witness"] = vec(*cert.witness);
    j["witness_delta"] = cert.witness_delta;
  }
  return j;
}

json to_json(const CriticalPointRecord& r) {
  json j{{"location", vec(r.location)},
         {"value", r.value},
         {"gradient_norm", r.gradient_norm},
         {"normal", vec(r.normal)},
         {"stratum", to_string(r.stratum)},
         {"index", r.index},
         {"infinite_count", r.infinite_count},
         {"lambda", r.lambda()},
         {"degenerate", to_string(r.degeneracy)}};
  j["balls"] = json::array();
  if (r.ball_i >= 0) j["balls"].push_back(r.ball_i);
  if (r.ball_j >= 0) j["balls"].push_back(r.ball_j);
  j["hessian_restricted"] = r.hessian_restricted ? json(*r.hessian_restricted) : json(nullptr);
  if (r.stratum == StratumKind::Crease) j["wedge_margin"] = r.wedge_margin;
  return j;
}

json to_json(const std::vector<CriticalPointRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr;
}

json to_json(const VerificationReport& report) {
  json j;
  j["scenario"] = report.scenario;
  j["certificate"] = to_json(report.certificate);
  j["verdict"] = to_string(report.verdict);
  j["exit_code"] = exit_code(report.verdict);
  j["notes"] = report.notes;
  if (report.morse_evaluated) {
    j["morse"] = {{"morse", report.morse.morse},
                  {"degenerate_count", report.morse.degenerate_count},
                  {"isolated", report.morse.isolated},
                  {"min_separation", finite_or_null(report.morse.min_separation)},
                  {"issues", report.morse.issues}};
    j["critical_points"] = to_json(report.records);
    json table = json::array();
    for (const auto& level : report.critical_table) {
      table.push_back({{"value", level.value},
                       {"multiplicity", level.records.size()},
                       {"lambdas", level.lambdas},
                       {"records", level.records}});
    }
    j["critical_table"] = table;
    j["thin_normal_cones"] = {{"pass", report.thin_cones.pass},
                              {"creases", report.thin_cones.creases},
                              {"min_delta", finite_or_null(report.thin_cones.min_delta)}};
  }
  if (!report.sweep.rows.empty() || !report.sweep.stable) {
    json rows = json::array();
    for (const auto& r : report.sweep.rows) {
      rows.push_back({{"c", r.c}, {"b0", r.b0}, {"b1", r.b1}, {"chi", r.chi}, {"h", r.spacing}});
    }
    j["sweep"] = {{"rows", rows}, {"stable", report.sweep.stable}, {"margin", report.sweep_margin}};
  }
  if (report.checks_evaluated) {
    json intervals = json::array();
    for (const auto& iv : report.constancy.intervals) {
      intervals.push_back({{"lower", finite_or_null(iv.lower)},
                           {"upper", finite_or_null(iv.upper)},
                           {"pass", iv.pass},
                           {"rows", iv.rows},
                           {"b0", iv.b0},
                           {"b1", iv.b1}});
    }
    json handles = json::array();
    for (const auto& h : report.handles) {
      handles.push_back({{"value", h.value},
                         {"lambdas", h.lambdas},
                         {"before", {h.before.b0, h.before.b1}},
                         {"after", {h.after.b0, h.after.b1}},
                         {"pass", h.pass},
                         {"visible_change", h.visible_change}});
    }
    j["checks"] = {{"constancy", {{"pass", report.constancy.pass}, {"intervals", intervals}}},
                   {"handle_attachment", handles},
                   {"euler_total",
                    {{"pass", report.euler_total}, {"chi", report.euler_chi}, {"expected", report.euler_expected}}}};
  }
  return j;
}

std::string dump_report(const VerificationReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_text(const VerificationReport& report) {
  std::ostringstream os;
  const auto& cert = report.certificate;
  os << "scenario " << report.scenario << "\n";
  os << "certificate: " << to_string(cert.verdict) << " (mu_required " << fmt(cert.mu_required) << ", mu_observed "
     << fmt(cert.mu_observed) << ", " << cert.sample_count << " samples at spacing " << fmt(cert.sample_spacing)
     << ")\n";
  if (cert.witness) {
    os << "  witness (" << fmt((*cert.witness)(0)) << ", " << fmt((*cert.witness)(1)) << ") delta "
       << fmt(cert.witness_delta) << "\n";
  }
  if (report.morse_evaluated) {
    os << "morse: " << (report.morse.morse ? "yes" : "no") << ", " << report.records.size() << " critical points\n";
    for (const auto& level : report.critical_table) {
      os << "  level " << fmt(level.value, 8) << "  lambdas {";
      for (std::size_t k = 0; k < level.lambdas.size(); ++k) os << (k ? "," : "") << level.lambdas[k];
      os << "}\n";
    }
    os << "thin normal cones: " << (report.thin_cones.pass ? "pass" : "FAIL") << " over " << report.thin_cones.creases
       << " creases\n";
  }
  if (!report.sweep.rows.empty()) {
    os << "sweep (c: b0 b1 chi @h)\n";
    for (const auto& r : report.sweep.rows) {
      os << "  " << fmt(r.c, 8) << ": " << r.b0 << " " << r.b1 << " " << r.chi << " @" << fmt(r.spacing, 4) << "\n";
    }
  }
  if (report.checks_evaluated) {
    os << "constancy: " << (report.constancy.pass ? "pass" : "FAIL") << "\n";
    for (const auto& iv : report.constancy.intervals) {
      if (!iv.pass) os << "  interval (" << fmt(iv.lower) << ", " << fmt(iv.upper) << ") not constant\n";
    }
    for (const auto& h : report.handles) {
      os << "handle at " << fmt(h.value, 8) << ": (" << h.before.b0 << "," << h.before.b1 << ") -> (" << h.after.b0
         << "," << h.after.b1 << ") " << (h.pass ? "pass" : "FAIL") << "\n";
    }
    os << "euler total: chi " << report.euler_chi << " vs " << report.euler_expected << " "
       << (report.euler_total ? "pass" : "FAIL") << "\n";
  }
  for (const auto& n : report.notes) os << "note: " << n << "\n";
  os << "verdict: " << to_string(report.verdict) << "\n";
  return os.str();
}

std::string critical_csv(const std::vector<CriticalPointRecord>& records) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "x,y,value,gradient_norm,stratum,hessian_restricted,index,infinite_count,lambda,degenerate\n";
  for (const auto& r : records) {
    os << r.location.x() << ',' << r.location.y() << ',' << r.value << ',' << r.gradient_norm << ','
       << to_string(r.stratum) << ',';
    if (r.hessian_restricted) os << *r.hessian_restricted;
    os << ',' << r.index << ',' << r.infinite_count << ',' << r.lambda() << ',' << to_string(r.degeneracy) << '\n';
  }
  return os.str();
}

std::string profile_csv(const BettiProfile& profile) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "c,b0,b1,chi,h\n";
  for (const auto& r : profile.rows) os << r.c << ',' << r.b0 << ',' << r.b1 << ',' << r.chi << ',' << r.spacing << '\n';
  return os.str();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "vertex";
  const Index d = trajectory.vertices.empty() ? 0 : trajectory.vertices.front().size();
  for (Index k = 0; k < d; ++k) os << ",x" << k;
  os << ",phi\n";
  for (std::size_t i = 0; i < trajectory.vertices.size(); ++i) {
    os << i;
    for (Index k = 0; k < d; ++k) os << ',' << trajectory.vertices[i](k);
    os << ',' << trajectory.phi_values[i] << '\n';
  }
  return os.str();
}

}  // namespace offmorse
