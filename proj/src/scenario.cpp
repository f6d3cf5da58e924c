#include "offmorse/scenario.hpp"

#include <fstream>
#include <set>

#include "offmorse/errors.hpp"

namespace offmorse {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::ScenarioFormat, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw Error(ErrorCode::ScenarioFormat, "unknown field '" + key + "' in " + where);
  }
}

template <typename T>
T required(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw Error(ErrorCode::ScenarioFormat, "missing field '" + key + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ScenarioFormat, "field '" + key + "' in " + where + ": " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return required<T>(obj, key, where);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

SmoothFunction parse_function(const json& fn, Index dimension) {
  const auto type = required<std::string>(fn, "type", "function");
  if (type == "linear") {
    reject_unknown(fn, {"type", "u"}, "function");
    const Eigen::VectorXd u = to_vector(required<std::vector<double>>(fn, "u", "function"));
    if (u.size() != dimension) throw Error(ErrorCode::ScenarioFormat, "function.u has the wrong dimension");
    return SmoothFunction::linear(u);
  }
  if (type == "quadratic") {
    reject_unknown(fn, {"type", "p", "s"}, "function");
    const Eigen::VectorXd p = to_vector(required<std::vector<double>>(fn, "p", "function"));
    if (p.size() != dimension) throw Error(ErrorCode::ScenarioFormat, "function.p has the wrong dimension");
    return SmoothFunction::quadratic(p, required<int>(fn, "s", "function"));
  }
  throw Error(ErrorCode::ScenarioFormat, "unsupported function type '" + type + "'");
}

}  // namespace

FlowParams FlowSettings::params() const {
  FlowParams p = FlowParams::with_defaults(a, b, mu_min);
  if (h) {
    p.step = *h;
    p.pool_radius = 0.5 * p.step;
    p.max_steps = 4 * p.minimal_step_budget();
  }
  if (pool_radius) p.pool_radius = *pool_radius;
  if (max_steps) p.max_steps = *max_steps;
  if (landing_slack) p.landing_slack = *landing_slack;
  return p;
}

ArrangementTolerances ScenarioTolerances::arrangement() const {
  ArrangementTolerances t;
  t.tangent_rel = tangent_rel;
  t.wedge = wedge;
  t.value = value;
  t.sep = sep;
  t.hessian = hessian;
  t.boundary = boundary;
  return t;
}

CompositeTolerances ScenarioTolerances::composite() const { return {near, boundary, level}; }

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc,
                 {"name", "dimension", "points", "points_file", "epsilon", "mu", "function", "grid", "sweep",
                  "certify", "flow", "tolerances"},
                 "scenario");
  const int dimension = required<int>(doc, "dimension", "scenario");
  if (dimension < 1) throw Error(ErrorCode::ScenarioFormat, "dimension must be positive");

  const bool inline_points = doc.contains("points");
  if (inline_points == doc.contains("points_file")) {
    throw Error(ErrorCode::ScenarioFormat, "exactly one of points / points_file is required");
  }
  PointCloud cloud = inline_points
                         ? PointCloud::from_rows(required<std::vector<std::vector<double>>>(doc, "points", "scenario"))
                         : read_point_file(base_dir / required<std::string>(doc, "points_file", "scenario"));
  if (cloud.dimension() != dimension) throw Error(ErrorCode::ScenarioFormat, "points do not match dimension");

  const double epsilon = required<double>(doc, "epsilon", "scenario");
  const double mu = required<double>(doc, "mu", "scenario");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::ScenarioFormat, "epsilon must be positive");
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::ScenarioFormat, "mu must lie in (0, 1]");
  if (!doc.contains("function")) throw Error(ErrorCode::ScenarioFormat, "missing field 'function'");
  SmoothFunction fn = parse_function(doc.at("function"), dimension);

  GridSettings grid{epsilon / 50.0, 0.0};
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    reject_unknown(g, {"h", "margin"}, "grid");
    grid.h = optional_field<double>(g, "h", "grid").value_or(grid.h);
    grid.margin = optional_field<double>(g, "margin", "grid").value_or(grid.margin);
  }
  SweepSettings sweep;
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    reject_unknown(s, {"offset_fraction", "max_refinements"}, "sweep");
    sweep.offset_fraction = optional_field<double>(s, "offset_fraction", "sweep").value_or(sweep.offset_fraction);
    sweep.max_refinements = optional_field<int>(s, "max_refinements", "sweep").value_or(sweep.max_refinements);
  }
  CertifySettings certify{epsilon / 10.0, epsilon / 50.0};
  if (doc.contains("certify")) {
    const json& c = doc.at("certify");
    reject_unknown(c, {"delta", "spacing"}, "certify");
    certify.delta = optional_field<double>(c, "delta", "certify").value_or(certify.delta);
    certify.spacing = optional_field<double>(c, "spacing", "certify").value_or(certify.spacing);
  }
  std::optional<FlowSettings> flow;
  if (doc.contains("flow")) {
    const json& f = doc.at("flow");
    reject_unknown(f, {"level", "a", "b", "mu_min", "h", "pool_radius", "max_steps", "landing_slack"}, "flow");
    flow = FlowSettings{required<double>(f, "level", "flow"),
                        required<double>(f, "a", "flow"),
                        required<double>(f, "b", "flow"),
                        required<double>(f, "mu_min", "flow"),
                        optional_field<double>(f, "h", "flow"),
                        optional_field<double>(f, "pool_radius", "flow"),
                        optional_field<int>(f, "max_steps", "flow"),
                        optional_field<double>(f, "landing_slack", "flow")};
  }
  ScenarioTolerances tol;
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    reject_unknown(t, {"near", "boundary", "level", "wedge", "tangent", "value", "sep", "hessian"}, "tolerances");
    tol.near = optional_field<double>(t, "near", "tolerances").value_or(tol.near);
    tol.boundary = optional_field<double>(t, "boundary", "tolerances").value_or(tol.boundary);
    tol.level = optional_field<double>(t, "level", "tolerances").value_or(tol.level);
    tol.wedge = optional_field<double>(t, "wedge", "tolerances").value_or(tol.wedge);
    tol.tangent_rel = optional_field<double>(t, "tangent", "tolerances").value_or(tol.tangent_rel);
    tol.value = optional_field<double>(t, "value", "tolerances").value_or(tol.value);
    tol.sep = optional_field<double>(t, "sep", "tolerances").value_or(tol.sep);
    tol.hessian = optional_field<double>(t, "hessian", "tolerances").value_or(tol.hessian);
  }

  return Scenario{optional_field<std::string>(doc, "name", "scenario").value_or("scenario"),
                  OffsetSet(std::move(cloud), epsilon),
                  mu,
                  std::move(fn),
                  grid,
                  sweep,
                  certify,
                  flow,
                  tol};
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ScenarioFormat, "cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ScenarioFormat, path.string() + ": " + e.what());
  }
  Scenario s = parse_scenario(doc, path.parent_path());
  if (!doc.contains("name")) s.name = path.stem().string();
  return s;
}

}  // namespace offmorse
