#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "offmorse/ball_arrangement.hpp"
#include "offmorse/composite_clarke.hpp"
#include "offmorse/geometry_core.hpp"
#include "offmorse/inverse_flow.hpp"

namespace offmorse {

struct GridSettings {
  double h;
  double margin = 0.0;
};

struct SweepSettings {
  double offset_fraction = 1e-4;
  int max_refinements = 4;
};

struct CertifySettings {
  double delta;
  double spacing;
};

struct FlowSettings {
  double level;
  double a;
  double b;
  double mu_min;
  std::optional<double> h;
  std::optional<double> pool_radius;
  std::optional<int> max_steps;
  std::optional<double> landing_slack;

  FlowParams params() const;
};

struct ScenarioTolerances {
  double near = kDefaultTolNear;
  double boundary = kDefaultTolBoundary;
  double level = 1e-7;
  double wedge = 1e-6;
  double tangent_rel = 1e-7;
  double value = 1e-7;
  double sep = 1e-5;
  double hessian = 1e-9;

  ArrangementTolerances arrangement() const;
  CompositeTolerances composite() const;
};

/// One verification run: X = Y^eps, the required mu and the function f.
struct Scenario {
  std::string name;
  OffsetSet offset;
  double mu_required;
  SmoothFunction function;
  GridSettings grid;
  SweepSettings sweep;
  CertifySettings certify;
  std::optional<FlowSettings> flow;
  ScenarioTolerances tolerances;
};

/// Parses the scenario document; relative points_file paths resolve
/// against base_dir.  Unknown fields are rejected.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace offmorse
