#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistdh/twist.hpp"

namespace twistdh {

// Raised when a scenario document fails validation; `pointer` locates the
// offending field in JSON-pointer syntax (e.g. "/numerics/grid_n").
struct ScenarioValidationError : std::runtime_error {
  ScenarioValidationError(std::string ptr, const std::string& message)
      : std::runtime_error(ptr + ": " + message), pointer(std::move(ptr)) {}
  std::string pointer;
};

struct BoundarySpec {
  std::string twist;
  std::vector<double> alcove_point;  // coefficients on the nonzero vertices
};

// The two automorphisms decorating one handle's holonomy pair.
struct HandleTwistNames {
  std::string tau;
  std::string kappa;
};

struct SurfaceSpec {
  long handles = 0;
  long boundary_count = 0;
  std::vector<HandleTwistNames> handle_twists;  // one pair per handle
  std::vector<BoundarySpec> boundaries;         // one per boundary circle
};

struct NumericsSpec {
  long grid_n = 256;
  double heat_t = 0.02;
  long level_cutoff = 4;
  long mc_samples = 100000;
  std::uint64_t seed = 0;
  bool seed_given = false;  // sampling commands insist on an explicit seed
  double bandwidth = 0.0;   // 0 = rule-of-thumb default
};

// A fully validated scenario document.  Shape and range errors throw
// ScenarioValidationError (CLI exit 2); whether a named twist exists for the
// group is checked later at twist construction (CLI exit 3).
struct Scenario {
  Series series = Series::A;
  int rank = 1;
  std::vector<std::string> twists;  // names the document declares it uses
  SurfaceSpec surface;
  NumericsSpec numerics;
  std::vector<std::string> outputs;          // "csv", "json"
  std::map<std::string, double> tolerances;  // overrides for `verify`
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

}  // namespace twistdh
