#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "momentlab/measure.hpp"
#include "momentlab/moment.hpp"
#include "momentlab/serialize.hpp"

namespace momentlab {

struct StageResult {
  std::string name;
  /// "pass", "fail" or "skipped".
  std::string status;
  Json data;
};

struct ScenarioReport {
  std::vector<StageResult> stages;
  bool passed = false;

  const StageResult& stage(const std::string& name) const;
};

Json to_json(const ScenarioReport& r);

struct MainTheoremInput {
  DiscreteMeasure measure;
  GramForm q;
  QuadraticModuleSpec module;
  /// L is truncated at degree 2 * degree.
  int degree = 2;
  std::vector<double> eps_grid{0.01, 0.05, 0.1};
  int probe_budget = 16;
  std::uint64_t seed = 0;
};

/// Runs the nine stages in order:
///   moment_functional, s_L_gram, trace, marginals, consistency,
///   concentration, prokhorov, support, representation.
/// A failing stage is recorded and later stages still run; a stage whose
/// inputs could not be built is "skipped".  Concentration uses p = s_L and
/// delta = sqrt(eps).
ScenarioReport verify_main_theorem_scenario(const MainTheoremInput& in);

}  // namespace momentlab
