#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentlab/seminorm.hpp"
#include "momentlab/serialize.hpp"

namespace momentlab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitConfig = 2, kExitNumerical = 3 };

enum class FieldType { Number, Integer, String, Vector, Matrix, MatrixList, Measure, Elements, Family, PairList };

struct FieldSpec {
  std::string name;
  FieldType type;
  bool required = false;
  std::string help;
};

struct KindSpec {
  std::string kind;
  std::string summary;
  std::vector<FieldSpec> fields;
  /// Groups of fields of which exactly one must be present.
  std::vector<std::vector<std::string>> exactly_one;
};

const std::vector<KindSpec>& scenario_kinds();

/// The kind closest in edit distance.
std::string nearest_kind(const std::string& kind);

/// Schema diagnostics for a config; empty means valid.  Checks top-level
/// fields (kind, parameters, seed, output_path), unknown fields, required
/// parameters and JSON types.  Runs no numerics.
std::vector<std::string> validate_config(const Json& config);

struct ScenarioOutcome {
  Json report;
  bool passed = false;
  /// (file name, RFC 4180 content).
  std::vector<std::pair<std::string, std::string>> tables;
};

/// Executes a validated config.  Throws Error on bad parameters
/// (Config, InvalidArgument, DimensionMismatch) or numerical failures.
ScenarioOutcome execute_scenario(const Json& config, std::optional<std::uint64_t> seed_override = std::nullopt);

struct ConstructQResult {
  GramForm q;
  double trace = 0.0;
  /// Sum of lambda_n^2.
  double expected = 0.0;
  /// max |<l_m e_m, l_n e_n>_q - delta_mn|.
  double orthonormality_error = 0.0;
  bool trace_ok = false;
  bool orthonormal_ok = false;
};

/// q(v)^2 = sum_n lambda_n^-2 <v, e_n>_p^2 for a complete p-orthonormal
/// system E; then tr(p/q) = sum lambda_n^2 and {lambda_n e_n} is complete
/// q-orthonormal.  IncompleteSystem when E is not complete p-orthonormal or
/// |E| differs from |lambda|.
ConstructQResult construct_q(const GramForm& p, const Matrix& e, const std::vector<double>& lambda);

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

/// `run`: writes report.json, metadata.json and any CSV tables into the
/// output directory (--out, else the config's output_path, else ".").
int run_command(const std::string& config_path, const RunOptions& opts, std::ostream& out, std::ostream& err);
/// `validate`: prints "ok" or one diagnostic per line.
int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err);
/// `list`: every kind with its parameters.
int list_command(std::ostream& out);

}  // namespace momentlab
