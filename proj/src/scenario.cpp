#include "momentlab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "momentlab/carleman.hpp"
#include "momentlab/concentration.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/gaussian.hpp"
#include "momentlab/scenario_pipeline.hpp"
#include "momentlab/tower.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

namespace fs = std::filesystem;

namespace {

constexpr double kConstructQTol = 1e-10;
constexpr double kCarlemanSumTol = 1e-9;

using F = FieldType;

std::string type_name(FieldType t) {
  switch (t) {
    case F::Number: return "number";
    case F::Integer: return "integer";
    case F::String: return "string";
    case F::Vector: return "list of numbers";
    case F::Matrix: return "matrix (list of rows)";
    case F::MatrixList: return "list of matrices";
    case F::Measure: return "measure {atoms, weights}";
    case F::Elements: return "list of polynomials";
    case F::Family: return "list of {coords, atoms, weights}";
    case F::PairList: return "list of [eps, delta] pairs";
  }
  return "?";
}

bool numeric_list(const Json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_number(); });
}

bool matrix_like(const Json& j) {
  return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), numeric_list);
}

bool type_matches(FieldType t, const Json& j) {
  switch (t) {
    case F::Number: return j.is_number();
    case F::Integer: return j.is_number_integer() && j.get<long long>() >= 0;
    case F::String: return j.is_string();
    case F::Vector: return numeric_list(j);
    case F::Matrix: return matrix_like(j);
    case F::MatrixList: return j.is_array() && std::all_of(j.begin(), j.end(), matrix_like);
    case F::Measure: return j.is_object();
    case F::Elements: return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_array(); });
    case F::Family: return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_object(); });
    case F::PairList:
      return j.is_array() &&
             std::all_of(j.begin(), j.end(), [](const Json& e) { return numeric_list(e) && e.size() == 2; });
  }
  return false;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

const KindSpec* find_kind(const std::string& kind) {
  for (const auto& k : scenario_kinds())
    if (k.kind == kind) return &k;
  return nullptr;
}

// Parameter access for execution; validation has already run.
struct Params {
  const Json& j;

  bool has(const std::string& k) const { return j.contains(k); }
  std::string at(const std::string& k) const { return "parameters." + k; }
  double number(const std::string& k, double fallback) const {
    return has(k) ? number_from_json(j[k], at(k)) : fallback;
  }
  double number(const std::string& k) const {
    if (!has(k)) raise(ErrorKind::Config, at(k) + ": missing");
    return number_from_json(j[k], at(k));
  }
  long long integer(const std::string& k, long long fallback) const {
    return has(k) ? j[k].get<long long>() : fallback;
  }
  GramForm gram(const std::string& k) const { return gram_from_json(j[k], at(k)); }
  Vector vec(const std::string& k) const { return vector_from_json(j[k], at(k)); }
  std::vector<double> numbers(const std::string& k) const { return numbers_from_json(j[k], at(k)); }
  DiscreteMeasure measure(const std::string& k) const { return measure_from_json(j[k], at(k)); }
  std::vector<GramForm> grams(const std::string& k) const {
    std::vector<GramForm> out;
    for (std::size_t i = 0; i < j[k].size(); ++i)
      out.push_back(gram_from_json(j[k][i], at(k) + "[" + std::to_string(i) + "]"));
    return out;
  }
};

struct Builder {
  Json results = Json::object();
  Json assertions = Json::array();
  bool passed = true;
  std::vector<std::pair<std::string, std::string>> tables;

  void check(const std::string& name, bool ok) {
    assertions.push_back({{"name", name}, {"passed", ok}});
    passed = passed && ok;
  }
};

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

void run_trace(const Params& p, Builder& b) {
  const GramForm gp = p.gram("p"), gq = p.gram("q");
  require(gp.dim() == gq.dim(), ErrorKind::DimensionMismatch, "p and q differ in dimension");
  const auto tr = trace(gp, gq);
  b.results = to_json(tr);
  if (tr.value.is_infinite()) return;
  const double eps = p.number("eps", 1.0), delta = p.number("delta", 1.0);
  require(eps > 0 && delta > 0, ErrorKind::InvalidArgument, "eps and delta must be positive");
  b.results["scaled"] = {{"eps", eps}, {"delta", delta}, {"value", to_json(trace(gp.scaled(eps), gq.scaled(delta)).value)}};
  b.check("dominance", dominance_check(gp, gq));
  b.check("scaling", trace_scaling_check(gp, gq, eps, delta));
  if (p.has("subspace")) {
    const Matrix w = columns_from_json(p.j["subspace"], p.at("subspace"));
    std::vector<Vector> ws;
    for (Eigen::Index i = 0; i < w.cols(); ++i) ws.push_back(w.col(i));
    b.check("restriction", trace_restriction_check(gp, gq, ws));
  }
}

void run_gaussian(const Params& p, Builder& b, std::uint64_t seed) {
  const GaussianMeasure g(p.gram("q"));
  McConfig cfg;
  cfg.seed = seed;
  cfg.samples = static_cast<std::uint64_t>(p.integer("samples", 100000));
  cfg.streams = static_cast<std::uint32_t>(p.integer("streams", 8));
  require(cfg.samples > 1 && cfg.streams >= 1, ErrorKind::InvalidArgument, "need samples > 1 and streams >= 1");
  std::string csv = csv_row({"check", "estimate", "stderr", "bound"});
  if (p.has("w")) {
    const auto r = second_moment_check(g, p.vec("w"), cfg);
    b.results["second_moment"] = {{"mc", to_json(r.mc)}, {"exact", r.exact}, {"identity_error", number_json(r.identity_error)}, {"within", r.within}};
    b.check("second_moment_within_4se", r.within);
    csv += csv_row({"second_moment", csv_number(r.mc.estimate), csv_number(r.mc.std_error), csv_number(r.exact)});
  }
  if (p.has("functional")) {
    try {
      const auto r = tail_lower_bound_check(g, DualFunctional{p.vec("functional")});
      b.results["tail"] = {{"dual_norm", r.dual_norm}, {"exact", r.exact}, {"bound", r.bound}, {"ok", r.ok}, {"in_scope", true}};
      b.check("tail_lower_bound", r.ok);
      csv += csv_row({"tail", csv_number(r.exact), "0", csv_number(r.bound)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotInScope) throw;
      b.results["tail"] = {{"in_scope", false}, {"reason", e.what()}};
    }
  }
  if (p.has("p")) {
    const auto r = chebyshev_outside_ball(g, p.gram("p"), p.number("delta"), cfg);
    b.results["outside_ball"] = {{"mc", to_json(r.mc)}, {"bound", number_json(r.bound)}, {"ok", r.ok}};
    b.check("chebyshev_outside_ball", r.ok);
    csv += csv_row({"outside_ball", csv_number(r.mc.estimate), csv_number(r.mc.std_error), csv_number(r.bound)});
  }
  b.tables.emplace_back("gaussian.csv", csv);
}

void run_fundamental_lemma(const Params& p, Builder& b) {
  const auto r = fundamental_lemma_check(p.measure("mu"), p.gram("p"), p.gram("q"), p.number("eps"), p.number("delta"));
  b.results = to_json(r);
  // Without a certified hypothesis the conclusion is reported, not asserted.
  if (r.certified) b.check("conclusion", r.holds);
}

MeasureFamily family_from(const Params& p, int n) {
  if (p.has("measure")) {
    const auto nu = p.measure("measure");
    require(nu.dim() == n, ErrorKind::DimensionMismatch, "measure and p differ in dimension");
    return marginal_family(nu, coordinate_lattice(n));
  }
  MeasureFamily fam;
  const Json& list = p.j["family"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = p.at("family") + "[" + std::to_string(i) + "]";
    const Json& e = list[i];
    if (!e.contains("coords")) raise(ErrorKind::Config, at + ": missing 'coords'");
    const auto raw = numbers_from_json(e["coords"], at + ".coords");
    SubalgebraIndex s;
    for (double c : raw) {
      if (c < 0 || c >= n || c != std::floor(c)) raise(ErrorKind::Config, at + ".coords: not a coordinate of R^" + std::to_string(n));
      s.push_back(static_cast<int>(c));
    }
    if (s.empty() || !std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
      raise(ErrorKind::Config, at + ".coords: must be nonempty, strictly increasing");
    Json m = e;
    m.erase("coords");
    if (!fam.emplace(s, measure_from_json(m, at)).second) raise(ErrorKind::Config, at + ": duplicate coords");
  }
  return fam;
}

std::string coords_text(const SubalgebraIndex& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

void run_concentration(const Params& p, Builder& b, std::uint64_t seed) {
  const GramForm gp = p.gram("p");
  const MeasureFamily fam = family_from(p, static_cast<int>(gp.dim()));
  const auto r = concentration_check(fam, gp, p.number("eps"), p.number("delta"),
                                     static_cast<int>(p.integer("probes", 64)), seed);
  b.results["concentration"] = to_json(r);
  b.results["consistency"] = to_json(consistency_check(fam));
  b.check("certified", r.certified);
  std::string csv = csv_row({"coords", "chebyshev", "union_mass", "certified"});
  for (const auto& s : r.slices)
    csv += csv_row({coords_text(s.coords), csv_number(s.chebyshev), csv_number(s.union_mass), s.certified ? "true" : "false"});
  b.tables.emplace_back("slices.csv", csv);
  if (p.has("grid")) {
    std::vector<std::pair<double, double>> grid;
    for (const auto& e : p.j["grid"]) grid.emplace_back(e[0].get<double>(), e[1].get<double>());
    const auto eq = concentration_equivalence_check(fam, gp, grid);
    b.results["equivalence"] = to_json(eq);
    b.check("equivalence", eq.holds);
  }
}

void run_main_theorem(const Params& p, Builder& b, std::uint64_t seed) {
  const auto nu = p.measure("measure");
  const GramForm q = p.gram("q");
  const int n = static_cast<int>(nu.dim());
  QuadraticModuleSpec module;
  if (p.has("generators")) {
    const Json& gens = p.j["generators"];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      // Degree is the largest total degree among the terms.
      int max_deg = 0;
      for (const auto& t : gens[i])
        if (t.is_object() && t.contains("alpha") && numeric_list(t["alpha"])) {
          int d = 0;
          for (const auto& a : t["alpha"]) d += static_cast<int>(a.get<double>());
          max_deg = std::max(max_deg, d);
        }
      module.generators.push_back(
          element_from_json(gens[i], n, max_deg, p.at("generators") + "[" + std::to_string(i) + "]"));
    }
  }
  MainTheoremInput in{nu, q, module};
  in.degree = static_cast<int>(p.integer("degree", 2));
  if (p.has("eps_grid")) in.eps_grid = p.numbers("eps_grid");
  in.probe_budget = static_cast<int>(p.integer("probes", 16));
  in.seed = seed;
  const auto report = verify_main_theorem_scenario(in);
  b.results = to_json(report);
  std::string csv = csv_row({"stage", "status"});
  for (const auto& s : report.stages) {
    b.check(s.name, s.status == "pass");
    csv += csv_row({s.name, s.status});
  }
  b.tables.emplace_back("stages.csv", csv);
}

void run_carleman(const Params& p, Builder& b) {
  const int n_terms = static_cast<int>(p.integer("terms", 200));
  const double margin = p.number("margin", 0.1);
  CarlemanDiagnostic d;
  if (p.has("log_moments")) {
    d = carleman_from_log_moments(p.numbers("log_moments"), margin);
  } else {
    if (!p.has("v")) raise(ErrorKind::Config, p.at("v") + ": required with 'measure' or 'gaussian_dim'");
    const Vector v = p.vec("v");
    if (p.has("measure")) {
      d = carleman_diagnostic(MomentFunctional::from_measure(p.measure("measure"), 2), v, n_terms, margin);
    } else {
      const long long dim = p.integer("gaussian_dim", 1);
      require(dim >= 1, ErrorKind::InvalidArgument, "gaussian_dim must be positive");
      d = carleman_diagnostic(MomentFunctional::gaussian(static_cast<int>(dim), 2), v, n_terms, margin);
    }
  }
  b.results = to_json(d);
  if (p.has("expect")) {
    const std::string want = p.j["expect"].get<std::string>();
    require(want == "DIVERGENT_LIKELY" || want == "CONVERGENT_LIKELY" || want == "UNDETERMINED", ErrorKind::Config,
            p.at("expect") + ": not a verdict");
    b.check("verdict", std::string(to_string(d.verdict)) == want);
  }
  if (p.has("expect_sum"))
    b.check("extrapolated_sum", d.verdict == CarlemanVerdict::ConvergentLikely &&
                                    std::abs(d.extrapolated_sum - p.number("expect_sum")) <= kCarlemanSumTol);
  std::string csv = csv_row({"n", "term", "partial_sum"});
  for (std::size_t i = 0; i < d.terms.size(); ++i)
    csv += csv_row({std::to_string(i + 1), csv_number(d.terms[i]), csv_number(d.partial_sums[i])});
  b.tables.emplace_back("terms.csv", csv);
}

void run_tilde_trace(const Params& p, Builder& b) {
  auto ps = p.grams("p_forms");
  auto qs = p.grams("q_forms");
  const Vector lambda = p.vec("lambda"), eta = p.vec("eta");
  std::optional<GradedSeminormTower> tower;
  if (p.has("measure")) {
    const auto l = MomentFunctional::from_measure(p.measure("measure"), 2 * static_cast<int>(ps.size()));
    tower.emplace(GradedSeminormTower::for_functional(l, std::move(ps), std::move(qs), lambda, eta));
  } else {
    std::vector<double> c = p.has("constants") ? p.numbers("constants") : std::vector<double>(ps.size(), 1.0);
    tower.emplace(std::move(ps), std::move(qs), lambda, eta, std::move(c));
  }
  const auto r = tilde_trace_identity(*tower);
  b.results = to_json(r);
  b.check("formula_matches_direct", r.agree);
}

void run_construct_q(const Params& p, Builder& b) {
  const GramForm gp = p.gram("p");
  const Matrix e = p.has("basis") ? columns_from_json(p.j["basis"], p.at("basis")) : gp.whitening();
  const auto lambda = p.numbers("lambda");
  const auto r = construct_q(gp, e, lambda);
  b.results = {{"q", to_json(r.q.gram())},
               {"trace", number_json(r.trace)},
               {"weight_sum_squares", number_json(r.expected)},
               {"orthonormality_error", number_json(r.orthonormality_error)}};
  b.check("trace_identity", r.trace_ok);
  b.check("q_orthonormal", r.orthonormal_ok);
}

Json tolerances() {
  return {{"psd", GramForm::kDefaultPsdTol},  {"trace_agreement", 1e-9},      {"flat_rank", kFlatRankTol},
          {"construct_q", kConstructQTol},    {"carleman_sum", kCarlemanSumTol}, {"mc_standard_errors", 4}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) raise(ErrorKind::Io, "failed writing " + path.string());
}

std::optional<Json> load_config(const std::string& path, std::ostream& err) {
  try {
    return Json::parse(read_file(path));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Json::parse_error& e) {
    err << "error: " << path << " is not valid JSON: " << e.what() << "\n";
  }
  return std::nullopt;
}

}  // namespace

const std::vector<KindSpec>& scenario_kinds() {
  static const std::vector<KindSpec> kinds = {
      {"trace",
       "tr(p/q) with dominance, scaling and restriction checks",
       {{"p", F::Matrix, true, "Gram matrix of p"},
        {"q", F::Matrix, true, "Gram matrix of q"},
        {"eps", F::Number, false, "scaling factor for p (default 1)"},
        {"delta", F::Number, false, "scaling factor for q (default 1)"},
        {"subspace", F::Matrix, false, "vectors spanning W for the restriction check"}},
       {}},
      {"gaussian",
       "Gaussian measure of q: second moment, exact tail, mass outside a p-ball",
       {{"q", F::Matrix, true, "Gram matrix of q (trivial kernel)"},
        {"w", F::Vector, false, "direction for the second-moment check"},
        {"functional", F::Vector, false, "coefficients of l for the tail bound"},
        {"p", F::Matrix, false, "Gram matrix of p for the ball estimate"},
        {"delta", F::Number, false, "ball radius (required with p)"},
        {"samples", F::Integer, false, "Monte-Carlo samples (default 100000)"},
        {"streams", F::Integer, false, "independent blocks (default 8)"}},
       {}},
      {"fundamental_lemma",
       "mu(B_1(q')) >= 1 - 7(eps + tr(p/delta q)) under a certified hypothesis",
       {{"mu", F::Measure, true, "measure on functionals"},
        {"p", F::Matrix, true, "Gram matrix of p"},
        {"q", F::Matrix, true, "Gram matrix of q"},
        {"eps", F::Number, true, "eps"},
        {"delta", F::Number, true, "delta"}},
       {}},
      {"concentration",
       "p-concentration of a family of measures, with optional equivalence grid",
       {{"p", F::Matrix, true, "Gram matrix of p"},
        {"eps", F::Number, true, "eps"},
        {"delta", F::Number, true, "delta"},
        {"family", F::Family, false, "measures nu_S with their coordinates"},
        {"measure", F::Measure, false, "global measure; marginals on every coordinate subset"},
        {"probes", F::Integer, false, "random falsification probes per subset (default 64)"},
        {"grid", F::PairList, false, "(eps, delta) pairs for the equivalence check"}},
       {{"family", "measure"}}},
      {"main_theorem",
       "nine-stage check from a measure to its concentrated marginals",
       {{"measure", F::Measure, true, "target measure on R^n"},
        {"q", F::Matrix, true, "Gram matrix of q"},
        {"generators", F::Elements, false, "generators g_i of the quadratic module"},
        {"degree", F::Integer, false, "half the truncation degree of L (default 2)"},
        {"eps_grid", F::Vector, false, "eps values (default [0.01, 0.05, 0.1])"},
        {"probes", F::Integer, false, "random probes per subset (default 16)"}},
       {}},
      {"carleman",
       "Carleman series diagnostic",
       {{"measure", F::Measure, false, "source measure"},
        {"gaussian_dim", F::Integer, false, "standard Gaussian on R^n"},
        {"log_moments", F::Vector, false, "log L(v^2n), n = 1..N"},
        {"v", F::Vector, false, "direction (with measure or gaussian_dim)"},
        {"terms", F::Integer, false, "number of terms N (default 200)"},
        {"margin", F::Number, false, "slope margin (default 0.1)"},
        {"expect", F::String, false, "expected verdict"},
        {"expect_sum", F::Number, false, "expected extrapolated sum"}},
       {{"measure", "gaussian_dim", "log_moments"}}},
      {"tilde_trace",
       "trace of the graded tower seminorms: formula against direct sum",
       {{"p_forms", F::MatrixList, true, "Gram matrices of p_2, ..., p_2D"},
        {"q_forms", F::MatrixList, true, "Gram matrices of q_2, ..., q_2D"},
        {"lambda", F::Vector, true, "weights lambda_0..lambda_D"},
        {"eta", F::Vector, true, "weights eta_0..eta_D"},
        {"constants", F::Vector, false, "constants C_1..C_D (default 1)"},
        {"measure", F::Measure, false, "derive the constants from this measure"}},
       {}},
      {"construct_q",
       "q from a complete p-orthonormal system and weights, tr(p/q) = sum lambda^2",
       {{"p", F::Matrix, true, "Gram matrix of p"},
        {"basis", F::Matrix, false, "p-orthonormal vectors (default: whitening of p)"},
        {"lambda", F::Vector, true, "positive weights, one per vector"}},
       {}},
  };
  return kinds;
}

std::string nearest_kind(const std::string& kind) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& k : scenario_kinds()) {
    const std::size_t d = edit_distance(kind, k.kind);
    if (d < best_d) {
      best_d = d;
      best = k.kind;
    }
  }
  return best;
}

std::vector<std::string> validate_config(const Json& config) {
  std::vector<std::string> out;
  if (!config.is_object()) return {"config must be a JSON object"};
  for (const auto& [key, _] : config.items())
    if (key != "kind" && key != "parameters" && key != "seed" && key != "output_path")
      out.push_back("unknown field '" + key + "'");
  if (config.contains("seed") && !type_matches(F::Integer, config["seed"]))
    out.push_back("seed: expected a nonnegative integer");
  if (config.contains("output_path") && !config["output_path"].is_string())
    out.push_back("output_path: expected a string");

  const KindSpec* spec = nullptr;
  if (!config.contains("kind")) {
    out.push_back("missing field 'kind'");
  } else if (!config["kind"].is_string()) {
    out.push_back("kind: expected a string");
  } else {
    const std::string kind = config["kind"].get<std::string>();
    spec = find_kind(kind);
    if (!spec) out.push_back("unknown kind '" + kind + "'; did you mean '" + nearest_kind(kind) + "'?");
  }
  if (!config.contains("parameters")) {
    out.push_back("missing field 'parameters'");
    return out;
  }
  const Json& params = config["parameters"];
  if (!params.is_object()) {
    out.push_back("parameters: expected an object");
    return out;
  }
  if (!spec) return out;
  for (const auto& [key, value] : params.items()) {
    const auto it = std::find_if(spec->fields.begin(), spec->fields.end(), [&](const FieldSpec& f) { return f.name == key; });
    if (it == spec->fields.end()) {
      out.push_back("parameters: unknown field '" + key + "' for kind '" + spec->kind + "'");
    } else if (!type_matches(it->type, value)) {
      out.push_back("parameters." + key + ": expected " + type_name(it->type));
    }
  }
  for (const auto& f : spec->fields)
    if (f.required && !params.contains(f.name)) out.push_back("parameters: missing required field '" + f.name + "'");
  for (const auto& group : spec->exactly_one) {
    int present = 0;
    std::string names;
    for (const auto& g : group) {
      present += params.contains(g) ? 1 : 0;
      names += (names.empty() ? "'" : ", '") + g + "'";
    }
    if (present != 1) out.push_back("parameters: exactly one of " + names + " is required");
  }
  return out;
}

ScenarioOutcome execute_scenario(const Json& config, std::optional<std::uint64_t> seed_override) {
  const auto problems = validate_config(config);
  if (!problems.empty()) raise(ErrorKind::Config, problems.front());
  const std::string kind = config["kind"].get<std::string>();
  const std::uint64_t seed = seed_override ? *seed_override : config.value("seed", std::uint64_t{0});
  const Params p{config["parameters"]};
  Builder b;
  if (kind == "trace") run_trace(p, b);
  else if (kind == "gaussian") run_gaussian(p, b, seed);
  else if (kind == "fundamental_lemma") run_fundamental_lemma(p, b);
  else if (kind == "concentration") run_concentration(p, b, seed);
  else if (kind == "main_theorem") run_main_theorem(p, b, seed);
  else if (kind == "carleman") run_carleman(p, b);
  else if (kind == "tilde_trace") run_tilde_trace(p, b);
  else run_construct_q(p, b);

  ScenarioOutcome out;
  out.passed = b.passed;
  out.tables = std::move(b.tables);
  out.report = {{"kind", kind},          {"seed", seed},       {"version", kVersion},
                {"schema_version", kSchemaVersion}, {"tolerances", tolerances()}, {"passed", b.passed},
                {"assertions", b.assertions}, {"results", b.results}};
  return out;
}

ConstructQResult construct_q(const GramForm& p, const Matrix& e, const std::vector<double>& lambda) {
  require(e.rows() == p.dim(), ErrorKind::DimensionMismatch, "basis vectors have the wrong length");
  require(static_cast<Eigen::Index>(lambda.size()) == e.cols(), ErrorKind::IncompleteSystem,
          "need one weight per basis vector");
  require(e.cols() == p.rank(), ErrorKind::IncompleteSystem,
          "system has " + std::to_string(e.cols()) + " vectors but p has rank " + std::to_string(p.rank()));
  const Matrix ortho = e.transpose() * p.gram() * e - Matrix::Identity(e.cols(), e.cols());
  require(max_abs(ortho) <= 1e-9, ErrorKind::IncompleteSystem, "system is not p-orthonormal");
  for (double l : lambda) require(l > 0 && std::isfinite(l), ErrorKind::InvalidArgument, "weights must be positive");

  const Matrix ge = p.gram() * e;
  Matrix gq = Matrix::Zero(p.dim(), p.dim());
  double expected = 0.0;
  for (Eigen::Index n = 0; n < e.cols(); ++n) {
    const double l = lambda[static_cast<std::size_t>(n)];
    gq.noalias() += (ge.col(n) * ge.col(n).transpose()) / (l * l);
    expected += l * l;
  }
  ConstructQResult r{GramForm(symmetrize(gq), p.psd_tol())};
  r.expected = expected;
  r.trace = trace(p, r.q).value.value_or(INFINITY);
  r.trace_ok = close_rel(r.trace, expected, kConstructQTol);
  Matrix scaled = e;
  for (Eigen::Index n = 0; n < e.cols(); ++n) scaled.col(n) *= lambda[static_cast<std::size_t>(n)];
  r.orthonormality_error = max_abs(scaled.transpose() * r.q.gram() * scaled - Matrix::Identity(e.cols(), e.cols()));
  r.orthonormal_ok = r.orthonormality_error < kConstructQTol;
  return r;
}

int run_command(const std::string& config_path, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const auto config = load_config(config_path, err);
  if (!config) return kExitConfig;
  const auto problems = validate_config(*config);
  if (!problems.empty()) {
    for (const auto& m : problems) err << "config error: " << m << "\n";
    return kExitConfig;
  }
  if (opts.threads) set_worker_threads(*opts.threads);

  ScenarioOutcome outcome;
  try {
    outcome = execute_scenario(*config, opts.seed);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  const fs::path dir = opts.out_dir ? fs::path(*opts.out_dir)
                                    : fs::path(config->value("output_path", std::string(".")));
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "report.json", outcome.report.dump(2) + "\n");
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    const Json meta = {{"timestamp", stamp.str()},
                       {"config", fs::absolute(config_path).string()},
                       {"threads", worker_threads()},
                       {"version", kVersion}};
    write_file(dir / "metadata.json", meta.dump(2) + "\n");
    for (const auto& [name, content] : outcome.tables) write_file(dir / name, content);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const auto& a : outcome.report["assertions"])
    if (!a["passed"].get<bool>()) err << "assertion failed: " << a["name"].get<std::string>() << "\n";
  out << (outcome.passed ? "PASS " : "FAIL ") << outcome.report["kind"].get<std::string>() << " -> "
      << (dir / "report.json").string() << "\n";
  return outcome.passed ? kExitPass : kExitAssertion;
}

int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto config = load_config(config_path, err);
  if (!config) return kExitConfig;
  const auto problems = validate_config(*config);
  if (problems.empty()) {
    out << "ok\n";
    return kExitPass;
  }
  for (const auto& m : problems) out << m << "\n";
  return kExitConfig;
}

int list_command(std::ostream& out) {
  for (const auto& k : scenario_kinds()) {
    out << k.kind << ": " << k.summary << "\n";
    for (const auto& f : k.fields)
      out << "  " << f.name << " (" << type_name(f.type) << (f.required ? ", required" : "") << ") " << f.help << "\n";
  }
  return kExitPass;
}

}  // namespace momentlab
