#include "momentlab/serialize.hpp"

#include <cmath>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& why) { raise(ErrorKind::Config, what + ": " + why); }

Json coords_json(const SubalgebraIndex& s) { return Json(s); }

}  // namespace

Json number_json(double v) { return std::isfinite(v) ? Json(v) : Json("infinite"); }

Json to_json(const ExtendedReal& v) { return v.is_finite() ? Json(v.value()) : Json("infinite"); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

Json to_json(const DiscreteMeasure& nu) {
  Json atoms = Json::array();
  for (const Vector& a : nu.atoms()) atoms.push_back(to_json(a));
  return {{"atoms", atoms}, {"weights", nu.weights()}};
}

Json to_json(const AlgebraElement& a) {
  Json out = Json::array();
  for (const auto& [alpha, c] : a.terms()) out.push_back({{"alpha", alpha}, {"c", c}});
  return out;
}

Json to_json(const TraceReport& r) { return {{"value", to_json(r.value)}, {"method", std::string(to_string(r.method))}}; }

Json to_json(const McEstimate& e) {
  return {{"estimate", number_json(e.estimate)}, {"stderr", number_json(e.std_error)}, {"samples", e.samples},
          {"seed", e.seed}};
}

Json to_json(const SolverResult& r) {
  Json out = to_json(r.measure);
  out["residual"] = number_json(r.residual);
  out["rank_profile"] = {r.rank_profile.first, r.rank_profile.second};
  return out;
}

Json to_json(const FundamentalLemmaReport& r) {
  return {{"hypothesis_value", to_json(r.hypothesis_value)},
          {"certified", r.certified},
          {"trace", number_json(r.trace)},
          {"mass", number_json(r.mass)},
          {"bound", number_json(r.bound)},
          {"holds", r.holds},
          {"eps", r.eps},
          {"delta", r.delta}};
}

Json to_json(const ConsistencyReport& r) {
  return {{"consistent", r.consistent}, {"pairs_checked", r.pairs_checked}, {"max_mismatch", number_json(r.max_mismatch)}};
}

Json to_json(const ConcentrationReport& r) {
  Json slices = Json::array();
  for (const auto& s : r.slices)
    slices.push_back({{"coords", coords_json(s.coords)},
                      {"chebyshev", number_json(s.chebyshev)},
                      {"union_mass", number_json(s.union_mass)},
                      {"certified", s.certified}});
  return {{"mode", r.mode},       {"eps", r.eps},       {"delta", r.delta},
          {"certified", r.certified}, {"status", r.status}, {"probes", r.probes},
          {"max_probe_tail", number_json(r.max_probe_tail)}, {"falsified", r.falsified},
          {"exact", r.exact},     {"slices", slices}};
}

Json to_json(const EquivalenceReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases)
    cases.push_back({{"eps", c.eps},
                     {"delta", c.delta},
                     {"delta_certified", c.delta_certified},
                     {"gamma", c.gamma},
                     {"gamma_ok", c.gamma_ok},
                     {"converse_ok", c.converse_ok}});
  return {{"holds", r.holds}, {"cases", cases}, {"kernel_probes", r.kernel_probes}, {"kernel_ok", r.kernel_ok}};
}

Json to_json(const ProkhorovReport& r) {
  Json slices = Json::array();
  for (const auto& s : r.slices) slices.push_back({{"coords", coords_json(s.coords)}, {"mass", number_json(s.mass)}});
  return {{"eps", r.eps},
          {"delta", r.delta},
          {"trace", number_json(r.trace)},
          {"trace_identity", number_json(r.trace_identity)},
          {"identity_ok", r.identity_ok},
          {"slices", slices},
          {"min_mass", number_json(r.min_mass)},
          {"bound", number_json(r.bound)},
          {"mass_ok", r.mass_ok},
          {"nesting_ok", r.nesting_ok},
          {"nesting_pairs", r.nesting_pairs},
          {"passed", r.passed}};
}

Json to_json(const CarlemanDiagnostic& d) {
  Json terms = Json::array(), sums = Json::array();
  for (double t : d.terms) terms.push_back(number_json(t));
  for (double s : d.partial_sums) sums.push_back(number_json(s));
  Json out = {{"terms", terms},
              {"partial_sums", sums},
              {"fitted_decay_exponent", number_json(d.fitted_decay_exponent)},
              {"margin", d.margin},
              {"verdict", std::string(to_string(d.verdict))},
              {"tail_model", std::string(d.tail_model)}};
  if (d.verdict == CarlemanVerdict::ConvergentLikely) out["extrapolated_sum"] = number_json(d.extrapolated_sum);
  return out;
}

Json to_json(const TildeTraceReport& r) {
  Json traces = Json::array();
  for (double t : r.traces) traces.push_back(number_json(t));
  return {{"formula", number_json(r.formula)},
          {"direct", number_json(r.direct)},
          {"direct_sorted", number_json(r.direct_sorted)},
          {"traces", traces},
          {"truncation", r.truncation},
          {"agree", r.agree}};
}

double number_from_json(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what, "number is not finite");
  return v;
}

std::vector<double> numbers_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  const auto xs = numbers_from_json(j, what);
  if (xs.empty()) bad(what, "vector is empty");
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "expected a nonempty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row = vector_from_json(j[static_cast<std::size_t>(i)], what + "[" + std::to_string(i) + "]");
    if (i == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) bad(what, "rows have different lengths");
    m.row(i) = row.transpose();
  }
  return m;
}

Matrix columns_from_json(const Json& j, const std::string& what) { return matrix_from_json(j, what).transpose(); }

GramForm gram_from_json(const Json& j, const std::string& what) {
  const Matrix m = matrix_from_json(j, what);
  if (m.rows() != m.cols()) bad(what, "Gram matrix must be square");
  return GramForm(m);
}

DiscreteMeasure measure_from_json(const Json& j, const std::string& what) {
  if (!j.is_object()) bad(what, "expected {\"atoms\": ..., \"weights\": ...}");
  for (const auto& [key, _] : j.items())
    if (key != "atoms" && key != "weights") bad(what, "unknown field '" + key + "'");
  if (!j.contains("atoms") || !j.contains("weights")) bad(what, "needs both 'atoms' and 'weights'");
  const Matrix atoms = matrix_from_json(j["atoms"], what + ".atoms");
  const auto weights = numbers_from_json(j["weights"], what + ".weights");
  std::vector<Vector> list;
  for (Eigen::Index i = 0; i < atoms.rows(); ++i) list.push_back(atoms.row(i).transpose());
  try {
    return DiscreteMeasure(std::move(list), weights);
  } catch (const Error& e) {
    bad(what, e.what());
  }
}

AlgebraElement element_from_json(const Json& j, int dim, int max_degree, const std::string& what) {
  if (!j.is_array()) bad(what, "expected a list of {\"alpha\": [...], \"c\": x} terms");
  AlgebraElement out(dim, max_degree);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = what + "[" + std::to_string(i) + "]";
    const Json& t = j[i];
    if (!t.is_object() || !t.contains("alpha") || !t.contains("c") || t.size() != 2)
      bad(at, "expected exactly the fields 'alpha' and 'c'");
    const auto raw = numbers_from_json(t["alpha"], at + ".alpha");
    if (static_cast<int>(raw.size()) != dim) bad(at, "alpha must have " + std::to_string(dim) + " entries");
    MultiIndex alpha;
    for (double a : raw) {
      if (a < 0 || a != std::floor(a)) bad(at, "alpha entries must be nonnegative integers");
      alpha.push_back(static_cast<int>(a));
    }
    if (degree(alpha) > max_degree) bad(at, "term degree exceeds " + std::to_string(max_degree));
    out.add_to(alpha, number_from_json(t["c"], at + ".c"));
  }
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  return out + "\r\n";
}

std::string csv_number(double v) { return std::isfinite(v) ? Json(v).dump() : std::string("infinite"); }

}  // namespace momentlab
