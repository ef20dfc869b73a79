#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "momentlab/algebra.hpp"
#include "momentlab/carleman.hpp"
#include "momentlab/concentration.hpp"
#include "momentlab/gaussian.hpp"
#include "momentlab/measure.hpp"
#include "momentlab/solver.hpp"
#include "momentlab/tower.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

using Json = nlohmann::json;

// Writers.  Non-finite doubles and infinite ExtendedReals become the string
// "infinite" so reports stay valid JSON.
Json number_json(double v);
Json to_json(const ExtendedReal& v);
Json to_json(const Vector& v);
/// Row-major: a list of rows.
Json to_json(const Matrix& m);
Json to_json(const DiscreteMeasure& nu);
/// [{"alpha": [...], "c": x}, ...] in graded-lex order.
Json to_json(const AlgebraElement& a);
Json to_json(const TraceReport& r);
Json to_json(const McEstimate& e);
Json to_json(const SolverResult& r);
Json to_json(const FundamentalLemmaReport& r);
Json to_json(const ConsistencyReport& r);
Json to_json(const ConcentrationReport& r);
Json to_json(const EquivalenceReport& r);
Json to_json(const ProkhorovReport& r);
Json to_json(const CarlemanDiagnostic& d);
Json to_json(const TildeTraceReport& r);

// Readers.  Malformed input raises ErrorKind::Config naming `what`.
double number_from_json(const Json& j, const std::string& what);
std::vector<double> numbers_from_json(const Json& j, const std::string& what);
Vector vector_from_json(const Json& j, const std::string& what);
Matrix matrix_from_json(const Json& j, const std::string& what);
/// A list of vectors of equal length, as columns.
Matrix columns_from_json(const Json& j, const std::string& what);
GramForm gram_from_json(const Json& j, const std::string& what);
/// {"atoms": [[...], ...], "weights": [...]}.
DiscreteMeasure measure_from_json(const Json& j, const std::string& what);
AlgebraElement element_from_json(const Json& j, int dim, int max_degree, const std::string& what);

/// One RFC 4180 record (CRLF-terminated); fields with commas, quotes or
/// line breaks are quoted.
std::string csv_row(const std::vector<std::string>& fields);
/// Shortest decimal that round-trips, as in the JSON reports.
std::string csv_number(double v);

}  // namespace momentlab
