#pragma once

#include <string_view>
#include <vector>

#include "momentlab/seminorm.hpp"

namespace momentlab {

enum class TraceMethod { OrthonormalSum, OperatorTrace };

std::string_view to_string(TraceMethod m);

struct TraceReport {
  ExtendedReal value;
  /// Complete q-orthonormal system the sum was taken over (empty columns
  /// when the trace is infinite).
  Matrix witness_basis;
  TraceMethod method = TraceMethod::OrthonormalSum;
};

/// tr(p/q) = sum of p(e)^2 over a complete q-orthonormal system.  Infinite
/// when ker(q) is not contained in ker(p).  The operator route is computed
/// alongside and must agree to 1e-9 relative.
TraceReport trace(const GramForm& p, const GramForm& q);

/// Same value via trace(G_q^+ G_p) on the range of q; infinite under the
/// same kernel condition.
ExtendedReal operator_trace(const GramForm& p, const GramForm& q);

/// Sum of p(e)^2 over the columns of a given system.
double orthonormal_sum(const GramForm& p, const Matrix& system);

/// tr(eps p / delta q) against (eps/delta)^2 tr(p/q).
bool trace_scaling_check(const GramForm& p, const GramForm& q, double eps, double delta);

/// Both forms restricted to span(W) in a Euclidean-orthonormal basis; the
/// restricted trace must not exceed the full one (1e-9 slack).
bool trace_restriction_check(const GramForm& p, const GramForm& q, const std::vector<Vector>& w);

/// p^2 <= tr(p/q) q^2, via the largest generalized eigenvalue.
bool dominance_check(const GramForm& p, const GramForm& q);

struct SeminormTower {
  Eigen::Index dim = 0;
  std::vector<GramForm> forms;
};

/// Diagonal forms with entries n^(2k), k = 1..levels.
SeminormTower nuclear_tower(Eigen::Index dim, int levels);

}  // namespace momentlab
