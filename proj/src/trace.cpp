#include "momentlab/trace.hpp"

#include <algorithm>
#include <cmath>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

constexpr double kAgreeTol = 1e-9;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_pair(const GramForm& p, const GramForm& q) {
  require(p.dim() == q.dim(), ErrorKind::DimensionMismatch,
          "trace of forms on dimensions " + std::to_string(p.dim()) + " and " +
              std::to_string(q.dim()));
}

}  // namespace

std::string_view to_string(TraceMethod m) {
  return m == TraceMethod::OrthonormalSum ? "orthonormal_sum" : "operator_trace";
}

double orthonormal_sum(const GramForm& p, const Matrix& system) {
  require(system.rows() == p.dim(), ErrorKind::DimensionMismatch, "system has wrong length");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < system.cols(); ++j) sum += p.quadratic(system.col(j));
  return sum;
}

ExtendedReal operator_trace(const GramForm& p, const GramForm& q) {
  check_pair(p, q);
  if (!kernel_contained(q, p)) return ExtendedReal::infinity();
  if (q.rank() == q.dim()) {
    Eigen::LDLT<Matrix> ldlt(q.gram());
    if (ldlt.info() == Eigen::Success) {
      const Matrix x = ldlt.solve(p.gram());
      return ExtendedReal::finite(std::max(x.trace(), 0.0));
    }
  }
  return ExtendedReal::finite(std::max((q.pseudo_inverse() * p.gram()).trace(), 0.0));
}

TraceReport trace(const GramForm& p, const GramForm& q) {
  check_pair(p, q);
  if (!kernel_contained(q, p))
    return {ExtendedReal::infinity(), Matrix(p.dim(), 0), TraceMethod::OrthonormalSum};
  const Matrix w = q.whitening();
  const double value = orthonormal_sum(p, w);
  const double check = operator_trace(p, q).value();
  require(close_rel(value, check, kAgreeTol), ErrorKind::IllConditioned,
          "trace routes disagree: " + std::to_string(value) + " vs " + std::to_string(check));
  return {ExtendedReal::finite(value), w, TraceMethod::OrthonormalSum};
}

bool trace_scaling_check(const GramForm& p, const GramForm& q, double eps, double delta) {
  require(eps > 0 && delta > 0, ErrorKind::InvalidArgument, "eps and delta must be positive");
  const auto base = trace(p, q).value;
  require(base.is_finite(), ErrorKind::InfiniteTrace, "scaling check needs a finite trace");
  const auto scaled = trace(p.scaled(eps), q.scaled(delta)).value;
  const double expected = (eps / delta) * (eps / delta) * base.value();
  return scaled.is_finite() && close_rel(scaled.value(), expected, kAgreeTol);
}

bool trace_restriction_check(const GramForm& p, const GramForm& q, const std::vector<Vector>& w) {
  const auto full = trace(p, q).value;
  require(full.is_finite(), ErrorKind::InfiniteTrace, "restriction check needs a finite trace");
  const Matrix basis = orthonormal_span(stack_columns(w, p.dim()));
  if (basis.cols() == 0) return true;
  const auto sub = trace(p.restricted(basis), q.restricted(basis)).value;
  return sub.is_finite() && sub.value() <= full.value() + kAgreeTol * std::max(1.0, full.value());
}

bool dominance_check(const GramForm& p, const GramForm& q) {
  const auto tr = trace(p, q).value;
  require(tr.is_finite(), ErrorKind::InfiniteTrace, "dominance check needs a finite trace");
  const auto top = generalized_max_eigenvalue(p.gram(), q.gram(), q.psd_tol());
  return top.is_finite() && top.value() <= tr.value() * (1 + kAgreeTol) + kAgreeTol;
}

SeminormTower nuclear_tower(Eigen::Index dim, int levels) {
  require(dim >= 1, ErrorKind::InvalidArgument, "tower dimension must be positive");
  require(levels >= 2, ErrorKind::InvalidArgument, "tower needs at least two levels");
  SeminormTower tower{dim, {}};
  for (int k = 1; k <= levels; ++k) {
    Vector d(dim);
    for (Eigen::Index n = 0; n < dim; ++n) d(n) = std::pow(static_cast<double>(n + 1), 2 * k);
    // Entries reach N^(2k); a relative cutoff that low would push the
    // leading entries into the kernel, so the tower uses psd_tol = 0.
    tower.forms.push_back(GramForm::diagonal(d, 0.0));
  }
  return tower;
}

}  // namespace momentlab
