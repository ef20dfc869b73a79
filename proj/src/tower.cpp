#include "momentlab/tower.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "momentlab/errors.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

namespace {

Matrix level_basis(const GramForm& p, const GramForm& q) {
  const OrthonormalSystem e = simultaneous_diagonalize(p, q);
  const Matrix k = q.kernel();
  Matrix basis(q.dim(), e.size() + k.cols());
  basis << e.vectors, k;
  return basis;
}

void visit_tuples(int n, int d, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == d) {
    f(cur);
    return;
  }
  for (int i = 0; i < n; ++i) {
    cur.push_back(i);
    visit_tuples(n, d, cur, f);
    cur.pop_back();
  }
}

}  // namespace

GradedSeminormTower::GradedSeminormTower(std::vector<GramForm> p_forms, std::vector<GramForm> q_forms,
                                         Vector lambda, Vector eta, std::vector<double> constants)
    : p_forms_(std::move(p_forms)),
      q_forms_(std::move(q_forms)),
      lambda_(std::move(lambda)),
      eta_(std::move(eta)),
      constants_(std::move(constants)) {
  const std::size_t big_d = p_forms_.size();
  require(big_d >= 1, ErrorKind::InvalidArgument, "tower needs at least one level");
  require(q_forms_.size() == big_d && constants_.size() == big_d, ErrorKind::DimensionMismatch,
          "tower levels disagree in count");
  require(lambda_.size() == static_cast<Eigen::Index>(big_d + 1) &&
              eta_.size() == static_cast<Eigen::Index>(big_d + 1),
          ErrorKind::DimensionMismatch, "weights must be indexed 0..D");
  require((lambda_.array() > 0).all() && (eta_.array() > 0).all(), ErrorKind::InvalidArgument,
          "tower weights must be positive");
  dim_ = static_cast<int>(p_forms_.front().dim());
  for (std::size_t i = 0; i < big_d; ++i) {
    require(p_forms_[i].dim() == dim_ && q_forms_[i].dim() == dim_, ErrorKind::DimensionMismatch,
            "tower forms differ in dimension");
    require(std::isfinite(constants_[i]) && constants_[i] >= 0, ErrorKind::InvalidArgument,
            "tower constants must be finite and nonnegative");
    const Matrix basis = level_basis(p_forms_[i], q_forms_[i]);
    p_frames_.push_back(GradedFrame::from_basis(basis, p_forms_[i]));
    q_frames_.push_back(GradedFrame::from_basis(basis, q_forms_[i]));
  }
}

GradedSeminormTower GradedSeminormTower::for_functional(const MomentFunctional& l, std::vector<GramForm> p_forms,
                                                        std::vector<GramForm> q_forms, Vector lambda,
                                                        Vector eta) {
  // Build once with placeholder constants to get the level frames.
  GradedSeminormTower t(p_forms, q_forms, lambda, eta, std::vector<double>(p_forms.size(), 0.0));
  std::vector<double> c;
  for (int d = 1; d <= t.max_degree(); ++d) {
    const auto cd = square_continuity_constant(l, t.p_form(d), d, t.p_frame(d));
    require(cd.is_finite(), ErrorKind::NotContinuous,
            "L is not continuous for p_" + std::to_string(2 * d) + " at degree " + std::to_string(d));
    c.push_back(cd.value());
  }
  t.constants_ = std::move(c);
  return t;
}

double GradedSeminormTower::lambda_tail() const { return lambda_.array().square().inverse().sum(); }

double p_tilde(const GradedSeminormTower& t, const AlgebraElement& a) {
  require(a.dim() == t.dim(), ErrorKind::DimensionMismatch, "element dimension differs from tower");
  require(a.degree() <= t.max_degree(), ErrorKind::DegreeOverflow, "element exceeds tower truncation");
  const double a0 = a.coefficient(MultiIndex(static_cast<std::size_t>(t.dim()), 0));
  double s = t.lambda()(0) * t.lambda()(0) * a0 * a0;
  for (int d = 1; d <= t.max_degree(); ++d) {
    const double g = graded_norm(t.p_frame(d), d, a.homogeneous_part(d));
    s += t.lambda()(d) * t.lambda()(d) * t.constant(d) * g * g;
  }
  return std::sqrt(s);
}

double q_tilde(const GradedSeminormTower& t, const AlgebraElement& a) {
  require(a.dim() == t.dim(), ErrorKind::DimensionMismatch, "element dimension differs from tower");
  require(a.degree() <= t.max_degree(), ErrorKind::DegreeOverflow, "element exceeds tower truncation");
  const double a0 = a.coefficient(MultiIndex(static_cast<std::size_t>(t.dim()), 0));
  double s = t.eta()(0) * t.eta()(0) * a0 * a0;
  for (int d = 1; d <= t.max_degree(); ++d) {
    const double g = graded_norm(t.q_frame(d), d, a.homogeneous_part(d));
    s += t.eta()(d) * t.eta()(d) * g * g;
  }
  return std::sqrt(s);
}

TildeTraceReport tilde_trace_identity(const GradedSeminormTower& t) {
  const int big_d = t.max_degree();
  const int n = t.dim();
  TildeTraceReport r;
  r.truncation = big_d;
  const double ratio0 = t.lambda()(0) / t.eta()(0);
  r.formula = ratio0 * ratio0;
  for (int d = 1; d <= big_d; ++d) {
    const auto tr = trace(t.p_form(d), t.q_form(d)).value;
    require(tr.is_finite(), ErrorKind::InfiniteTrace, "tr(p_" + std::to_string(2 * d) + "/q) is infinite");
    r.traces.push_back(tr.value());
    const double ratio = t.lambda()(d) / t.eta()(d);
    r.formula += ratio * ratio * t.constant(d) * std::pow(tr.value(), d);
  }

  // Degree 0: the element 1/eta_0.
  const AlgebraElement unit = AlgebraElement::constant(n, big_d, 1.0 / t.eta()(0));
  const double p0 = p_tilde(t, unit);
  r.direct = r.direct_sorted = p0 * p0;
  for (int d = 1; d <= big_d; ++d) {
    const int m = static_cast<int>(t.q_rank(d));
    const Matrix& basis = t.q_frame(d).basis;
    std::vector<int> cur;
    visit_tuples(m, d, cur, [&](const std::vector<int>& idx) {
      AlgebraElement e = AlgebraElement::constant(n, big_d, 1.0 / t.eta()(d));
      for (int i : idx) e = e * AlgebraElement::linear(big_d, basis.col(i));
      const double v = p_tilde(t, e);
      r.direct += v * v;
      if (std::is_sorted(idx.begin(), idx.end())) r.direct_sorted += v * v;
    });
  }
  r.agree = std::abs(r.formula - r.direct) <= 1e-8 * std::max(1.0, std::abs(r.formula));
  return r;
}

}  // namespace momentlab
