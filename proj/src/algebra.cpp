#include "momentlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "momentlab/errors.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

AlgebraElement::AlgebraElement(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
  require(dim >= 1, ErrorKind::InvalidArgument, "algebra dimension must be positive");
  require(max_degree >= 0, ErrorKind::InvalidArgument, "truncation degree must be nonnegative");
}

AlgebraElement AlgebraElement::constant(int dim, int max_degree, double c) {
  AlgebraElement a(dim, max_degree);
  a.set(MultiIndex(static_cast<std::size_t>(dim), 0), c);
  return a;
}

AlgebraElement AlgebraElement::variable(int dim, int max_degree, int i) {
  require(i >= 0 && i < dim, ErrorKind::DimensionMismatch, "variable index out of range");
  MultiIndex alpha(static_cast<std::size_t>(dim), 0);
  alpha[static_cast<std::size_t>(i)] = 1;
  return monomial(dim, max_degree, alpha);
}

AlgebraElement AlgebraElement::monomial(int dim, int max_degree, const MultiIndex& alpha, double c) {
  AlgebraElement a(dim, max_degree);
  a.set(alpha, c);
  return a;
}

AlgebraElement AlgebraElement::linear(int max_degree, const Vector& v) {
  const int n = static_cast<int>(v.size());
  AlgebraElement a(n, max_degree);
  for (int i = 0; i < n; ++i) {
    MultiIndex alpha(static_cast<std::size_t>(n), 0);
    alpha[static_cast<std::size_t>(i)] = 1;
    a.set(alpha, v(i));
  }
  return a;
}

int AlgebraElement::degree() const { return terms_.empty() ? -1 : momentlab::degree(terms_.rbegin()->first); }

double AlgebraElement::coefficient(const MultiIndex& alpha) const {
  const auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void AlgebraElement::set(const MultiIndex& alpha, double c) {
  require(static_cast<int>(alpha.size()) == dim_, ErrorKind::DimensionMismatch,
          "multi-index length differs from dimension");
  require(std::all_of(alpha.begin(), alpha.end(), [](int k) { return k >= 0; }),
          ErrorKind::InvalidArgument, "negative exponent");
  require(momentlab::degree(alpha) <= max_degree_, ErrorKind::DegreeOverflow,
          "degree " + std::to_string(momentlab::degree(alpha)) + " exceeds truncation " +
              std::to_string(max_degree_));
  if (c == 0.0)
    terms_.erase(alpha);
  else
    terms_[alpha] = c;
}

void AlgebraElement::add_to(const MultiIndex& alpha, double c) { set(alpha, coefficient(alpha) + c); }

AlgebraElement AlgebraElement::homogeneous_part(int d) const {
  AlgebraElement out(dim_, max_degree_);
  for (const auto& [alpha, c] : terms_)
    if (momentlab::degree(alpha) == d) out.terms_.emplace(alpha, c);
  return out;
}

bool AlgebraElement::is_homogeneous(int d) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return momentlab::degree(t.first) == d; });
}

AlgebraElement AlgebraElement::with_max_degree(int d) const {
  require(degree() <= d, ErrorKind::DegreeOverflow, "element does not fit the new truncation");
  AlgebraElement out(dim_, d);
  out.terms_ = terms_;
  return out;
}

double AlgebraElement::evaluate(const Vector& point) const {
  require(point.size() == dim_, ErrorKind::DimensionMismatch, "evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double term = c;
    for (int i = 0; i < dim_; ++i)
      if (alpha[static_cast<std::size_t>(i)] > 0) term *= std::pow(point(i), alpha[static_cast<std::size_t>(i)]);
    sum += term;
  }
  return sum;
}

Vector AlgebraElement::linear_part() const {
  Vector v = Vector::Zero(dim_);
  for (const auto& [alpha, c] : terms_) {
    if (momentlab::degree(alpha) != 1) continue;
    for (int i = 0; i < dim_; ++i)
      if (alpha[static_cast<std::size_t>(i)] == 1) v(i) = c;
  }
  return v;
}

void AlgebraElement::check_compatible(const AlgebraElement& o) const {
  require(dim_ == o.dim_, ErrorKind::DimensionMismatch, "algebra elements of different dimension");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  check_compatible(o);
  for (const auto& [alpha, c] : o.terms_) add_to(alpha, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  check_compatible(o);
  for (const auto& [alpha, c] : o.terms_) add_to(alpha, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, v] : terms_) v *= c;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.check_compatible(b);
  const int top = std::max(a.max_degree_, b.max_degree_);
  require(a.degree() + b.degree() <= top || a.is_zero() || b.is_zero(), ErrorKind::DegreeOverflow,
          "product of degree " + std::to_string(a.degree() + b.degree()) + " exceeds truncation " +
              std::to_string(top));
  AlgebraElement out(a.dim_, top);
  for (const auto& [x, cx] : a.terms_)
    for (const auto& [y, cy] : b.terms_) out.terms_[add(x, y)] += cx * cy;
  std::erase_if(out.terms_, [](const auto& t) { return t.second == 0.0; });
  return out;
}

AlgebraElement AlgebraElement::pow(int k) const {
  require(k >= 0, ErrorKind::InvalidArgument, "negative power");
  AlgebraElement out = constant(dim_, max_degree_, 1.0);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

double AlgebraElement::distance(const AlgebraElement& o) const {
  check_compatible(o);
  double d = 0.0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, std::abs(c - o.coefficient(alpha)));
  for (const auto& [alpha, c] : o.terms_)
    if (!terms_.count(alpha)) d = std::max(d, std::abs(c));
  return d;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }

double evaluate_character(const Character& alpha, const AlgebraElement& a) { return a.evaluate(alpha.point); }

AlgebraElement substitute_linear(const AlgebraElement& a, const Matrix& m) {
  const int n = a.dim();
  require(m.rows() == n && m.cols() == n, ErrorKind::DimensionMismatch, "substitution matrix has wrong shape");
  const int top = std::max(a.degree(), 0);
  // powers[i][k] = (sum_j m(i, j) x_j)^k
  std::vector<std::vector<AlgebraElement>> powers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const AlgebraElement li = AlgebraElement::linear(a.max_degree(), m.row(i).transpose());
    auto& row = powers[static_cast<std::size_t>(i)];
    row.push_back(AlgebraElement::constant(n, a.max_degree(), 1.0));
    for (int k = 1; k <= top; ++k) row.push_back(row.back() * li);
  }
  AlgebraElement out(n, a.max_degree());
  for (const auto& [alpha, c] : a.terms()) {
    AlgebraElement term = AlgebraElement::constant(n, a.max_degree(), c);
    for (int i = 0; i < n; ++i) {
      const int k = alpha[static_cast<std::size_t>(i)];
      if (k > 0) term = term * powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    out += term;
  }
  return out;
}

GradedFrame GradedFrame::from_basis(const Matrix& basis, const GramForm& s) {
  require(basis.rows() == s.dim() && basis.cols() == s.dim(), ErrorKind::DimensionMismatch,
          "frame must be a square basis");
  Eigen::FullPivLU<Matrix> lu(basis);
  require(lu.isInvertible(), ErrorKind::SingularForm, "frame vectors are linearly dependent");
  const Matrix g = basis.transpose() * s.gram() * basis;
  const double scale = std::max(1.0, max_abs(g));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      require(i == j || std::abs(g(i, j)) <= 1e-9 * scale, ErrorKind::InvalidArgument,
              "frame is not s-orthogonal");
  GradedFrame f;
  f.basis = basis;
  f.weights = Vector(basis.cols());
  const double cut = s.rank_cutoff();
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const double w = g(j, j);
    // Kernel test relative to the squared length of the frame vector.
    f.weights(j) = w <= cut * basis.col(j).squaredNorm() ? 0.0 : w;
  }
  f.subst = lu.inverse().transpose();
  return f;
}

GradedFrame GradedFrame::canonical(const GramForm& s) {
  if (s.is_diagonal()) return from_basis(Matrix::Identity(s.dim(), s.dim()), s);
  return from_basis(s.eigenvectors(), s);
}

AlgebraElement GradedFrame::to_frame(const AlgebraElement& a) const {
  require(a.dim() == dim(), ErrorKind::DimensionMismatch, "element dimension differs from frame");
  return substitute_linear(a, subst);
}

AlgebraElement GradedFrame::frame_monomial(const MultiIndex& beta, int max_degree) const {
  require(static_cast<int>(beta.size()) == dim(), ErrorKind::DimensionMismatch, "multi-index has wrong length");
  AlgebraElement out = AlgebraElement::constant(dim(), max_degree, 1.0);
  for (int j = 0; j < dim(); ++j) {
    const int k = beta[static_cast<std::size_t>(j)];
    if (k > 0) out = out * AlgebraElement::linear(max_degree, basis.col(j)).pow(k);
  }
  return out;
}

double GradedFrame::monomial_weight(const MultiIndex& beta) const {
  double w = 1.0;
  for (int j = 0; j < dim(); ++j) {
    const int k = beta[static_cast<std::size_t>(j)];
    if (k > 0) w *= std::pow(weights(j), k);
  }
  return w;
}

double graded_inner(const GradedFrame& frame, int d, const AlgebraElement& a, const AlgebraElement& b) {
  require(a.is_homogeneous(d) && b.is_homogeneous(d), ErrorKind::NotHomogeneous,
          "graded inner product needs homogeneous elements of degree " + std::to_string(d));
  const AlgebraElement fa = frame.to_frame(a);
  const AlgebraElement fb = frame.to_frame(b);
  double sum = 0.0;
  for (const auto& [beta, c] : fa.terms()) {
    const double other = fb.coefficient(beta);
    if (other != 0.0) sum += c * other * frame.monomial_weight(beta);
  }
  return sum;
}

double graded_norm(const GradedFrame& frame, int d, const AlgebraElement& a_d) {
  require(a_d.is_homogeneous(d), ErrorKind::NotHomogeneous,
          "element is not homogeneous of degree " + std::to_string(d));
  const AlgebraElement fa = frame.to_frame(a_d);
  double sum = 0.0;
  for (const auto& [beta, c] : fa.terms()) sum += c * c * frame.monomial_weight(beta);
  return std::sqrt(sum);
}

double graded_norm(const GramForm& s, int d, const AlgebraElement& a_d) {
  require(a_d.dim() == s.dim(), ErrorKind::DimensionMismatch, "element dimension differs from form");
  return graded_norm(GradedFrame::canonical(s), d, a_d);
}

CharacterBoundReport character_norm_bound(const Vector& l, const GramForm& r, const GramForm& s, int d,
                                          const AlgebraElement& a_d) {
  require(l.size() == r.dim() && r.dim() == s.dim() && a_d.dim() == s.dim(), ErrorKind::DimensionMismatch,
          "character bound inputs differ in dimension");
  const auto tr = trace(r, s).value;
  require(tr.is_finite(), ErrorKind::KernelNotContained, "tr(r/s) is infinite");
  const auto dual = dual_norm(r, l);
  require(dual.is_finite(), ErrorKind::NotContinuous, "functional is not r-continuous");

  CharacterBoundReport rep;
  rep.value = std::abs(a_d.evaluate(l));
  rep.graded = graded_norm(s, d, a_d);
  rep.dual = dual.value();
  rep.trace = tr.value();
  rep.bound = std::pow(rep.dual * rep.trace, d) * rep.graded;
  rep.bound_sharp = std::pow(rep.dual * std::sqrt(rep.trace), d) * rep.graded;
  const double slack = 1e-9 * std::max(1.0, rep.value);
  rep.holds = rep.value <= rep.bound + slack;
  rep.holds_sharp = rep.value <= rep.bound_sharp + slack;
  return rep;
}

PolarizationReport polarization_bound_check(const std::function<double(const AlgebraElement&)>& functional,
                                            const GramForm& r, int d, int samples, std::uint64_t seed) {
  require(d >= 1, ErrorKind::InvalidArgument, "degree must be positive");
  require(samples >= 1, ErrorKind::InvalidArgument, "need at least one sample");
  const int n = static_cast<int>(r.dim());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };
  auto ratio = [](double num, double den) {
    if (num == 0.0) return 0.0;
    return den > 0.0 ? num / den : INFINITY;
  };

  PolarizationReport rep;
  rep.constant = std::pow(static_cast<double>(d), d) / std::tgamma(d + 1.0);
  for (int s = 0; s < samples; ++s) {
    const Vector v = random_vector();
    const double val = std::abs(functional(AlgebraElement::linear(d, v).pow(d)));
    rep.hypothesis_ratio = std::max(rep.hypothesis_ratio, ratio(val, std::pow(r(v), d)));
  }
  rep.hypothesis_ok = rep.hypothesis_ratio <= 1.0 + 1e-9;
  for (int s = 0; s < samples; ++s) {
    AlgebraElement prod = AlgebraElement::constant(n, d, 1.0);
    double scale = 1.0;
    for (int k = 0; k < d; ++k) {
      const Vector v = random_vector();
      prod = prod * AlgebraElement::linear(d, v);
      scale *= r(v);
    }
    rep.max_ratio = std::max(rep.max_ratio, ratio(std::abs(functional(prod)), scale));
    ++rep.tuples;
  }
  rep.holds = rep.max_ratio <= rep.constant * (1.0 + 1e-9);
  return rep;
}

}  // namespace momentlab
