#include "momentlab/moment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

constexpr double kNormTol = 1e-12;

double monomial_value(const Vector& c, const MultiIndex& alpha) {
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] > 0) v *= std::pow(c(static_cast<Eigen::Index>(i)), alpha[i]);
  return v;
}

double measure_moment(const DiscreteMeasure& nu, const MultiIndex& alpha) {
  double s = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) s += nu.weight(j) * monomial_value(nu.atom(j), alpha);
  return s;
}

// (k - 1)!! for even k, 0 for odd k.
double gaussian_moment_1d(int k) {
  if (k % 2) return 0.0;
  double v = 1.0;
  for (int j = k - 1; j > 1; j -= 2) v *= j;
  return v;
}

double gaussian_moment(const MultiIndex& alpha) {
  double v = 1.0;
  for (int k : alpha) v *= gaussian_moment_1d(k);
  return v;
}

// L(y^mu) for every frame monomial of degree k.
std::map<MultiIndex, double, GrlexLess> frame_moments(const MomentFunctional& l, const GradedFrame& f, int k) {
  std::map<MultiIndex, double, GrlexLess> out;
  for (const auto& mu : monomials_of_degree(l.dim(), k)) out[mu] = l(f.frame_monomial(mu, k));
  return out;
}

}  // namespace

MomentFunctional::MomentFunctional(int dim, int max_degree, Moments moments)
    : dim_(dim), max_degree_(max_degree), moments_(std::move(moments)) {
  require(dim >= 1, ErrorKind::InvalidArgument, "functional dimension must be positive");
  require(max_degree >= 0, ErrorKind::InvalidArgument, "truncation degree must be nonnegative");
  for (const auto& [alpha, v] : moments_) {
    require(static_cast<int>(alpha.size()) == dim, ErrorKind::DimensionMismatch,
            "moment multi-index has wrong length");
    require(degree(alpha) <= max_degree, ErrorKind::DegreeOverflow, "moment beyond truncation degree");
    require(std::isfinite(v), ErrorKind::InvalidArgument, "moment is not finite");
  }
  const double m0 = moment(MultiIndex(static_cast<std::size_t>(dim), 0));
  require(std::abs(m0 - 1.0) <= kNormTol, ErrorKind::InvalidArgument,
          "functional is not normalized: L(1) = " + std::to_string(m0));
}

MomentFunctional MomentFunctional::from_measure(const DiscreteMeasure& nu, int max_degree) {
  const int n = static_cast<int>(nu.dim());
  Moments m;
  for (const auto& alpha : monomials_up_to(n, max_degree)) {
    const double v = measure_moment(nu, alpha);
    if (v != 0.0) m.emplace(alpha, v);
  }
  // Weights sum to 1 only within tolerance; the normalization is exact by
  // definition.
  m[MultiIndex(static_cast<std::size_t>(n), 0)] = 1.0;
  MomentFunctional l(n, max_degree, std::move(m));
  l.source_ = nu;
  return l;
}

MomentFunctional MomentFunctional::gaussian(int dim, int max_degree) {
  Moments m;
  for (const auto& alpha : monomials_up_to(dim, max_degree)) {
    const double v = gaussian_moment(alpha);
    if (v != 0.0) m.emplace(alpha, v);
  }
  MomentFunctional l(dim, max_degree, std::move(m));
  l.gaussian_ = true;
  return l;
}

MomentFunctional MomentFunctional::univariate(const std::vector<double>& m) {
  require(!m.empty(), ErrorKind::InvalidArgument, "need at least m_0");
  Moments out;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (m[k] != 0.0) out.emplace(MultiIndex{static_cast<int>(k)}, m[k]);
  return MomentFunctional(1, static_cast<int>(m.size()) - 1, std::move(out));
}

double MomentFunctional::moment(const MultiIndex& alpha) const {
  require(static_cast<int>(alpha.size()) == dim_, ErrorKind::DimensionMismatch,
          "multi-index has wrong length");
  if (degree(alpha) > max_degree_) {
    if (source_) return measure_moment(*source_, alpha);
    if (gaussian_) return gaussian_moment(alpha);
    raise(ErrorKind::DegreeOverflow, "moment of degree " + std::to_string(degree(alpha)) +
                                         " requested; functional is truncated at " +
                                         std::to_string(max_degree_));
  }
  const auto it = moments_.find(alpha);
  return it == moments_.end() ? 0.0 : it->second;
}

double MomentFunctional::operator()(const AlgebraElement& a) const {
  require(a.dim() == dim_, ErrorKind::DimensionMismatch, "element dimension differs from functional");
  double s = 0.0;
  for (const auto& [alpha, c] : a.terms()) s += c * moment(alpha);
  return s;
}

MomentFunctional MomentFunctional::extended(int max_degree) const {
  if (max_degree <= max_degree_) return *this;
  if (source_) return from_measure(*source_, max_degree);
  if (gaussian_) return gaussian(dim_, max_degree);
  raise(ErrorKind::DegreeOverflow, "functional has no source to extend from");
}

double MomentFunctional::log_even_moment(const Vector& v, int k) const {
  require(v.size() == dim_, ErrorKind::DimensionMismatch, "direction has wrong length");
  require(k >= 0, ErrorKind::InvalidArgument, "negative moment order");
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (k == 0) return 0.0;
  if (source_) {
    std::vector<double> logs;
    for (std::size_t j = 0; j < source_->size(); ++j) {
      const double t = std::abs(v.dot(source_->atom(j)));
      if (source_->weight(j) > 0.0 && t > 0.0)
        logs.push_back(std::log(source_->weight(j)) + 2.0 * k * std::log(t));
    }
    if (logs.empty()) return neg_inf;
    const double top = *std::max_element(logs.begin(), logs.end());
    double s = 0.0;
    for (double x : logs) s += std::exp(x - top);
    return top + std::log(s);
  }
  if (gaussian_) {
    const double norm = v.norm();
    if (norm == 0.0) return neg_inf;
    // log (2k - 1)!! = lgamma(2k + 1) - k log 2 - lgamma(k + 1)
    return 2.0 * k * std::log(norm) + std::lgamma(2.0 * k + 1) - k * std::log(2.0) - std::lgamma(k + 1.0);
  }
  const double m = (*this)(AlgebraElement::linear(2 * k, v).pow(2 * k));
  require(m >= 0.0, ErrorKind::NegativeEvenMoment,
          "L(v^" + std::to_string(2 * k) + ") = " + std::to_string(m) + " < 0");
  return m == 0.0 ? neg_inf : std::log(m);
}

std::vector<std::size_t> QuadraticModuleSpec::violations(const Vector& c, double tol) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].evaluate(c) < -tol) out.push_back(i);
  return out;
}

Matrix moment_matrix(const MomentFunctional& l, int d) {
  require(d >= 0, ErrorKind::InvalidArgument, "negative degree");
  require(2 * d <= l.max_degree() || l.extendable(), ErrorKind::DegreeOverflow,
          "moment matrix of order " + std::to_string(d) + " needs degree " + std::to_string(2 * d));
  const auto basis = monomials_up_to(l.dim(), d);
  const auto k = static_cast<Eigen::Index>(basis.size());
  Matrix m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j)
      m(i, j) = m(j, i) = l.moment(add(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]));
  return m;
}

Matrix localizing_matrix(const MomentFunctional& l, const AlgebraElement& g, int d) {
  require(g.dim() == l.dim(), ErrorKind::DimensionMismatch, "generator dimension differs");
  require(2 * d + std::max(g.degree(), 0) <= l.max_degree() || l.extendable(), ErrorKind::DegreeOverflow,
          "localizing matrix exceeds the stored degree");
  const auto basis = monomials_up_to(l.dim(), d);
  const auto k = static_cast<Eigen::Index>(basis.size());
  Matrix m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j) {
      const MultiIndex ab = add(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
      double s = 0.0;
      for (const auto& [gamma, c] : g.terms()) s += c * l.moment(add(gamma, ab));
      m(i, j) = m(j, i) = s;
    }
  return m;
}

PsdCertificate psd_certificate(const Matrix& m, double tol) {
  PsdCertificate c;
  if (m.rows() == 0) {
    c.psd = true;
    return c;
  }
  const auto spec = symmetric_spectrum(symmetrize(m));
  c.min_eigenvalue = spec.values.minCoeff();
  c.max_eigenvalue = spec.values.maxCoeff();
  c.psd = c.min_eigenvalue >= -tol * std::max(1.0, std::abs(c.max_eigenvalue));
  return c;
}

double s_L(const MomentFunctional& l, const AlgebraElement& a) {
  const int k = std::max(a.degree(), 0);
  const auto cert = psd_certificate(moment_matrix(l, k));
  require(cert.psd, ErrorKind::NotSquarePositive,
          "moment matrix has eigenvalue " + std::to_string(cert.min_eigenvalue));
  const AlgebraElement wide = a.with_max_degree(2 * k);
  const double v = l(wide * wide);
  const double scale = 1e-10 * std::max(1.0, std::abs(cert.max_eigenvalue));
  require(v >= -scale, ErrorKind::NotSquarePositive, "L(a^2) = " + std::to_string(v) + " < 0");
  return std::sqrt(std::max(v, 0.0));
}

Matrix s_L_gram(const MomentFunctional& l) {
  const int n = l.dim();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      MultiIndex a(static_cast<std::size_t>(n), 0);
      a[static_cast<std::size_t>(i)] += 1;
      a[static_cast<std::size_t>(j)] += 1;
      g(i, j) = g(j, i) = l.moment(a);
    }
  return g;
}

bool cbs_check(const MomentFunctional& l, const AlgebraElement& a, const AlgebraElement& b) {
  const int top = 2 * std::max({a.degree(), b.degree(), 0});
  const AlgebraElement wa = a.with_max_degree(top), wb = b.with_max_degree(top);
  const double lab = l(wa * wb);
  const double rhs = l(wa * wa) * l(wb * wb);
  return lab * lab <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

ExtendedReal continuity_constant(const MomentFunctional& l, const GramForm& p, int d,
                                 const std::optional<GradedFrame>& frame) {
  require(p.dim() == l.dim(), ErrorKind::DimensionMismatch, "form dimension differs from functional");
  require(d >= 1, ErrorKind::InvalidArgument, "degree must be positive");
  const GradedFrame f = frame ? *frame : GradedFrame::canonical(p);
  const auto values = frame_moments(l, f, 2 * d);
  double scale = 1.0;
  for (const auto& [mu, v] : values) scale = std::max(scale, std::abs(v));
  double sum = 0.0;
  for (const auto& [mu, v] : values) {
    const double w = f.monomial_weight(mu);
    if (w == 0.0) {
      if (std::abs(v) > 1e-10 * scale) return ExtendedReal::infinity();
      continue;
    }
    sum += v * v / w;
  }
  return ExtendedReal::finite(std::sqrt(sum));
}

ExtendedReal square_continuity_constant(const MomentFunctional& l, const GramForm& p, int d,
                                        const std::optional<GradedFrame>& frame) {
  require(p.dim() == l.dim(), ErrorKind::DimensionMismatch, "form dimension differs from functional");
  require(d >= 1, ErrorKind::InvalidArgument, "degree must be positive");
  const GradedFrame f = frame ? *frame : GradedFrame::canonical(p);
  const auto values = frame_moments(l, f, 2 * d);
  const auto basis = monomials_of_degree(l.dim(), d);
  const auto k = static_cast<Eigen::Index>(basis.size());
  Matrix h(k, k);
  Matrix g = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    g(i, i) = f.monomial_weight(basis[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i; j < k; ++j)
      h(i, j) = h(j, i) = values.at(add(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]));
  }
  return generalized_max_eigenvalue(h, g, 1e-13, 1e-10);
}

}  // namespace momentlab
