#pragma once

#include <map>
#include <optional>
#include <vector>

#include "momentlab/algebra.hpp"
#include "momentlab/measure.hpp"

namespace momentlab {

/// A normalized linear functional L on S(R^n) truncated at max_degree,
/// stored by its moments L(x^alpha).  Absent moments are zero.  When the
/// functional comes from a measure (or is the standard Gaussian), moments
/// beyond the stored degree are computed on demand.
class MomentFunctional {
 public:
  using Moments = std::map<MultiIndex, double, GrlexLess>;

  /// Requires L(1) = 1 within 1e-12.
  MomentFunctional(int dim, int max_degree, Moments moments);

  static MomentFunctional from_measure(const DiscreteMeasure& nu, int max_degree);
  /// Moments of the standard Gaussian on R^n: prod_i (alpha_i - 1)!! for
  /// even exponents, 0 otherwise.
  static MomentFunctional gaussian(int dim, int max_degree);
  /// One-dimensional functional with L(x^k) = m[k].
  static MomentFunctional univariate(const std::vector<double>& m);

  int dim() const noexcept { return dim_; }
  int max_degree() const noexcept { return max_degree_; }
  const Moments& moments() const noexcept { return moments_; }
  const std::optional<DiscreteMeasure>& source() const noexcept { return source_; }
  bool is_gaussian() const noexcept { return gaussian_; }
  /// Whether moments of every degree are available.
  bool extendable() const noexcept { return source_.has_value() || gaussian_; }

  /// L(x^alpha); DegreeOverflow past the stored degree unless extendable.
  double moment(const MultiIndex& alpha) const;
  double operator()(const AlgebraElement& a) const;

  /// The functional re-truncated at a higher degree (recomputed from the
  /// source); DegreeOverflow if not extendable.
  MomentFunctional extended(int max_degree) const;

  /// log L(v^(2k)) for the degree-1 element with coefficients v, computed
  /// without overflow from the source or the Gaussian closed form.  Returns
  /// -inf when the moment is zero.
  double log_even_moment(const Vector& v, int k) const;

 private:
  int dim_;
  int max_degree_;
  Moments moments_;
  std::optional<DiscreteMeasure> source_;
  bool gaussian_ = false;
};

inline MomentFunctional from_measure(const DiscreteMeasure& nu, int max_degree) {
  return MomentFunctional::from_measure(nu, max_degree);
}

/// Finite list of generators g_i; K_Q = {c : g_i(c) >= 0 for all i}.
struct QuadraticModuleSpec {
  std::vector<AlgebraElement> generators;

  /// Indices of generators negative at c beyond tol.
  std::vector<std::size_t> violations(const Vector& c, double tol = 1e-12) const;
  bool contains(const Vector& c, double tol = 1e-12) const { return violations(c, tol).empty(); }
};

/// M[alpha, beta] = L(x^(alpha + beta)) over monomials of degree <= d in
/// graded-lex order.
Matrix moment_matrix(const MomentFunctional& l, int d);
/// M_g[alpha, beta] = L(g x^(alpha + beta)).
Matrix localizing_matrix(const MomentFunctional& l, const AlgebraElement& g, int d);

struct PsdCertificate {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool psd = false;
};

/// Eigenvalues >= -tol * max(1, lambda_max).
PsdCertificate psd_certificate(const Matrix& m, double tol = 1e-10);

/// sqrt(L(a^2)).  NotSquarePositive when the moment matrix at deg(a) has
/// a negative eigenvalue beyond tolerance.
double s_L(const MomentFunctional& l, const AlgebraElement& a);

/// Gram matrix of s_L on the degree-1 slice: the second-moment matrix
/// M[i, j] = L(x_i x_j).
Matrix s_L_gram(const MomentFunctional& l);

/// L(ab)^2 <= L(a^2) L(b^2) with 1e-9 relative slack.
bool cbs_check(const MomentFunctional& l, const AlgebraElement& a, const AlgebraElement& b);

/// Smallest C with |L(b)| <= C p~^(2d)(b) on the degree-2d slice: the dual
/// norm of L in the frame monomials.  Infinite when L is nonzero on a
/// zero-weight monomial.  Uses the canonical frame of p unless one is given.
ExtendedReal continuity_constant(const MomentFunctional& l, const GramForm& p, int d,
                                 const std::optional<GradedFrame>& frame = std::nullopt);

/// Smallest C with L(b^2) <= C p~^(d)(b)^2 for homogeneous b of degree d:
/// the largest generalized eigenvalue of the frame-monomial Hankel block
/// against the diagonal monomial weights.
ExtendedReal square_continuity_constant(const MomentFunctional& l, const GramForm& p, int d,
                                        const std::optional<GradedFrame>& frame = std::nullopt);

}  // namespace momentlab
