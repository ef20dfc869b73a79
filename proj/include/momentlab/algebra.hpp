#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "momentlab/multi_index.hpp"
#include "momentlab/seminorm.hpp"

namespace momentlab {

/// An element of the symmetric algebra S(R^n) truncated at total degree D,
/// i.e. a polynomial in x_1..x_n.  Terms are kept sparse, in graded-lex
/// order, with exact zeros dropped.
class AlgebraElement {
 public:
  using Terms = std::map<MultiIndex, double, GrlexLess>;

  AlgebraElement(int dim, int max_degree);

  static AlgebraElement constant(int dim, int max_degree, double c);
  static AlgebraElement variable(int dim, int max_degree, int i);
  static AlgebraElement monomial(int dim, int max_degree, const MultiIndex& alpha, double c = 1.0);
  /// The degree-1 element sum_i v_i x_i.
  static AlgebraElement linear(int max_degree, const Vector& v);

  int dim() const noexcept { return dim_; }
  int max_degree() const noexcept { return max_degree_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Highest degree with a nonzero term; -1 for the zero element.
  int degree() const;
  double coefficient(const MultiIndex& alpha) const;
  void set(const MultiIndex& alpha, double c);
  void add_to(const MultiIndex& alpha, double c);

  /// The degree-d slice a^(d).
  AlgebraElement homogeneous_part(int d) const;
  bool is_homogeneous(int d) const;
  /// Same polynomial under another truncation degree; DegreeOverflow if
  /// it does not fit.
  AlgebraElement with_max_degree(int d) const;

  double evaluate(const Vector& point) const;

  /// Coefficients of the degree-1 slice as a vector.
  Vector linear_part() const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(double c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, double c) { return a *= c; }
  friend AlgebraElement operator*(double c, AlgebraElement a) { return a *= c; }
  /// Product; DegreeOverflow when the result exceeds the truncation.
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

  AlgebraElement pow(int k) const;

  /// Max |coefficient difference|.
  double distance(const AlgebraElement& o) const;

 private:
  void check_compatible(const AlgebraElement& o) const;
  int dim_;
  int max_degree_;
  Terms terms_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

/// A character of S(R^n): evaluation at a point.
struct Character {
  Vector point;
};

double evaluate_character(const Character& alpha, const AlgebraElement& a);

/// The linear substitution x_i -> sum_j m(i, j) x_j applied to a.
AlgebraElement substitute_linear(const AlgebraElement& a, const Matrix& m);

/// An s-orthogonal basis b_1..b_n of R^n (columns) with weights
/// w_j = s(b_j)^2.  Kernel vectors of s get weight 0.  This fixes the
/// inner product on S(R^n)_d: in the monomials of the frame,
/// <y^beta, y^gamma> = [beta == gamma] * prod_j w_j^beta_j.
struct GradedFrame {
  Matrix basis;
  Vector weights;
  /// x_i = sum_j subst(i, j) y_j, i.e. subst = basis^-T.
  Matrix subst;

  static GradedFrame from_basis(const Matrix& basis, const GramForm& s);
  /// Coordinate frame when s is diagonal, else the eigenbasis of s.
  static GradedFrame canonical(const GramForm& s);

  int dim() const noexcept { return static_cast<int>(basis.cols()); }
  /// a re-expressed in the frame monomials y^beta.
  AlgebraElement to_frame(const AlgebraElement& a) const;
  /// The polynomial in x equal to the frame monomial y^beta.
  AlgebraElement frame_monomial(const MultiIndex& beta, int max_degree) const;
  double monomial_weight(const MultiIndex& beta) const;
};

/// s~^(d)(a_d) in the canonical frame of s.  NotHomogeneous unless a_d is
/// homogeneous of degree d.
double graded_norm(const GramForm& s, int d, const AlgebraElement& a_d);
double graded_norm(const GradedFrame& frame, int d, const AlgebraElement& a_d);
double graded_inner(const GradedFrame& frame, int d, const AlgebraElement& a,
                    const AlgebraElement& b);

struct CharacterBoundReport {
  double value = 0.0;      ///< |alpha_l(a_d)|
  double graded = 0.0;     ///< s~^(d)(a_d)
  double dual = 0.0;       ///< r'(l)
  double trace = 0.0;      ///< tr(r/s)
  /// (r'(l) tr(r/s))^d s~(a_d): the constant as usually stated.
  double bound = 0.0;
  /// (r'(l) sqrt(tr(r/s)))^d s~(a_d): always valid, sharper when tr >= 1.
  double bound_sharp = 0.0;
  bool holds = false;
  bool holds_sharp = false;
};

/// Throws KernelNotContained if tr(r/s) is infinite, NotContinuous if l is
/// not r-continuous.
CharacterBoundReport character_norm_bound(const Vector& l, const GramForm& r, const GramForm& s,
                                          int d, const AlgebraElement& a_d);

struct PolarizationReport {
  double constant = 0.0;   ///< d^d / d!
  /// max over sampled v of |L(v^d)| / r(v)^d; the hypothesis needs <= 1.
  double hypothesis_ratio = 0.0;
  bool hypothesis_ok = false;
  /// max over sampled tuples of |L(v_1..v_d)| / (r(v_1)..r(v_d)).
  double max_ratio = 0.0;
  bool holds = false;
  int tuples = 0;
};

/// Checks |L(v_1...v_d)| <= d^d/d! r(v_1)...r(v_d) on random tuples.  The
/// functional acts on homogeneous degree-d elements.
PolarizationReport polarization_bound_check(
    const std::function<double(const AlgebraElement&)>& functional, const GramForm& r, int d,
    int samples, std::uint64_t seed);

}  // namespace momentlab
