#pragma once

#include <vector>

#include "momentlab/algebra.hpp"
#include "momentlab/moment.hpp"

namespace momentlab {

/// Per-degree pairs (p_2d, q_2d), d = 1..D, with weights lambda_d, eta_d
/// (d = 0..D) and constants C_d.  Level d uses one frame, built from a
/// q_2d-orthonormal system that is p_2d-orthogonal plus a basis of
/// ker(q_2d), so the graded norms of p_2d and q_2d are measured in the
/// same monomials.
///
///   p~(a)^2 = lambda_0^2 |a0|^2 + sum_d lambda_d^2 C_d p~_2d^(d)(a^(d))^2
///   q~(a)^2 = eta_0^2 |a0|^2 + sum_d eta_d^2 q~_2d^(d)(a^(d))^2
///
/// Sums stop at the truncation degree D.
class GradedSeminormTower {
 public:
  GradedSeminormTower(std::vector<GramForm> p_forms, std::vector<GramForm> q_forms, Vector lambda,
                      Vector eta, std::vector<double> constants);

  /// Constants C_d = square_continuity_constant(L, p_2d, d) in the level
  /// frames, so that L(b^2) <= C_d p~_2d^(d)(b)^2.  NotContinuous if some
  /// constant is infinite.
  static GradedSeminormTower for_functional(const MomentFunctional& l, std::vector<GramForm> p_forms,
                                            std::vector<GramForm> q_forms, Vector lambda, Vector eta);

  int dim() const noexcept { return dim_; }
  int max_degree() const noexcept { return static_cast<int>(p_forms_.size()); }
  const GramForm& p_form(int d) const { return p_forms_.at(static_cast<std::size_t>(d - 1)); }
  const GramForm& q_form(int d) const { return q_forms_.at(static_cast<std::size_t>(d - 1)); }
  const GradedFrame& p_frame(int d) const { return p_frames_.at(static_cast<std::size_t>(d - 1)); }
  const GradedFrame& q_frame(int d) const { return q_frames_.at(static_cast<std::size_t>(d - 1)); }
  /// Number of q_2d-orthonormal frame vectors (the leading columns).
  Eigen::Index q_rank(int d) const { return q_form(d).rank(); }
  const Vector& lambda() const noexcept { return lambda_; }
  const Vector& eta() const noexcept { return eta_; }
  double constant(int d) const { return constants_.at(static_cast<std::size_t>(d - 1)); }

  /// sum_{d=0}^{D} lambda_d^-2.
  double lambda_tail() const;

 private:
  int dim_ = 0;
  std::vector<GramForm> p_forms_;
  std::vector<GramForm> q_forms_;
  std::vector<GradedFrame> p_frames_;
  std::vector<GradedFrame> q_frames_;
  Vector lambda_;
  Vector eta_;
  std::vector<double> constants_;
};

double p_tilde(const GradedSeminormTower& t, const AlgebraElement& a);
double q_tilde(const GradedSeminormTower& t, const AlgebraElement& a);

struct TildeTraceReport {
  /// lambda_0^2/eta_0^2 + sum_d (lambda_d^2/eta_d^2) C_d tr(p_2d/q_2d)^d.
  double formula = 0.0;
  /// Sum of p~(eta_d^-1 e_i1...e_id)^2 over ordered d-tuples of frame
  /// vectors, evaluated through the generic graded norm.
  double direct = 0.0;
  /// Same sum over sorted tuples (each monomial once): the trace of p~
  /// against q~ in the frame convention.
  double direct_sorted = 0.0;
  std::vector<double> traces;
  int truncation = 0;
  bool agree = false;
};

/// InfiniteTrace if some tr(p_2d/q_2d) is infinite.
TildeTraceReport tilde_trace_identity(const GradedSeminormTower& t);

}  // namespace momentlab
