#pragma once

#include <cstdint>
#include <functional>

#include "momentlab/measure.hpp"
#include "momentlab/seminorm.hpp"

namespace momentlab {

/// Worker threads used by Monte-Carlo estimators.  Defaults to the
/// MOMENTLAB_THREADS environment variable, else hardware concurrency.
/// Results never depend on this value.
unsigned worker_threads();
void set_worker_threads(unsigned n);

struct McConfig {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;
  std::uint32_t streams = 8;
};

/// The standard Gaussian measure of a Hilbertian seminorm q: coordinates
/// <v, e_i>_q in a complete q-orthonormal system are i.i.d. N(0, 1).
class GaussianMeasure {
 public:
  /// Throws SingularForm when q has a kernel, unless `quotient` is set, in
  /// which case samples live on the range of q.
  explicit GaussianMeasure(GramForm q, bool quotient = false);

  const GramForm& form() const noexcept { return q_; }
  /// Columns form a complete q-orthonormal system.
  const Matrix& whitening() const noexcept { return w_; }
  Eigen::Index dim() const noexcept { return q_.dim(); }
  Eigen::Index rank() const noexcept { return w_.cols(); }

  /// Draws `cfg.samples` vectors, one per column.
  Matrix sample(const McConfig& cfg) const;

  /// Visits every sample in block order.  Blocks run concurrently; the
  /// visitor gets (block, vector) and must only touch block-local state.
  void for_each_sample(const McConfig& cfg,
                       const std::function<void(std::uint32_t, const Vector&)>& visit) const;

 private:
  GramForm q_;
  Matrix w_;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Mean of f over the samples, with standard error, merged over blocks in
/// fixed order.
McEstimate mc_mean(const GaussianMeasure& g, const McConfig& cfg,
                   const std::function<double(const Vector&)>& f);

struct SecondMomentReport {
  McEstimate mc;
  double exact = 1.0;
  /// | |W^T G w|^2 - 1 |: how far the whitened direction is from unit length.
  double identity_error = 0.0;
  /// |mc - exact| <= 4 stderr.
  bool within = false;
};

/// Integral of <v, w>_q^2 with w normalized to q(w) = 1.
SecondMomentReport second_moment_check(const GaussianMeasure& g, const Vector& w, const McConfig& cfg);

struct TailReport {
  double dual_norm = 0.0;
  /// gamma(|l(v)| >= 1), exactly, from the complementary normal CDF.
  double exact = 0.0;
  double bound = 1.0 / 7.0;
  bool ok = false;
};

/// Throws NotInScope when q'(l) < 1 (beyond 1e-12 relative rounding).
TailReport tail_lower_bound_check(const GaussianMeasure& g, const DualFunctional& l);

struct BallTailReport {
  McEstimate mc;
  double bound = 0.0;
  bool ok = false;
};

/// gamma(p(v) > delta) against delta^-2 tr(p/q).
BallTailReport chebyshev_outside_ball(const GaussianMeasure& g, const GramForm& p, double delta,
                                      const McConfig& cfg);

struct FundamentalLemmaReport {
  /// delta^2 times the largest eigenvalue of the atoms' second-moment
  /// matrix whitened by p; infinite when that matrix sees ker(p).
  ExtendedReal hypothesis_value;
  bool certified = false;
  double trace = 0.0;
  /// mu(B_1(q')), exact.
  double mass = 0.0;
  double bound = 0.0;
  bool holds = false;
  double eps = 0.0;
  double delta = 0.0;
};

/// mu is a measure on functionals: atom j holds the coefficients of l_j.
/// The conclusion is only asserted when the hypothesis is certified; the
/// report says which.
FundamentalLemmaReport fundamental_lemma_check(const DiscreteMeasure& mu, const GramForm& p,
                                               const GramForm& q, double eps, double delta);

/// Complementary standard normal two-sided tail: P(|Z| >= t).
double normal_two_sided_tail(double t);

}  // namespace momentlab
