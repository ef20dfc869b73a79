#pragma once

#include <string_view>
#include <vector>

#include "momentlab/moment.hpp"

namespace momentlab {

enum class CarlemanVerdict { DivergentLikely, ConvergentLikely, Undetermined };

std::string_view to_string(CarlemanVerdict v);

/// Heuristic reading of sum_n L(v^2n)^(-1/2n).  Divergence cannot be
/// decided from finitely many terms; the verdict comes from the log-log
/// slope of t_n over the last half of the terms:
///   slope >= -1 + margin  -> DivergentLikely
///   slope <= -1 - margin  -> ConvergentLikely (with tail extrapolation)
///   otherwise             -> Undetermined
struct CarlemanDiagnostic {
  std::vector<double> terms;         ///< t_n, n = 1..N
  std::vector<double> partial_sums;  ///< S_n
  double fitted_decay_exponent = 0.0;
  double margin = 0.1;
  CarlemanVerdict verdict = CarlemanVerdict::Undetermined;
  /// S_N plus an extrapolated tail; only set for ConvergentLikely.
  double extrapolated_sum = 0.0;
  /// "geometric" or "power".
  std::string_view tail_model = "none";
};

/// From log L(v^2n), n = 1..N.  NegativeEvenMoment is the caller's
/// concern; -inf entries (zero moments) give infinite terms.
CarlemanDiagnostic carleman_from_log_moments(const std::vector<double>& log_moments, double margin = 0.1);

/// NegativeEvenMoment if some L(v^2n) < 0.  Uses the source measure or the
/// Gaussian closed form when the functional has one, so N can exceed the
/// stored degree.
CarlemanDiagnostic carleman_diagnostic(const MomentFunctional& l, const Vector& v, int n_terms,
                                       double margin = 0.1);

struct GrowthChecks {
  /// m_k <= z_k for every k.  Guaranteed only for frame-orthogonal E.
  bool dominated = false;
  /// m_k^2 <= m_(k-1) m_(k+1).
  bool log_convex = false;
  /// m_k^(1/k) nondecreasing.
  bool monotone_roots = false;
  /// L(v^2k)^(1/2k) <= K_v m_2k^(1/2k) for each probe, 2k <= N.
  bool composite = false;
};

struct GrowthReport {
  std::vector<double> m;  ///< m_0..m_N
  std::vector<double> z;  ///< z_1..z_N (z[0] unused, set to 1)
  GrowthChecks checks;
};

/// m_k = sqrt(max over multisets of size 2k from E of |L(v_1...v_2k)|),
/// z_k = (max_E p_2k(v))^k sqrt(C_{L,2k}) with C the continuity constant of
/// p_2k on the degree-2k slice.  p_forms[k-1] is p_2k.  Probes are
/// coefficient vectors lambda over E; v = sum lambda_i E_i.
GrowthReport bks_growth_sequences(const MomentFunctional& l, const std::vector<Vector>& e,
                                  const std::vector<GramForm>& p_forms, int n,
                                  const std::vector<Vector>& probes = {});

}  // namespace momentlab
