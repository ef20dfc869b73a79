#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "momentlab/measure.hpp"
#include "momentlab/moment.hpp"

namespace momentlab {

struct SolverResult {
  DiscreteMeasure measure;
  /// Max |moment of measure - input moment| over all input moments.
  double residual = 0.0;
  /// (rank M_(d-1), rank M_d).
  std::pair<int, int> rank_profile{0, 0};
};

/// Singular values below this fraction of the largest count as zero.
inline constexpr double kFlatRankTol = 1e-9;

/// Atomic measure with moments m_0..m_K (m_0 = 1).  With d = floor(K/2)
/// and r = rank H_d: if r <= d the data must be flat (H_(r-1) nonsingular)
/// and the r-point Gauss rule is returned; if r = d + 1 and K is odd the
/// (d+1)-point rule is used.  Nodes and weights come from the Jacobi
/// matrix of the three-term recurrence.  NotPSD, RankNotFlat.
SolverResult solve_univariate(const std::vector<double>& moments);

/// Flat-extension extraction at order d: needs rank M_d = rank M_(d-1).
/// Atoms are joint eigenvalues of the multiplication matrices, separated
/// with a seeded random combination and a real Schur form; weights by
/// least squares (nonnegative least squares if any weight < -1e-8).
/// NotPSD, RankNotFlat, IllConditioned.
SolverResult solve_multivariate(const MomentFunctional& l, int d, std::uint64_t seed = 0);

/// Tries d = 1, 2, ... up to max_degree / 2 and returns the first flat
/// order.  RankNotFlat if none is.
SolverResult solve_multivariate_auto(const MomentFunctional& l, std::uint64_t seed = 0);

/// Lawson-Hanson nonnegative least squares: argmin_{x >= 0} |A x - b|.
Vector nnls(const Matrix& a, const Vector& b, int max_iter = 500);

}  // namespace momentlab
