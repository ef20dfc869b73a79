#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "momentlab/measure.hpp"
#include "momentlab/seminorm.hpp"

namespace momentlab {

/// A coordinate subspace of R^n, given by its sorted 0-based coordinates.
/// Stands for the subalgebra generated by those coordinates.
using SubalgebraIndex = std::vector<int>;

bool is_subset(const SubalgebraIndex& s, const SubalgebraIndex& t);

/// All nonempty subsets of {0..n-1} (n <= 12), ordered by size, then
/// lexicographically.
std::vector<SubalgebraIndex> coordinate_lattice(int n);

/// Measures nu_S on R^|S|, keyed by S.
using MeasureFamily = std::map<SubalgebraIndex, DiscreteMeasure>;

/// Image of nu (on the T coordinates) under projection to S.  Atoms with
/// identical images merge, in order of first appearance.  NotSubset when
/// S is not contained in T.
DiscreteMeasure pushforward(const DiscreteMeasure& nu, const SubalgebraIndex& t, const SubalgebraIndex& s);

/// Marginals of a measure on R^n over the given index sets.
MeasureFamily marginal_family(const DiscreteMeasure& nu, const std::vector<SubalgebraIndex>& sets);

struct ConsistencyReport {
  bool consistent = true;
  int pairs_checked = 0;
  double max_mismatch = 0.0;
};

/// For S strictly inside T, moments of pushforward(nu_T, S) and nu_S agree
/// up to `degree` within tol.
ConsistencyReport consistency_check(const MeasureFamily& fam, int degree = 4, double tol = 1e-10);

struct SliceCertificate {
  SubalgebraIndex coords;
  /// delta^2 lambda_max (second moments whitened by p|_S).
  double chebyshev = 0.0;
  /// Mass of atoms that some a in the ball pushes to |alpha(a)| >= 1.
  double union_mass = 0.0;
  bool certified = false;
};

struct ConcentrationReport {
  std::string mode = "eps_delta";
  double eps = 0.0;
  double delta = 0.0;
  bool certified = false;
  std::vector<SliceCertificate> slices;
  int probes = 0;
  /// Largest exact nu_S(|alpha(a)| >= 1) over the random probes.
  double max_probe_tail = 0.0;
  bool falsified = false;
  /// "certified", "not falsified" or "falsified".
  std::string status;
  bool exact = true;
};

/// Certifies forall S, forall a in S with p(a) <= delta:
/// nu_S(|alpha(a)| >= 1) <= eps.  Two exact certificates per S: Chebyshev
/// on the second moments, and the mass of atoms with delta p'(c) >= 1.
/// Random probes on the delta-sphere try to falsify.  KernelIssue when a
/// supported atom is nonzero on ker(p|_S).
ConcentrationReport concentration_check(const MeasureFamily& fam, const GramForm& p, double eps, double delta,
                                        int probe_budget = 0, std::uint64_t seed = 0);

/// Whether forall S, a: nu_S(|alpha(a)| > gamma p(a)) <= eps is certified.
/// Atoms nonzero on ker(p|_S) count as violating.
bool gamma_certified(const MeasureFamily& fam, const GramForm& p, double eps, double gamma);

struct EquivalenceCase {
  double eps = 0.0;
  double delta = 0.0;
  bool delta_certified = false;
  double gamma = 0.0;
  bool gamma_ok = false;
  bool converse_ok = false;
};

struct EquivalenceReport {
  bool holds = true;
  std::vector<EquivalenceCase> cases;
  /// Kernel directions b of p|_S probed: nu_S(|alpha(b)| = 0) = 1 each time.
  int kernel_probes = 0;
  bool kernel_ok = true;
};

/// On each grid pair where eps_delta certifies, eps_gamma must certify at
/// gamma = 1/delta' with delta' = delta / 2; conversely eps_gamma at gamma
/// must give eps_delta at delta = 1/gamma.
EquivalenceReport concentration_equivalence_check(const MeasureFamily& fam, const GramForm& p,
                                                  const std::vector<std::pair<double, double>>& grid);

/// Gram matrix of r_eps = q sqrt(tr(p/q)) / (delta sqrt(eps)).
GramForm prokhorov_radius_form(const GramForm& p, const GramForm& q, double eps, double delta);

struct ProkhorovSlice {
  SubalgebraIndex coords;
  double mass = 0.0;
};

struct ProkhorovReport {
  double eps = 0.0;
  double delta = 0.0;
  double trace = 0.0;
  /// tr(p / delta r_eps); equals eps up to rounding.
  double trace_identity = 0.0;
  bool identity_ok = false;
  std::vector<ProkhorovSlice> slices;
  double min_mass = 1.0;
  double bound = 0.0;
  bool mass_ok = false;
  bool nesting_ok = true;
  int nesting_pairs = 0;
  bool passed = false;
};

/// nu_S(K^(S)) >= 1 - 14 eps with K^(S) = {c : r_eps|_S'(c) <= 1}, and the
/// projection of K^(T) atoms lands in K^(S).  HypothesisNotCertified
/// unless concentration certifies at (eps, delta).
ProkhorovReport prokhorov_mass_check(const MeasureFamily& fam, const GramForm& p, const GramForm& q, double eps,
                                     double delta);

struct CapReport {
  double sum = 0.0;
  double bound = 0.0;
  double dual_norm = 0.0;
  bool in_scope = false;
  bool holds = false;
};

/// sum_{e in E} alpha(e)^2 <= n^2 when q'(alpha) <= n.
CapReport orthonormal_cap_check(const GramForm& q, const OrthonormalSystem& e, double n, const Vector& alpha);

struct ReverseSeminormReport {
  Matrix gram;
  double trace = 0.0;
  double bound = 2.0;
  bool holds = false;
  /// Mass of atoms outside every K_n (not q-continuous).
  double excluded_mass = 0.0;
};

/// p(v)^2 = sum_{n >= 1} n^-4 integral over K_n of (c . v)^2 dnu, with
/// K_n = {c : q'(c) <= n}.  The series is summed in closed form per atom.
ReverseSeminormReport reverse_seminorm_construction(const DiscreteMeasure& nu, const GramForm& q);

}  // namespace momentlab
