#include "momentlab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "momentlab/errors.hpp"
#include "momentlab/moment.hpp"
#include "momentlab/trace.hpp"

namespace momentlab {

namespace {

constexpr double kCompareSlack = 1e-9;
constexpr double kKernelTol = 1e-9;
constexpr double kBoundaryTol = 1e-12;

bool le_eps(double value, double eps) { return value <= eps * (1.0 + kCompareSlack); }

// What the certificates need to know about one nu_S against p|_S.
struct Slice {
  SubalgebraIndex coords;
  const DiscreteMeasure* nu = nullptr;
  GramForm p;
  ExtendedReal lambda;              // sup_{p(a) <= 1} int alpha(a)^2
  std::vector<double> dual;         // p'(c_j); +inf off the kernel
  double kernel_mass = 0.0;         // atoms nonzero on ker(p|_S)
};

Slice analyze(const SubalgebraIndex& s, const DiscreteMeasure& nu, const GramForm& p) {
  require(static_cast<Eigen::Index>(s.size()) == nu.dim(), ErrorKind::DimensionMismatch,
          "measure dimension differs from its index set");
  Slice out{s, &nu, p.sub_form(s), ExtendedReal::finite(0.0), {}, 0.0};
  const Matrix k = out.p.kernel();
  const Matrix w = out.p.whitening();
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const Vector& c = nu.atom(j);
    const bool on_kernel = k.cols() > 0 && (k.transpose() * c).norm() > kKernelTol * std::max(1.0, c.norm());
    if (on_kernel) {
      out.dual.push_back(INFINITY);
      out.kernel_mass += nu.weight(j);
    } else {
      out.dual.push_back((w.transpose() * c).norm());
    }
  }
  out.lambda = generalized_max_eigenvalue(nu.second_moment_matrix(), out.p.gram(), p.psd_tol(), kKernelTol);
  return out;
}

std::vector<Slice> analyze_family(const MeasureFamily& fam, const GramForm& p) {
  std::vector<Slice> out;
  for (const auto& [s, nu] : fam) {
    for (int c : s)
      require(c >= 0 && c < p.dim(), ErrorKind::DimensionMismatch, "index set exceeds the form's dimension");
    out.push_back(analyze(s, nu, p));
  }
  return out;
}

SliceCertificate delta_certificate(const Slice& sl, double eps, double delta) {
  SliceCertificate c;
  c.coords = sl.coords;
  c.chebyshev = sl.lambda.is_finite() ? delta * delta * sl.lambda.value() : INFINITY;
  const double threshold = (1.0 / delta) * (1.0 - kBoundaryTol);
  for (std::size_t j = 0; j < sl.dual.size(); ++j)
    if (sl.dual[j] >= threshold) c.union_mass += sl.nu->weight(j);
  c.certified = le_eps(c.chebyshev, eps) || le_eps(c.union_mass, eps);
  return c;
}

bool gamma_slice_certified(const Slice& sl, double eps, double gamma) {
  const double cheb = sl.lambda.is_finite() ? sl.lambda.value() / (gamma * gamma) : INFINITY;
  double mass = 0.0;
  for (std::size_t j = 0; j < sl.dual.size(); ++j)
    if (sl.dual[j] > gamma * (1.0 + kBoundaryTol)) mass += sl.nu->weight(j);
  return le_eps(cheb, eps) || le_eps(mass, eps);
}

bool moments_match(const DiscreteMeasure& a, const DiscreteMeasure& b, int degree, double tol, double& worst) {
  const int n = static_cast<int>(a.dim());
  bool ok = true;
  for (const auto& alpha : monomials_up_to(n, degree)) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) ma += a.weight(j) * AlgebraElement::monomial(n, degree, alpha).evaluate(a.atom(j));
    for (std::size_t j = 0; j < b.size(); ++j) mb += b.weight(j) * AlgebraElement::monomial(n, degree, alpha).evaluate(b.atom(j));
    const double diff = std::abs(ma - mb);
    worst = std::max(worst, diff);
    ok = ok && diff <= tol * std::max(1.0, std::max(std::abs(ma), std::abs(mb)));
  }
  return ok;
}

}  // namespace

bool is_subset(const SubalgebraIndex& s, const SubalgebraIndex& t) {
  return std::includes(t.begin(), t.end(), s.begin(), s.end());
}

std::vector<SubalgebraIndex> coordinate_lattice(int n) {
  require(n >= 1 && n <= 12, ErrorKind::InvalidArgument, "full lattice is limited to 1 <= n <= 12");
  std::vector<SubalgebraIndex> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    SubalgebraIndex s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const SubalgebraIndex& a, const SubalgebraIndex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

DiscreteMeasure pushforward(const DiscreteMeasure& nu, const SubalgebraIndex& t, const SubalgebraIndex& s) {
  require(static_cast<Eigen::Index>(t.size()) == nu.dim(), ErrorKind::DimensionMismatch,
          "measure dimension differs from its index set");
  require(std::is_sorted(s.begin(), s.end()) && std::is_sorted(t.begin(), t.end()), ErrorKind::InvalidArgument,
          "index sets must be sorted");
  require(!s.empty() && is_subset(s, t), ErrorKind::NotSubset, "target index set is not inside the source");
  std::vector<Eigen::Index> pos;
  for (int c : s) pos.push_back(std::lower_bound(t.begin(), t.end(), c) - t.begin());
  std::vector<Vector> atoms;
  std::vector<double> weights;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    Vector img(static_cast<Eigen::Index>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i) img(static_cast<Eigen::Index>(i)) = nu.atom(j)(pos[i]);
    auto it = std::find_if(atoms.begin(), atoms.end(), [&](const Vector& a) { return a == img; });
    if (it == atoms.end()) {
      atoms.push_back(std::move(img));
      weights.push_back(nu.weight(j));
    } else {
      weights[static_cast<std::size_t>(it - atoms.begin())] += nu.weight(j);
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

MeasureFamily marginal_family(const DiscreteMeasure& nu, const std::vector<SubalgebraIndex>& sets) {
  SubalgebraIndex all(static_cast<std::size_t>(nu.dim()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  MeasureFamily fam;
  for (const auto& s : sets) fam.emplace(s, pushforward(nu, all, s));
  return fam;
}

ConsistencyReport consistency_check(const MeasureFamily& fam, int degree, double tol) {
  ConsistencyReport r;
  for (const auto& [t, nu_t] : fam)
    for (const auto& [s, nu_s] : fam) {
      if (s == t || !is_subset(s, t)) continue;
      ++r.pairs_checked;
      const DiscreteMeasure pushed = pushforward(nu_t, t, s);
      if (!moments_match(pushed, nu_s, degree, tol, r.max_mismatch)) r.consistent = false;
    }
  return r;
}

ConcentrationReport concentration_check(const MeasureFamily& fam, const GramForm& p, double eps, double delta,
                                        int probe_budget, std::uint64_t seed) {
  require(eps > 0.0 && delta > 0.0, ErrorKind::InvalidArgument, "eps and delta must be positive");
  require(probe_budget >= 0, ErrorKind::InvalidArgument, "probe budget must be nonnegative");
  const auto slices = analyze_family(fam, p);
  ConcentrationReport r;
  r.eps = eps;
  r.delta = delta;
  r.certified = true;
  for (const Slice& sl : slices) {
    for (std::size_t j = 0; j < sl.dual.size(); ++j)
      require(!(std::isinf(sl.dual[j]) && sl.nu->weight(j) > 0.0), ErrorKind::KernelIssue,
              "an atom of nu_S is nonzero on ker(p|_S)");
    r.slices.push_back(delta_certificate(sl, eps, delta));
    r.certified = r.certified && r.slices.back().certified;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (const Slice& sl : slices) {
    const Matrix w = sl.p.whitening();
    if (w.cols() == 0) continue;
    for (int k = 0; k < probe_budget; ++k) {
      Vector u(w.cols());
      for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = normal(rng);
      const double norm = u.norm();
      if (norm == 0.0) continue;
      const Vector a = delta * (w * u) / norm;
      double tail = 0.0;
      for (std::size_t j = 0; j < sl.nu->size(); ++j)
        if (std::abs(sl.nu->atom(j).dot(a)) >= 1.0) tail += sl.nu->weight(j);
      r.max_probe_tail = std::max(r.max_probe_tail, tail);
      ++r.probes;
    }
  }
  r.falsified = r.max_probe_tail > eps;
  r.status = r.certified ? "certified" : (r.falsified ? "falsified" : "not falsified");
  return r;
}

bool gamma_certified(const MeasureFamily& fam, const GramForm& p, double eps, double gamma) {
  require(eps > 0.0 && gamma > 0.0, ErrorKind::InvalidArgument, "eps and gamma must be positive");
  for (const Slice& sl : analyze_family(fam, p))
    if (!gamma_slice_certified(sl, eps, gamma)) return false;
  return true;
}

EquivalenceReport concentration_equivalence_check(const MeasureFamily& fam, const GramForm& p,
                                                  const std::vector<std::pair<double, double>>& grid) {
  EquivalenceReport r;
  const auto slices = analyze_family(fam, p);
  for (const auto& [eps, delta] : grid) {
    require(eps > 0.0 && delta > 0.0, ErrorKind::InvalidArgument, "grid entries must be positive");
    EquivalenceCase c;
    c.eps = eps;
    c.delta = delta;
    c.delta_certified = std::all_of(slices.begin(), slices.end(), [&](const Slice& sl) {
      return sl.kernel_mass == 0.0 && delta_certificate(sl, eps, delta).certified;
    });
    c.gamma = 2.0 / delta;
    const bool gamma_holds = std::all_of(slices.begin(), slices.end(),
                                         [&](const Slice& sl) { return gamma_slice_certified(sl, eps, c.gamma); });
    c.gamma_ok = !c.delta_certified || gamma_holds;
    // Converse from the gamma side: delta = 1 / gamma.
    const double back = 1.0 / c.gamma;
    const bool back_holds = std::all_of(slices.begin(), slices.end(), [&](const Slice& sl) {
      return delta_certificate(sl, eps, back).certified || sl.kernel_mass <= eps * (1.0 + kCompareSlack);
    });
    c.converse_ok = !gamma_holds || back_holds;
    r.holds = r.holds && c.gamma_ok && c.converse_ok;
    r.cases.push_back(c);
  }
  // The p(b) = 0 branch: on a certified family every kernel direction of
  // p|_S is annihilated by nu_S-almost every atom.
  const bool any_certified =
      std::any_of(r.cases.begin(), r.cases.end(), [](const EquivalenceCase& c) { return c.delta_certified; });
  if (any_certified) {
    for (const Slice& sl : slices) {
      const Matrix k = sl.p.kernel();
      for (Eigen::Index j = 0; j < k.cols(); ++j) {
        double zero_mass = 0.0;
        for (std::size_t i = 0; i < sl.nu->size(); ++i)
          if (std::abs(sl.nu->atom(i).dot(k.col(j))) <= kKernelTol * std::max(1.0, sl.nu->atom(i).norm()))
            zero_mass += sl.nu->weight(i);
        ++r.kernel_probes;
        r.kernel_ok = r.kernel_ok && std::abs(zero_mass - 1.0) <= DiscreteMeasure::kMassTol;
      }
    }
  }
  r.holds = r.holds && r.kernel_ok;
  return r;
}

GramForm prokhorov_radius_form(const GramForm& p, const GramForm& q, double eps, double delta) {
  require(eps > 0.0 && delta > 0.0, ErrorKind::InvalidArgument, "eps and delta must be positive");
  const auto tr = trace(p, q).value;
  require(tr.is_finite(), ErrorKind::InfiniteTrace, "tr(p/q) is infinite");
  return GramForm(q.gram() * (tr.value() / (delta * delta * eps)), q.psd_tol());
}

ProkhorovReport prokhorov_mass_check(const MeasureFamily& fam, const GramForm& p, const GramForm& q, double eps,
                                     double delta) {
  const auto tr = trace(p, q).value;
  require(tr.is_finite(), ErrorKind::InfiniteTrace, "tr(p/q) is infinite");
  const auto conc = concentration_check(fam, p, eps, delta);
  require(conc.certified, ErrorKind::HypothesisNotCertified,
          "concentration is not certified at the requested (eps, delta)");

  ProkhorovReport r;
  r.eps = eps;
  r.delta = delta;
  r.trace = tr.value();
  const GramForm radius = prokhorov_radius_form(p, q, eps, delta);
  if (r.trace > 0.0) {
    const auto ident = trace(p, radius.scaled(delta)).value;
    r.trace_identity = ident.value_or(INFINITY);
  }
  r.identity_ok = r.trace_identity <= eps * (1.0 + 1e-12);
  r.bound = 1.0 - 14.0 * eps;

  auto in_k = [&](const SubalgebraIndex& s, const Vector& c) {
    const auto norm = dual_norm(radius.sub_form(s), c);
    return norm.is_finite() && norm.value() <= 1.0 + kBoundaryTol;
  };
  for (const auto& [s, nu] : fam) {
    ProkhorovSlice sl{s, 0.0};
    for (std::size_t j = 0; j < nu.size(); ++j)
      if (in_k(s, nu.atom(j))) sl.mass += nu.weight(j);
    r.min_mass = std::min(r.min_mass, sl.mass);
    r.slices.push_back(sl);
  }
  r.mass_ok = r.min_mass >= r.bound;

  for (const auto& [t, nu_t] : fam)
    for (const auto& [s, nu_s] : fam) {
      if (s == t || !is_subset(s, t)) continue;
      ++r.nesting_pairs;
      std::vector<Eigen::Index> pos;
      for (int c : s) pos.push_back(std::lower_bound(t.begin(), t.end(), c) - t.begin());
      for (std::size_t j = 0; j < nu_t.size(); ++j) {
        if (nu_t.weight(j) <= 0.0 || !in_k(t, nu_t.atom(j))) continue;
        Vector img(static_cast<Eigen::Index>(pos.size()));
        for (std::size_t i = 0; i < pos.size(); ++i) img(static_cast<Eigen::Index>(i)) = nu_t.atom(j)(pos[i]);
        r.nesting_ok = r.nesting_ok && in_k(s, img);
      }
    }
  r.passed = r.identity_ok && r.mass_ok && r.nesting_ok;
  return r;
}

CapReport orthonormal_cap_check(const GramForm& q, const OrthonormalSystem& e, double n, const Vector& alpha) {
  require(alpha.size() == q.dim() && e.vectors.rows() == q.dim(), ErrorKind::DimensionMismatch,
          "cap check inputs differ in dimension");
  CapReport r;
  const auto dual = dual_norm(q, alpha);
  r.dual_norm = dual.value_or(INFINITY);
  r.in_scope = dual.is_finite() && r.dual_norm <= n * (1.0 + kBoundaryTol);
  r.bound = n * n;
  for (Eigen::Index j = 0; j < e.size(); ++j) {
    const double v = alpha.dot(e.vectors.col(j));
    r.sum += v * v;
  }
  r.holds = r.sum <= r.bound * (1.0 + kCompareSlack);
  return r;
}

ReverseSeminormReport reverse_seminorm_construction(const DiscreteMeasure& nu, const GramForm& q) {
  require(nu.dim() == q.dim(), ErrorKind::DimensionMismatch, "measure and form differ in dimension");
  constexpr double zeta4 = std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi / 90.0;
  ReverseSeminormReport r;
  r.gram = Matrix::Zero(q.dim(), q.dim());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const Vector& c = nu.atom(j);
    const auto dual = dual_norm(q, c);
    if (dual.is_infinite()) {
      r.excluded_mass += nu.weight(j);
      continue;
    }
    // The atom lies in K_n for every n >= m = max(1, ceil(q'(c))).
    const double t = dual.value();
    const long m = std::max(1L, static_cast<long>(std::ceil(t * (1.0 - kBoundaryTol))));
    double head = 0.0;
    for (long k = 1; k < m; ++k) head += std::pow(static_cast<double>(k), -4.0);
    r.gram.noalias() += nu.weight(j) * (zeta4 - head) * c * c.transpose();
  }
  r.gram = symmetrize(r.gram);
  r.trace = trace(GramForm(r.gram, q.psd_tol()), q).value.value_or(INFINITY);
  r.holds = r.trace <= r.bound;
  return r;
}

}  // namespace momentlab
