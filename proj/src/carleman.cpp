#include "momentlab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-9;

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

bool le(double a, double b) { return a <= b + kSlack * std::max(1.0, std::abs(b)); }

}  // namespace

std::string_view to_string(CarlemanVerdict v) {
  switch (v) {
    case CarlemanVerdict::DivergentLikely: return "DIVERGENT_LIKELY";
    case CarlemanVerdict::ConvergentLikely: return "CONVERGENT_LIKELY";
    case CarlemanVerdict::Undetermined: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

CarlemanDiagnostic carleman_from_log_moments(const std::vector<double>& log_moments, double margin) {
  require(log_moments.size() >= 4, ErrorKind::InvalidArgument, "need at least four terms");
  require(margin > 0, ErrorKind::InvalidArgument, "margin must be positive");
  CarlemanDiagnostic d;
  d.margin = margin;
  const std::size_t big_n = log_moments.size();
  double sum = 0.0;
  bool infinite = false;
  std::vector<double> log_terms;
  for (std::size_t i = 0; i < big_n; ++i) {
    const double n = static_cast<double>(i + 1);
    const double lt = -log_moments[i] / (2.0 * n);
    log_terms.push_back(lt);
    const double t = std::exp(lt);
    infinite = infinite || std::isinf(t);
    d.terms.push_back(t);
    sum += t;
    d.partial_sums.push_back(sum);
  }
  if (infinite) {
    // A vanishing even moment makes the series trivially divergent.
    d.verdict = CarlemanVerdict::DivergentLikely;
    return d;
  }
  std::vector<double> x, y;
  for (std::size_t i = big_n / 2; i < big_n; ++i) {
    x.push_back(std::log(static_cast<double>(i + 1)));
    y.push_back(log_terms[i]);
  }
  d.fitted_decay_exponent = ols_slope(x, y);
  if (d.fitted_decay_exponent >= -1.0 + margin) {
    d.verdict = CarlemanVerdict::DivergentLikely;
  } else if (d.fitted_decay_exponent <= -1.0 - margin) {
    d.verdict = CarlemanVerdict::ConvergentLikely;
    // Geometric tail when the last ratios are stable, else a power tail.
    const std::size_t w = std::min<std::size_t>(10, big_n - 1);
    double lo = kInf, hi = -kInf;
    for (std::size_t i = big_n - w; i < big_n; ++i) {
      const double r = log_terms[i] - log_terms[i - 1];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double tn = d.terms.back();
    if (hi - lo <= 1e-6 && hi < 0) {
      const double rho = std::exp(0.5 * (lo + hi));
      d.tail_model = "geometric";
      d.extrapolated_sum = sum + tn * rho / (1.0 - rho);
    } else {
      d.tail_model = "power";
      d.extrapolated_sum = sum + tn * static_cast<double>(big_n) / (-d.fitted_decay_exponent - 1.0);
    }
  } else {
    d.verdict = CarlemanVerdict::Undetermined;
  }
  return d;
}

CarlemanDiagnostic carleman_diagnostic(const MomentFunctional& l, const Vector& v, int n_terms, double margin) {
  require(n_terms >= 4, ErrorKind::InvalidArgument, "need at least four terms");
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n_terms));
  for (int n = 1; n <= n_terms; ++n) logs.push_back(l.log_even_moment(v, n));
  return carleman_from_log_moments(logs, margin);
}

GrowthReport bks_growth_sequences(const MomentFunctional& l, const std::vector<Vector>& e,
                                  const std::vector<GramForm>& p_forms, int n, const std::vector<Vector>& probes) {
  require(!e.empty(), ErrorKind::InvalidArgument, "need a nonempty set E");
  require(n >= 1, ErrorKind::InvalidArgument, "need N >= 1");
  require(static_cast<int>(p_forms.size()) >= n, ErrorKind::InvalidArgument, "need forms p_2..p_2N");
  require(2 * n <= l.max_degree() || l.extendable(), ErrorKind::DegreeOverflow,
          "growth sequences need moments of degree " + std::to_string(2 * n));
  const int dim = l.dim();
  const int m = static_cast<int>(e.size());
  for (const Vector& v : e)
    require(v.size() == dim, ErrorKind::DimensionMismatch, "E vector has wrong length");

  GrowthReport r;
  r.m.push_back(1.0);
  r.z.push_back(1.0);
  for (int k = 1; k <= n; ++k) {
    const int deg = 2 * k;
    double best = 0.0;
    // Multisets of size deg from E, carrying the running product.
    std::function<void(int, int, const AlgebraElement&)> rec = [&](int start, int left, const AlgebraElement& acc) {
      if (left == 0) {
        best = std::max(best, std::abs(l(acc)));
        return;
      }
      for (int i = start; i < m; ++i) rec(i, left - 1, acc * AlgebraElement::linear(deg, e[static_cast<std::size_t>(i)]));
    };
    rec(0, deg, AlgebraElement::constant(dim, deg, 1.0));
    r.m.push_back(std::sqrt(best));

    const GramForm& p = p_forms[static_cast<std::size_t>(k - 1)];
    double sup_p = 0.0;
    for (const Vector& v : e) sup_p = std::max(sup_p, p(v));
    const auto c = continuity_constant(l, p, k);
    r.z.push_back(c.is_finite() ? std::pow(sup_p, k) * std::sqrt(c.value()) : kInf);
  }

  auto& ch = r.checks;
  ch.dominated = true;
  for (int k = 1; k <= n; ++k) ch.dominated = ch.dominated && le(r.m[k], r.z[k]);
  ch.log_convex = true;
  for (int k = 1; k < n; ++k) ch.log_convex = ch.log_convex && le(r.m[k] * r.m[k], r.m[k - 1] * r.m[k + 1]);
  ch.monotone_roots = true;
  for (int k = 2; k <= n; ++k)
    ch.monotone_roots = ch.monotone_roots && le(std::pow(r.m[k - 1], 1.0 / (k - 1)), std::pow(r.m[k], 1.0 / k));
  ch.composite = true;
  for (const Vector& lam : probes) {
    require(lam.size() == m, ErrorKind::DimensionMismatch, "probe must have one coefficient per E vector");
    Vector v = Vector::Zero(dim);
    for (int i = 0; i < m; ++i) v += lam(i) * e[static_cast<std::size_t>(i)];
    const double kv = 1.0 + lam.cwiseAbs().sum();
    for (int k = 1; 2 * k <= n; ++k) {
      const double lhs = std::exp(l.log_even_moment(v, k) / (2.0 * k));
      const double rhs = kv * std::pow(r.m[static_cast<std::size_t>(2 * k)], 1.0 / (2.0 * k));
      ch.composite = ch.composite && le(lhs, rhs);
    }
  }
  return r;
}

}  // namespace momentlab
