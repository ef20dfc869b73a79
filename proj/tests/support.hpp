#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <random>
#include <vector>

#include "momentlab/errors.hpp"
#include "momentlab/linalg.hpp"
#include "momentlab/measure.hpp"

namespace testing {

using momentlab::Matrix;
using momentlab::Vector;

/// The ErrorKind thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<momentlab::ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const momentlab::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * g(rng);
  return v;
}

/// A A^T for a Gaussian n x rank matrix A: PSD with the given rank.
inline Matrix random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  std::normal_distribution<double> g;
  Matrix a(n, rank);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) a(i, j) = g(rng);
  return a * a.transpose();
}

/// Positive definite with eigenvalues in [lo, hi].
inline Matrix random_pd(std::mt19937_64& rng, Eigen::Index n, double lo = 0.2, double hi = 5.0) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ();
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = u(rng);
  return q * d.asDiagonal() * q.transpose();
}

/// Atoms at least `separation` apart in the box [-box, box]^n.
inline momentlab::DiscreteMeasure random_measure(std::mt19937_64& rng, int n, int atoms, double separation,
                                                 double box = 1.5) {
  std::uniform_real_distribution<double> u(-box, box), w(0.2, 1.0);
  std::vector<Vector> pts;
  while (static_cast<int>(pts.size()) < atoms) {
    Vector c(n);
    for (int i = 0; i < n; ++i) c(i) = u(rng);
    if (std::all_of(pts.begin(), pts.end(), [&](const Vector& p) { return (p - c).norm() >= separation; }))
      pts.push_back(c);
  }
  std::vector<double> ws;
  double s = 0;
  for (int j = 0; j < atoms; ++j) s += ws.emplace_back(w(rng));
  for (double& x : ws) x /= s;
  double total = 0;
  for (int j = 0; j + 1 < atoms; ++j) total += ws[static_cast<std::size_t>(j)];
  ws.back() = 1.0 - total;
  return momentlab::DiscreteMeasure(std::move(pts), std::move(ws));
}

/// Asymptotic Kolmogorov survival function Q(x) = P(sqrt(n) D_n > x).
inline double kolmogorov_sf(double x) {
  if (x <= 0) return 1.0;
  if (x < 1.0) {
    // Theta-function form converges fast for small x.
    const double pi2 = M_PI * M_PI;
    double s = 0;
    for (int k = 1; k <= 50; ++k) s += std::exp(-(2 * k - 1) * (2 * k - 1) * pi2 / (8 * x * x));
    return 1.0 - std::sqrt(2 * M_PI) / x * s;
  }
  double s = 0;
  for (int k = 1; k <= 100; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  return s;
}

/// KS p-value of a sample against N(0, sigma^2), with the usual
/// finite-sample correction sqrt(n) + 0.12 + 0.11/sqrt(n).
inline double ks_normal_pvalue(std::vector<double> xs, double sigma) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = 0.5 * std::erfc(-xs[i] / (sigma * std::sqrt(2.0)));
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double rn = std::sqrt(n);
  return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace testing
