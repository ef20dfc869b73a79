#include "momentlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

Matrix hankel(const std::vector<double>& m, int d) {
  Matrix h(d + 1, d + 1);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) h(i, j) = m[static_cast<std::size_t>(i + j)];
  return h;
}

int rank_of(const Matrix& m) { return static_cast<int>(numerical_rank(m, kFlatRankTol)); }

// r-point Gauss rule from m_0..m_(2r-1): Chebyshev's algorithm for the
// recurrence coefficients, then eigen-decomposition of the Jacobi matrix.
std::pair<std::vector<double>, std::vector<double>> gauss_rule(const std::vector<double>& m, int r) {
  const int len = 2 * r;
  std::vector<double> alpha(static_cast<std::size_t>(r)), beta(static_cast<std::size_t>(r));
  std::vector<double> prev(static_cast<std::size_t>(len), 0.0), cur(m.begin(), m.begin() + len);
  alpha[0] = m[1] / m[0];
  beta[0] = m[0];
  for (int k = 1; k < r; ++k) {
    std::vector<double> next(static_cast<std::size_t>(len), 0.0);
    for (int l = k; l < len - k; ++l)
      next[l] = cur[l + 1] - alpha[k - 1] * cur[l] - beta[k - 1] * prev[l];
    require(next[k] > 0.0 && cur[k - 1] > 0.0, ErrorKind::IllConditioned,
            "recurrence broke down at step " + std::to_string(k));
    alpha[k] = next[k + 1] / next[k] - cur[k] / cur[k - 1];
    beta[k] = next[k] / cur[k - 1];
    prev = std::move(cur);
    cur = std::move(next);
  }
  Matrix j = Matrix::Zero(r, r);
  for (int k = 0; k < r; ++k) {
    j(k, k) = alpha[k];
    if (k + 1 < r) j(k, k + 1) = j(k + 1, k) = std::sqrt(beta[k + 1]);
  }
  const auto spec = symmetric_spectrum(j);
  std::vector<double> nodes, weights;
  for (int k = 0; k < r; ++k) {
    nodes.push_back(spec.values(k));
    weights.push_back(beta[0] * spec.vectors(0, k) * spec.vectors(0, k));
  }
  return {nodes, weights};
}

double monomial_at(const Vector& c, const MultiIndex& alpha) {
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] > 0) v *= std::pow(c(static_cast<Eigen::Index>(i)), alpha[i]);
  return v;
}

// Nonnegative, summing to exactly 1 up to rounding.
std::vector<double> normalized(std::vector<double> w) {
  for (double& x : w) {
    require(x >= -1e-10, ErrorKind::IllConditioned, "recovered weight " + std::to_string(x) + " is negative");
    x = std::max(x, 0.0);
  }
  double s = 0.0;
  for (double x : w) s += x;
  require(s > 0.0, ErrorKind::IllConditioned, "recovered weights vanish");
  for (double& x : w) x /= s;
  return w;
}

}  // namespace

Vector nnls(const Matrix& a, const Vector& b, int max_iter) {
  const Eigen::Index n = a.cols();
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff());
  auto solve_passive = [&](Vector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
    Matrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Vector zp = ap.colPivHouseholderQr().solve(b);
    z = Vector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };
  for (int iter = 0; iter < max_iter; ++iter) {
    const Vector grad = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!passive[static_cast<std::size_t>(i)] && grad(i) > best_val) {
        best_val = grad(i);
        best = i;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (;;) {
      Vector z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)] && z(i) <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double step = 1.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)] && z(i) <= 0.0) step = std::min(step, x(i) / (x(i) - z(i)));
      x += step * (z - x);
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)] && std::abs(x(i)) <= 1e-15) {
          passive[static_cast<std::size_t>(i)] = false;
          x(i) = 0.0;
        }
    }
  }
  return x;
}

SolverResult solve_univariate(const std::vector<double>& m) {
  require(m.size() >= 2, ErrorKind::InvalidArgument, "need moments m_0 and m_1 at least");
  require(std::abs(m[0] - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "m_0 must equal 1");
  for (double v : m) require(std::isfinite(v), ErrorKind::InvalidArgument, "moment is not finite");
  const int big_k = static_cast<int>(m.size()) - 1;
  const int d = big_k / 2;
  const Matrix hd = hankel(m, d);
  require(is_psd(hd, 1e-10), ErrorKind::NotPSD, "Hankel matrix is not positive semidefinite");
  const int r = rank_of(hd);
  const int r_prev = d > 0 ? rank_of(hankel(m, d - 1)) : 0;

  int nodes_count = 0;
  if (r <= d) {
    require(r >= 1 && rank_of(hankel(m, r - 1)) == r, ErrorKind::RankNotFlat,
            "Hankel ranks are not flat: rank H_" + std::to_string(d) + " = " + std::to_string(r));
    nodes_count = r;
  } else {
    require(big_k % 2 == 1, ErrorKind::RankNotFlat,
            "Hankel matrix has full rank and no odd moment to close the rule");
    nodes_count = d + 1;
  }
  auto [nodes, weights] = gauss_rule(m, nodes_count);
  weights = normalized(weights);

  std::vector<Vector> atoms;
  for (double x : nodes) atoms.push_back(Vector::Constant(1, x));
  DiscreteMeasure nu(std::move(atoms), std::move(weights));
  double residual = 0.0;
  double scale = 1.0;
  for (int k = 0; k <= big_k; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) s += nu.weight(j) * std::pow(nu.atom(j)(0), k);
    residual = std::max(residual, std::abs(s - m[static_cast<std::size_t>(k)]));
    scale = std::max(scale, std::abs(m[static_cast<std::size_t>(k)]));
  }
  require(residual <= 1e-6 * scale, ErrorKind::RankNotFlat,
          "Gauss rule misses the higher moments (residual " + std::to_string(residual) + ")");
  return {std::move(nu), residual, {r_prev, r}};
}

SolverResult solve_multivariate(const MomentFunctional& l, int d, std::uint64_t seed) {
  require(d >= 1, ErrorKind::InvalidArgument, "order must be at least 1");
  require(2 * d <= l.max_degree() || l.extendable(), ErrorKind::DegreeOverflow,
          "order " + std::to_string(d) + " needs moments of degree " + std::to_string(2 * d));
  const int n = l.dim();
  const auto basis = monomials_up_to(n, d);
  const int low_count = static_cast<int>(monomials_up_to(n, d - 1).size());
  const Matrix md = moment_matrix(l, d);
  require(is_psd(md, 1e-10), ErrorKind::NotPSD, "moment matrix is not positive semidefinite");
  const int r = rank_of(md);
  const int r_prev = rank_of(md.topLeftCorner(low_count, low_count));
  require(r == r_prev, ErrorKind::RankNotFlat,
          "rank M_" + std::to_string(d) + " = " + std::to_string(r) + " but rank M_" + std::to_string(d - 1) +
              " = " + std::to_string(r_prev));

  // M_d = V V^T with V = U_r sqrt(Lambda_r).
  const auto spec = symmetric_spectrum(symmetrize(md));
  const Eigen::Index size = md.rows();
  Matrix v(size, r);
  for (int k = 0; k < r; ++k) {
    const Eigen::Index src = size - 1 - k;
    v.col(k) = spec.vectors.col(src) * std::sqrt(std::max(spec.values(src), 0.0));
  }

  // Greedy choice of r independent rows among monomials of degree < d.
  std::vector<int> chosen;
  Matrix picked(0, r);
  for (int i = 0; i < low_count && static_cast<int>(chosen.size()) < r; ++i) {
    Matrix trial(picked.rows() + 1, r);
    trial << picked, v.row(i);
    if (static_cast<int>(numerical_rank(trial, 1e-8)) == trial.rows()) {
      picked = trial;
      chosen.push_back(i);
    }
  }
  require(static_cast<int>(chosen.size()) == r, ErrorKind::IllConditioned, "could not extract a monomial basis");
  Eigen::JacobiSVD<Matrix> svd(picked);
  const Vector sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  require(cond <= 1e10, ErrorKind::IllConditioned, "basis extraction has condition number " + std::to_string(cond));
  const Matrix u = v * picked.inverse();

  std::map<MultiIndex, Eigen::Index, GrlexLess> row_of;
  for (std::size_t i = 0; i < basis.size(); ++i) row_of[basis[i]] = static_cast<Eigen::Index>(i);
  std::vector<Matrix> mult(static_cast<std::size_t>(n), Matrix(r, r));
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < r; ++b) {
      MultiIndex alpha = basis[static_cast<std::size_t>(chosen[static_cast<std::size_t>(b)])];
      alpha[static_cast<std::size_t>(i)] += 1;
      mult[static_cast<std::size_t>(i)].row(b) = u.row(row_of.at(alpha));
    }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  Matrix combo = Matrix::Zero(r, r);
  for (int i = 0; i < n; ++i) combo += coef(rng) * mult[static_cast<std::size_t>(i)];
  Eigen::RealSchur<Matrix> schur(combo);
  require(schur.info() == Eigen::Success, ErrorKind::IllConditioned, "Schur decomposition failed");
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();
  for (int k = 0; k + 1 < r; ++k)
    require(std::abs(t(k + 1, k)) <= 1e-8 * std::max(1.0, t.cwiseAbs().maxCoeff()), ErrorKind::IllConditioned,
            "multiplication matrices have complex eigenvalues");

  std::vector<Vector> atoms;
  for (int j = 0; j < r; ++j) {
    Vector c(n);
    for (int i = 0; i < n; ++i) c(i) = q.col(j).dot(mult[static_cast<std::size_t>(i)] * q.col(j));
    atoms.push_back(c);
  }
  std::sort(atoms.begin(), atoms.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });

  const auto all = monomials_up_to(n, 2 * d);
  Matrix a(static_cast<Eigen::Index>(all.size()), r);
  Vector rhs(static_cast<Eigen::Index>(all.size()));
  for (std::size_t k = 0; k < all.size(); ++k) {
    rhs(static_cast<Eigen::Index>(k)) = l.moment(all[k]);
    for (int j = 0; j < r; ++j) a(static_cast<Eigen::Index>(k), j) = monomial_at(atoms[static_cast<std::size_t>(j)], all[k]);
  }
  Vector w = a.colPivHouseholderQr().solve(rhs);
  if (w.minCoeff() < -1e-8) w = nnls(a, rhs);
  const std::vector<double> weights = normalized(std::vector<double>(w.data(), w.data() + w.size()));

  DiscreteMeasure nu(atoms, weights);
  double residual = 0.0;
  for (const auto& alpha : monomials_up_to(n, l.max_degree())) {
    double s = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) s += nu.weight(j) * monomial_at(nu.atom(j), alpha);
    residual = std::max(residual, std::abs(s - l.moment(alpha)));
  }
  return {std::move(nu), residual, {r_prev, r}};
}

SolverResult solve_multivariate_auto(const MomentFunctional& l, std::uint64_t seed) {
  for (int d = 1; 2 * d <= l.max_degree(); ++d) {
    try {
      return solve_multivariate(l, d, seed);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankNotFlat) throw;
    }
  }
  raise(ErrorKind::RankNotFlat, "no flat order up to degree " + std::to_string(l.max_degree()));
}

}  // namespace momentlab
