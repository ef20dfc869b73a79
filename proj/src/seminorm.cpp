#include "momentlab/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "momentlab/errors.hpp"

namespace momentlab {

namespace {

constexpr double kSymmetryTol = 1e-10;
// Relative size of the kernel component above which a functional is not
// continuous.
constexpr double kContinuityTol = 1e-8;

void check_dim(const GramForm& p, const Vector& v, const char* what) {
  require(v.size() == p.dim(), ErrorKind::DimensionMismatch,
          std::string(what) + ": expected length " + std::to_string(p.dim()) + ", got " +
              std::to_string(v.size()));
}

}  // namespace

GramForm::GramForm(Matrix gram, double psd_tol) : psd_tol_(psd_tol) {
  require(gram.rows() == gram.cols(), ErrorKind::DimensionMismatch, "Gram matrix must be square");
  require(psd_tol >= 0.0, ErrorKind::InvalidArgument, "psd_tol must be nonnegative");
  require(gram.allFinite(), ErrorKind::InvalidArgument, "Gram matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(gram));
  require(max_abs(gram - gram.transpose()) <= kSymmetryTol * scale, ErrorKind::NotPSD,
          "Gram matrix is not symmetric");
  gram_ = symmetrize(gram);
  spectrum_ = std::make_shared<const SymmetricSpectrum>(symmetric_spectrum(gram_));
  if (gram_.rows() > 0) {
    const double top = std::max(1.0, lambda_max());
    require(spectrum_->values.minCoeff() >= -psd_tol_ * top, ErrorKind::NotPSD,
            "Gram matrix has eigenvalue " + std::to_string(spectrum_->values.minCoeff()));
  }
}

GramForm GramForm::identity(Eigen::Index n, double psd_tol) {
  return GramForm(Matrix::Identity(n, n), psd_tol);
}

GramForm GramForm::diagonal(const Vector& d, double psd_tol) {
  return GramForm(Matrix(d.asDiagonal()), psd_tol);
}

double GramForm::lambda_max() const noexcept {
  return spectrum_->values.size() == 0 ? 0.0 : std::max(spectrum_->values.maxCoeff(), 0.0);
}

Eigen::Index GramForm::rank() const noexcept {
  const double cut = rank_cutoff();
  return static_cast<Eigen::Index>((spectrum_->values.array() > cut).count());
}

bool GramForm::is_diagonal() const noexcept {
  for (Eigen::Index i = 0; i < dim(); ++i)
    for (Eigen::Index j = 0; j < dim(); ++j)
      if (i != j && gram_(i, j) != 0.0) return false;
  return true;
}

double GramForm::quadratic(const Vector& v) const {
  check_dim(*this, v, "quadratic form");
  const double value = v.dot(gram_ * v);
  if (value >= 0.0) return value;
  const double slack = psd_tol_ * std::max(1.0, lambda_max()) * v.squaredNorm();
  require(value >= -slack, ErrorKind::NotPSD, "quadratic form is negative: " + std::to_string(value));
  return 0.0;
}

double GramForm::operator()(const Vector& v) const { return std::sqrt(quadratic(v)); }

double GramForm::inner(const Vector& v, const Vector& w) const {
  check_dim(*this, v, "inner product");
  check_dim(*this, w, "inner product");
  return v.dot(gram_ * w);
}

Matrix GramForm::kernel() const {
  const double cut = rank_cutoff();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (spectrum_->values(i) <= cut) idx.push_back(i);
  Matrix k(dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) k.col(static_cast<Eigen::Index>(j)) = spectrum_->vectors.col(idx[j]);
  return k;
}

Matrix GramForm::whitening() const {
  const double cut = rank_cutoff();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (spectrum_->values(i) > cut) idx.push_back(i);
  Matrix w(dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    w.col(static_cast<Eigen::Index>(j)) =
        spectrum_->vectors.col(idx[j]) / std::sqrt(spectrum_->values(idx[j]));
  return w;
}

Matrix GramForm::pseudo_inverse() const {
  const Matrix w = whitening();
  return w * w.transpose();
}

GramForm GramForm::scaled(double c) const { return GramForm(c * c * gram_, psd_tol_); }

GramForm GramForm::restricted(const Matrix& basis) const {
  require(basis.rows() == dim(), ErrorKind::DimensionMismatch, "restriction basis has wrong length");
  return GramForm(symmetrize(basis.transpose() * gram_ * basis), psd_tol_);
}

GramForm GramForm::sub_form(std::span<const int> coords) const {
  const auto k = static_cast<Eigen::Index>(coords.size());
  Matrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    require(coords[i] >= 0 && coords[i] < dim(), ErrorKind::DimensionMismatch, "coordinate out of range");
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = gram_(coords[i], coords[j]);
  }
  return GramForm(sub, psd_tol_);
}

double DualFunctional::operator()(const Vector& v) const {
  require(v.size() == coeffs.size(), ErrorKind::DimensionMismatch, "functional applied to vector of wrong length");
  return coeffs.dot(v);
}

double OrthonormalSystem::orthonormality_error() const {
  if (vectors.cols() == 0) return 0.0;
  const Matrix g = vectors.transpose() * form.gram() * vectors;
  return max_abs(g - Matrix::Identity(g.rows(), g.cols()));
}

double evaluate(const GramForm& p, const Vector& v) { return p(v); }

double polarize(const GramForm& p, const Vector& v, const Vector& w) {
  check_dim(p, v, "polarize");
  check_dim(p, w, "polarize");
  // Raw quadratic values; clamping here would break the identity for
  // indefinite combinations that are still exact in the PSD form.
  auto quad = [&](const Vector& x) { return x.dot(p.gram() * x); };
  return 0.5 * (quad(v + w) - quad(v) - quad(w));
}

std::vector<Vector> kernel_basis(const GramForm& p) {
  const Matrix k = p.kernel();
  std::vector<Vector> out;
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    Vector v = k.col(j);
    canonicalize_sign(v);
    out.push_back(std::move(v));
  }
  return out;
}

bool is_continuous(const GramForm& q, const Vector& coeffs) {
  require(coeffs.size() == q.dim(), ErrorKind::DimensionMismatch, "functional has wrong length");
  const double norm = coeffs.norm();
  if (norm == 0.0) return true;
  const Matrix k = q.kernel();
  if (k.cols() == 0) return true;
  return (k.transpose() * coeffs).norm() <= kContinuityTol * norm;
}

ExtendedReal dual_norm(const GramForm& q, const Vector& coeffs) {
  if (!is_continuous(q, coeffs)) return ExtendedReal::infinity();
  const Matrix w = q.whitening();
  return ExtendedReal::finite((w.transpose() * coeffs).norm());
}

ExtendedReal dual_norm(const GramForm& q, const DualFunctional& l) { return dual_norm(q, l.coeffs); }

OrthonormalSystem gram_schmidt(const GramForm& q, const std::vector<Vector>& vectors, double tol) {
  const Eigen::Index n = q.dim();
  std::vector<Vector> kept;
  std::vector<std::size_t> dropped;
  const double global = std::sqrt(std::max(q.lambda_max(), 0.0));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require(vectors[i].size() == n, ErrorKind::DimensionMismatch, "gram_schmidt input has wrong length");
    Vector v = vectors[i];
    const double before = std::max(q(v), global * v.norm());
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& e : kept) v -= q.inner(v, e) * e;
    const double after = q(v);
    if (before == 0.0 || after <= tol * before) {
      dropped.push_back(i);
      continue;
    }
    kept.push_back(v / after);
  }
  OrthonormalSystem sys{q, stack_columns(kept, n), false, std::move(dropped)};
  sys.complete = sys.size() == q.rank();
  return sys;
}

bool kernel_contained(const GramForm& q, const GramForm& p) {
  require(p.dim() == q.dim(), ErrorKind::DimensionMismatch, "seminorms on different dimensions");
  const Matrix k = q.kernel();
  const double cut = p.psd_tol() * p.lambda_max();
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    if (p.quadratic(k.col(j)) > cut) return false;
  return true;
}

OrthonormalSystem simultaneous_diagonalize(const GramForm& p, const GramForm& q) {
  require(kernel_contained(q, p), ErrorKind::KernelNotContained,
          "a q-null vector has positive p-norm");
  const Matrix w = q.whitening();
  const Matrix whitened_p = symmetrize(w.transpose() * p.gram() * w);
  const auto spec = symmetric_spectrum(whitened_p);
  Matrix e = w * spec.vectors;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(e.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return spec.values(a) > spec.values(b);
  });
  Matrix sorted(e.rows(), e.cols());
  for (std::size_t j = 0; j < order.size(); ++j) {
    Vector col = e.col(order[j]);
    canonicalize_sign(col);
    sorted.col(static_cast<Eigen::Index>(j)) = col;
  }
  return OrthonormalSystem{q, std::move(sorted), true, {}};
}

}  // namespace momentlab
