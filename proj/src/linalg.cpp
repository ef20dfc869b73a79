#include "momentlab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "momentlab/errors.hpp"

namespace momentlab {

double ExtendedReal::value() const {
  require(!infinite_, ErrorKind::InvalidArgument, "value() called on an infinite quantity");
  return value_;
}

SymmetricSpectrum symmetric_spectrum(const Matrix& m) {
  if (m.rows() == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  require(es.info() == Eigen::Success, ErrorKind::NotPSD, "eigen-decomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_psd(const Matrix& m, double rel_tol) {
  if (m.rows() == 0) return true;
  const auto spec = symmetric_spectrum(symmetrize(m));
  const double top = std::max(1.0, std::abs(spec.values.maxCoeff()));
  return spec.values.minCoeff() >= -rel_tol * top;
}

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cut = rel_tol * s(0);
  return static_cast<std::size_t>((s.array() > cut).count());
}

Matrix orthonormal_span(const Matrix& columns, double rel_tol) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(columns);
  qr.setThreshold(rel_tol);
  const auto rank = qr.rank();
  Matrix q = qr.householderQ();
  return q.leftCols(rank);
}

ExtendedReal generalized_max_eigenvalue(const Matrix& a, const Matrix& g,
                                        double psd_tol, double kernel_tol) {
  require(a.rows() == g.rows() && a.cols() == g.cols() && a.rows() == a.cols(),
          ErrorKind::DimensionMismatch, "generalized eigenproblem shapes differ");
  const Eigen::Index n = a.rows();
  if (n == 0) return ExtendedReal::finite(0.0);
  const double scale_a = max_abs(a);
  if (scale_a == 0.0) return ExtendedReal::finite(0.0);

  const auto spec = symmetric_spectrum(symmetrize(g));
  const double top = std::max(spec.values.maxCoeff(), 0.0);
  const double cut = psd_tol * top;
  std::vector<Eigen::Index> range, kernel;
  for (Eigen::Index i = 0; i < n; ++i) (spec.values(i) > cut ? range : kernel).push_back(i);

  if (!kernel.empty()) {
    Matrix k(n, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) k.col(j) = spec.vectors.col(kernel[j]);
    // Cross terms matter too: a(k, r) != 0 already makes the ratio unbounded.
    const Matrix on_kernel = k.transpose() * a;
    if (max_abs(on_kernel) > kernel_tol * scale_a) return ExtendedReal::infinity();
  }
  if (range.empty()) return ExtendedReal::finite(0.0);

  Matrix w(n, static_cast<Eigen::Index>(range.size()));
  for (std::size_t j = 0; j < range.size(); ++j)
    w.col(j) = spec.vectors.col(range[j]) / std::sqrt(spec.values(range[j]));
  const Matrix whitened = symmetrize(w.transpose() * a * w);
  const auto ws = symmetric_spectrum(whitened);
  return ExtendedReal::finite(std::max(ws.values.maxCoeff(), 0.0));
}

void canonicalize_sign(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return;
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * big) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

Matrix stack_columns(const std::vector<Vector>& vs, Eigen::Index rows) {
  Matrix out(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) {
    require(vs[j].size() == rows, ErrorKind::DimensionMismatch, "vector length differs from dimension");
    out.col(static_cast<Eigen::Index>(j)) = vs[j];
  }
  return out;
}

}  // namespace momentlab
