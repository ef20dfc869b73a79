#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace momentlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A nonnegative quantity that may be +infinity.  Kept as a tagged value
/// instead of a floating infinity so reports stay serializable and
/// comparisons are explicit.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// Throws InvalidArgument when infinite.
  double value() const;
  double value_or(double fallback) const noexcept { return infinite_ ? fallback : value_; }

  bool operator==(const ExtendedReal&) const = default;

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Ascending eigenvalues and matching orthonormal eigenvectors of a
/// symmetric matrix.
struct SymmetricSpectrum {
  Vector values;
  Matrix vectors;
};

SymmetricSpectrum symmetric_spectrum(const Matrix& m);

/// Largest absolute entry, 0 for empty matrices.
double max_abs(const Matrix& m);

Matrix symmetrize(const Matrix& m);

/// Eigenvalues >= -rel_tol * max(1, lambda_max).
bool is_psd(const Matrix& m, double rel_tol);

/// Number of singular values above rel_tol * sigma_max.
std::size_t numerical_rank(const Matrix& m, double rel_tol);

/// Euclidean-orthonormal basis (columns) of the span of the given columns.
Matrix orthonormal_span(const Matrix& columns, double rel_tol = 1e-12);

/// sup over v of (v^T a v) / (v^T g v) for symmetric a and PSD g.
/// Infinite when a is not annihilated by the kernel of g (to within
/// kernel_tol relative to the size of a).  Returns 0 for a == 0.
ExtendedReal generalized_max_eigenvalue(const Matrix& a, const Matrix& g,
                                        double psd_tol = 1e-10,
                                        double kernel_tol = 1e-9);

/// Sign convention used for reported eigen-bases: first entry whose
/// magnitude exceeds 1e-12 * max magnitude is made positive.
void canonicalize_sign(Eigen::Ref<Vector> v);

/// Column-stack a list of vectors of equal length.
Matrix stack_columns(const std::vector<Vector>& vs, Eigen::Index rows);

}  // namespace momentlab
