#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "momentlab/linalg.hpp"

namespace momentlab {

/// A Hilbertian seminorm on R^n, stored as its symmetric positive
/// semidefinite Gram matrix.  p(v) = sqrt(v^T G v).
///
/// Rank and kernel decisions use the relative cutoff psd_tol * lambda_max;
/// eigenvalues at or below the cutoff belong to the kernel.  The spectral
/// decomposition is computed once at construction; instances are immutable
/// and cheap to copy.
class GramForm {
 public:
  static constexpr double kDefaultPsdTol = 1e-10;

  explicit GramForm(Matrix gram, double psd_tol = kDefaultPsdTol);

  static GramForm identity(Eigen::Index n, double psd_tol = kDefaultPsdTol);
  static GramForm diagonal(const Vector& d, double psd_tol = kDefaultPsdTol);

  Eigen::Index dim() const noexcept { return gram_.rows(); }
  const Matrix& gram() const noexcept { return gram_; }
  double psd_tol() const noexcept { return psd_tol_; }

  /// v^T G v with round-off below zero clamped to 0.
  double quadratic(const Vector& v) const;
  double operator()(const Vector& v) const;
  double inner(const Vector& v, const Vector& w) const;

  const Vector& eigenvalues() const noexcept { return spectrum_->values; }
  const Matrix& eigenvectors() const noexcept { return spectrum_->vectors; }
  double lambda_max() const noexcept;
  double rank_cutoff() const noexcept { return psd_tol_ * lambda_max(); }
  Eigen::Index rank() const noexcept;
  bool is_diagonal() const noexcept;

  /// Euclidean-orthonormal basis of ker(G) (columns).
  Matrix kernel() const;
  /// Columns u_i / sqrt(lambda_i) over the range: a complete p-orthonormal
  /// system modulo the kernel.
  Matrix whitening() const;
  /// Spectral pseudo-inverse with the rank cutoff applied.
  Matrix pseudo_inverse() const;

  /// Gram matrix of the seminorm c * p.
  GramForm scaled(double c) const;
  /// The form B^T G B, i.e. p restricted to the span of B's columns and
  /// expressed in those coordinates.
  GramForm restricted(const Matrix& basis) const;
  /// Principal sub-form on a set of coordinates.
  GramForm sub_form(std::span<const int> coords) const;

 private:
  Matrix gram_;
  double psd_tol_;
  std::shared_ptr<const SymmetricSpectrum> spectrum_;
};

/// A linear functional l(v) = coeffs . v on R^n.
struct DualFunctional {
  Vector coeffs;

  Eigen::Index dim() const noexcept { return coeffs.size(); }
  double operator()(const Vector& v) const;
};

/// An ordered q-orthonormal family stored column-wise, with the indices of
/// input vectors that were dropped as degenerate.
struct OrthonormalSystem {
  GramForm form;
  Matrix vectors;
  bool complete = false;
  std::vector<std::size_t> dropped;

  Eigen::Index size() const noexcept { return vectors.cols(); }
  Vector vector(Eigen::Index i) const { return vectors.col(i); }
  /// max |<e_i, e_j>_q - delta_ij|.
  double orthonormality_error() const;
};

double evaluate(const GramForm& p, const Vector& v);

/// 1/2 (p(v+w)^2 - p(v)^2 - p(w)^2).
double polarize(const GramForm& p, const Vector& v, const Vector& w);

std::vector<Vector> kernel_basis(const GramForm& p);

/// Operator seminorm sup_{p(v) <= 1} |l(v)|; infinite when l does not
/// vanish on ker(p).
ExtendedReal dual_norm(const GramForm& q, const DualFunctional& l);
ExtendedReal dual_norm(const GramForm& q, const Vector& coeffs);

/// Whether l vanishes on ker(q) to within tolerance.
bool is_continuous(const GramForm& q, const Vector& coeffs);

/// Modified Gram-Schmidt in the q inner product, with one
/// re-orthogonalization pass.  Vectors whose residual q-norm falls below
/// tol relative to their original size are dropped.
OrthonormalSystem gram_schmidt(const GramForm& q, const std::vector<Vector>& vectors,
                               double tol = 1e-10);

/// Whether ker(q) is contained in ker(p): every kernel vector of q has
/// p-norm^2 at most psd_tol * lambda_max(G_p).
bool kernel_contained(const GramForm& q, const GramForm& p);

/// A complete q-orthonormal system whose members are mutually
/// p-orthogonal, sorted by decreasing p(e).  Throws KernelNotContained when
/// ker(q) is not inside ker(p).
OrthonormalSystem simultaneous_diagonalize(const GramForm& p, const GramForm& q);

}  // namespace momentlab
