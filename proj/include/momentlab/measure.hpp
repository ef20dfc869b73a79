#pragma once

#include <vector>

#include "momentlab/linalg.hpp"

namespace momentlab {

/// A finitely supported probability measure on R^n.  Weights are
/// nonnegative and sum to 1 within 1e-12; zero-weight atoms are kept but
/// are not part of the support.
class DiscreteMeasure {
 public:
  static constexpr double kMassTol = 1e-12;

  DiscreteMeasure(std::vector<Vector> atoms, std::vector<double> weights);

  static DiscreteMeasure point_mass(const Vector& c);
  /// Equal weights on the given atoms.
  static DiscreteMeasure uniform(std::vector<Vector> atoms);

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Vector>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Vector& atom(std::size_t i) const { return atoms_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }

  /// Indices of atoms with positive weight.
  std::vector<std::size_t> support() const;

  /// Sum of w_j c_j c_j^T.
  Matrix second_moment_matrix() const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<Vector> atoms_;
  std::vector<double> weights_;
};

}  // namespace momentlab
