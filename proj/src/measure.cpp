#include "momentlab/measure.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "momentlab/errors.hpp"

namespace momentlab {

DiscreteMeasure::DiscreteMeasure(std::vector<Vector> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  require(!atoms_.empty(), ErrorKind::InvalidArgument, "measure needs at least one atom");
  require(atoms_.size() == weights_.size(), ErrorKind::DimensionMismatch,
          "atom and weight counts differ");
  dim_ = atoms_.front().size();
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    require(atoms_[i].size() == dim_, ErrorKind::DimensionMismatch, "atoms have different lengths");
    require(atoms_[i].allFinite(), ErrorKind::InvalidArgument, "atom has non-finite coordinates");
    require(std::isfinite(weights_[i]) && weights_[i] >= 0.0, ErrorKind::InvalidArgument,
            "weight " + std::to_string(i) + " is negative");
    total += weights_[i];
  }
  require(std::abs(total - 1.0) <= kMassTol, ErrorKind::InvalidArgument,
          "weights sum to " + std::to_string(total) + ", not 1");
}

DiscreteMeasure DiscreteMeasure::point_mass(const Vector& c) { return DiscreteMeasure({c}, {1.0}); }

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Vector> atoms) {
  const double w = 1.0 / static_cast<double>(atoms.size());
  std::vector<double> weights(atoms.size(), w);
  // Put the rounding remainder on the last atom so the sum is exact enough.
  if (!weights.empty())
    weights.back() = 1.0 - std::accumulate(weights.begin(), weights.end() - 1, 0.0);
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

std::vector<std::size_t> DiscreteMeasure::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0.0) out.push_back(i);
  return out;
}

Matrix DiscreteMeasure::second_moment_matrix() const {
  Matrix m = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < atoms_.size(); ++i) m.noalias() += weights_[i] * atoms_[i] * atoms_[i].transpose();
  return symmetrize(m);
}

}  // namespace momentlab
