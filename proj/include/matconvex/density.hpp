#pragma once

#include <vector>

#include "matconvex/linalg.hpp"
#include "matconvex/random.hpp"

namespace matconvex {

using Dims = std::vector<Eigen::Index>;

/// Positive, unit-trace operator on a tensor product of factors `dims`.
class DensityOperator {
 public:
  static constexpr double kTol = 1e-10;

  /// Throws ValidationError unless the matrix is PSD and of unit trace
  /// within kTol and prod(dims) == dim.
  DensityOperator(HermitianMatrix matrix, Dims dims);
  /// Single-factor state.
  explicit DensityOperator(HermitianMatrix matrix);

  const HermitianMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  Eigen::Index dim() const noexcept { return matrix_.dim(); }
  std::size_t factors() const noexcept { return dims_.size(); }

  /// Rank-one projection onto a normalized copy of psi.
  static DensityOperator pure(const CVector& psi, Dims dims);
  static DensityOperator maximally_mixed(Dims dims);
  static DensityOperator product(const DensityOperator& a, const DensityOperator& b);

 private:
  HermitianMatrix matrix_;
  Dims dims_;
};

Eigen::Index product_of(const Dims& dims);

/// Hilbert-Schmidt ensemble: G G* / Tr(G G*), G complex Gaussian.
DensityOperator random_density(const Dims& dims, Rng& rng);
DensityOperator random_density(const Dims& dims, const RandomSpec& spec);
/// Haar-random pure state.
DensityOperator random_pure_state(const Dims& dims, Rng& rng);

}  // namespace matconvex
