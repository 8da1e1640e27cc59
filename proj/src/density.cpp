#include "matconvex/density.hpp"

#include <cmath>
#include <sstream>

namespace matconvex {

Eigen::Index product_of(const Dims& dims) {
  Eigen::Index p = 1;
  for (auto d : dims) p *= d;
  return p;
}

DensityOperator::DensityOperator(HermitianMatrix matrix, Dims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (dims_.empty()) throw ValidationError("state needs at least one tensor factor");
  for (auto d : dims_) {
    if (d < 1) throw ValidationError("tensor factor dimensions must be >= 1");
  }
  if (product_of(dims_) != matrix_.dim()) {
    std::ostringstream os;
    os << "factor dimensions multiply to " << product_of(dims_) << " but the state has dim "
       << matrix_.dim();
    throw ValidationError(os.str());
  }
  const double tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kTol) {
    std::ostringstream os;
    os << "state trace is " << tr << ", expected 1";
    throw ValidationError(os.str());
  }
  const double lo = min_eigenvalue(matrix_);
  if (lo < -kTol) {
    std::ostringstream os;
    os << "state is not positive: min eigenvalue " << lo;
    throw ValidationError(os.str());
  }
}

DensityOperator::DensityOperator(HermitianMatrix matrix)
    : DensityOperator(matrix, Dims{matrix.dim()}) {}

DensityOperator DensityOperator::pure(const CVector& psi, Dims dims) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("pure state vector must be non-zero");
  const CVector v = psi / norm;
  return DensityOperator(HermitianMatrix::hermitian_part(v * v.adjoint()), std::move(dims));
}

DensityOperator DensityOperator::maximally_mixed(Dims dims) {
  const auto n = product_of(dims);
  return DensityOperator(HermitianMatrix::identity(n) * (1.0 / n), std::move(dims));
}

DensityOperator DensityOperator::product(const DensityOperator& a, const DensityOperator& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityOperator(tensor(a.matrix(), b.matrix()), std::move(dims));
}

DensityOperator random_density(const Dims& dims, Rng& rng) {
  const auto n = product_of(dims);
  const CMatrix g = ginibre(n, n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(HermitianMatrix::hermitian_part(rho), dims);
}

DensityOperator random_density(const Dims& dims, const RandomSpec& spec) {
  Rng rng(spec);
  return random_density(dims, rng);
}

DensityOperator random_pure_state(const Dims& dims, Rng& rng) {
  const auto n = product_of(dims);
  return DensityOperator::pure(ginibre(n, 1, rng).col(0), dims);
}

}  // namespace matconvex
