#include "matconvex/random.hpp"

#include <cmath>
#include <numbers>

namespace matconvex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(const RandomSpec& spec)
    : engine_(splitmix64(splitmix64(spec.seed) ^ (spec.stream_id * 0xd1b54a32d192ed03ULL))) {}

double Rng::uniform() {
  // 53 random bits, shifted by half a unit so 0 is never produced.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  return HermitianMatrix::hermitian_part(ginibre(n, n, rng));
}

HermitianMatrix random_hermitian(Eigen::Index n, const RandomSpec& spec) {
  Rng rng(spec);
  return random_hermitian(n, rng);
}

HermitianMatrix random_in_window(Eigen::Index n, const SpectrumWindow& window, Rng& rng) {
  const auto [lo, hi] = window.compact_core();
  RVector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) lambda(i) = rng.uniform(lo, hi);
  const CMatrix u = haar_unitary(n, rng);
  return HermitianMatrix::hermitian_part(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
}

HermitianMatrix random_in_window(Eigen::Index n, const SpectrumWindow& window,
                                 const RandomSpec& spec) {
  Rng rng(spec);
  return random_in_window(n, window, rng);
}

CMatrix haar_unitary(Eigen::Index n, Rng& rng) {
  const CMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

CMatrix haar_unitary(Eigen::Index n, const RandomSpec& spec) {
  Rng rng(spec);
  return haar_unitary(n, rng);
}

HermitianMatrix random_direction(Eigen::Index n, Rng& rng) {
  for (;;) {
    HermitianMatrix h = random_hermitian(n, rng);
    const double norm = operator_norm(h);
    if (norm > 1e-6) return h * (1.0 / norm);
  }
}

HermitianMatrix random_direction(Eigen::Index n, const RandomSpec& spec) {
  Rng rng(spec);
  return random_direction(n, rng);
}

}  // namespace matconvex
