#pragma once

#include <cstdint>
#include <random>

#include "matconvex/linalg.hpp"

namespace matconvex {

/// Identifies a reproducible random stream. Trials use stream_id = base + trial,
/// so any single trial can be replayed from (seed, stream_id) alone.
struct RandomSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RandomSpec offset(std::uint64_t k) const { return {seed, stream_id + k}; }
  friend bool operator==(const RandomSpec&, const RandomSpec&) = default;
};

/// Deterministic generator for one stream. Uniforms are built from the raw
/// 64-bit output and normals by Box-Muller, so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(const RandomSpec& spec);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Complex complex_normal();  // E|z|^2 = 1
  std::uint64_t below(std::uint64_t n);  // uniform integer in [0, n)

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Matrix with i.i.d. standard complex Gaussian entries (E|z|^2 = 1).
CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// GUE-like sample (G + G*) / 2.
HermitianMatrix random_hermitian(Eigen::Index n, Rng& rng);
HermitianMatrix random_hermitian(Eigen::Index n, const RandomSpec& spec);

/// U diag(lambda) U* with U Haar and lambda uniform in the compact core of
/// the window (delta = 0.05 (b - a)). Throws DomainError if unbounded.
HermitianMatrix random_in_window(Eigen::Index n, const SpectrumWindow& window, Rng& rng);
HermitianMatrix random_in_window(Eigen::Index n, const SpectrumWindow& window,
                                 const RandomSpec& spec);

/// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal of R
/// rotated to the positive real axis.
CMatrix haar_unitary(Eigen::Index n, Rng& rng);
CMatrix haar_unitary(Eigen::Index n, const RandomSpec& spec);

/// Random Hermitian direction with unit operator norm.
HermitianMatrix random_direction(Eigen::Index n, Rng& rng);
HermitianMatrix random_direction(Eigen::Index n, const RandomSpec& spec);

}  // namespace matconvex
