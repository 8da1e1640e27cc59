#pragma once

#include <string>
#include <utility>
#include <vector>

#include "matconvex/density.hpp"
#include "matconvex/matrix_io.hpp"

namespace matconvex {

/// Eigenvalues at or below this count as exact zeros in entropies.
inline constexpr double kEntropyZeroFloor = 1e-14;
/// Eigenvalue threshold defining the support in relative entropy.
inline constexpr double kSupportThreshold = 1e-12;
/// Default one-sided tolerance on reported inequality slacks.
inline constexpr double kSlackTolerance = 1e-8;

/// Named values and inequality slacks, in insertion order. A slack is
/// (right side - left side) of an inequality and should be >= -tolerance.
struct EntropyReport {
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, double>> slacks;

  double value(const std::string& name) const;
  double slack(const std::string& name) const;
  double worst_slack() const;
  json to_json() const;
};

/// -Tr rho log rho, natural log.
double von_neumann_entropy(const DensityOperator& rho);
/// Same for any PSD matrix (no trace check).
double spectral_entropy(const HermitianMatrix& m);

/// Reduced state on the factors in `keep` (0-based, in increasing order of
/// factor index whatever the order given). Throws ValidationError for an
/// empty, repeated or out-of-range index set.
DensityOperator partial_trace(const DensityOperator& rho, std::vector<std::size_t> keep);

/// S(rho_ab) - S(rho_b) with factor index sets a, b (0-based, disjoint).
double conditional_entropy(const DensityOperator& rho, const std::vector<std::size_t>& part_a,
                           const std::vector<std::size_t>& part_b);

/// S(A|B) = -Tr[A (log A - log B)]. Returns -infinity when A has weight
/// outside the support of B. Throws DomainError for a non-PSD argument.
double relative_entropy(const HermitianMatrix& a, const HermitianMatrix& b);

/// |Tr[A^(1-eps) B^eps - A] / eps - S(A|B)| for strictly positive A, B.
double epsilon_limit_residual(const HermitianMatrix& a, const HermitianMatrix& b, double eps);

/// Frobenius distance from the Monte Carlo average of (I (x) U*) rho (I (x) U)
/// over Haar U on the second factor to rho_1 (x) I / d_2.
double haar_average_residual(const DensityOperator& rho12, std::size_t samples,
                             const RandomSpec& spec);

/// Orthonormal eigenbasis (columns) of a marginal. Inside each cluster of
/// eigenvalues closer than 1e-10 the basis is fixed by projecting e_0, e_1, ...
/// onto the eigenspace in order and orthonormalizing, skipping projections of
/// norm below 1e-3 left after removing the vectors already chosen.
CMatrix pinching_basis(const HermitianMatrix& marginal);

/// Product eigenbasis of the two marginals of a bipartite state.
CMatrix product_eigenbasis(const DensityOperator& rho12);

/// Removes every off-diagonal element in the product eigenbasis; the result
/// is returned in the computational basis.
DensityOperator pinch(const DensityOperator& rho12);

/// Average of D* rho D over random diagonal phase unitaries D in the product
/// eigenbasis, returned in the computational basis.
DensityOperator pinch_monte_carlo(const DensityOperator& rho12, std::size_t samples,
                                  const RandomSpec& spec);

/// S(1|rest) of the mixture minus the mixture of S(1|rest), with 1 the first
/// factor; lambda in [0, 1] is the weight of rho_b.
double lieb_ruskai_concavity_gap(const DensityOperator& rho_a, const DensityOperator& rho_b,
                                 double lambda);

/// Slacks "pinching" (S(pinched) - S12) and "classical_subadditivity"
/// (S1 + S2 - S(pinched)); value "marginal_deviation" is the larger Frobenius
/// distance between a marginal of the pinched state and the original one.
EntropyReport subadditivity_report(const DensityOperator& rho12);

/// quantum_part = S(pinched) - S12, classical_part = S1 + S2 - S(pinched).
EntropyReport mutual_information_decomposition(const DensityOperator& rho12);

/// rho_12 (x) I / d_3.
DensityOperator uhlmann_tilde(const DensityOperator& rho123);

/// Slack "ssa" = (S12 - S2) - (S123 - S23), plus the tilde-state values.
EntropyReport ssa_report(const DensityOperator& rho123);

/// Mixes rho123 half and half with a copy conjugated by a Haar unitary on
/// the third factor. Returns the Lieb-Ruskai gap of that mixture and the SSA
/// slack of rho123; concavity forces 0 <= gap <= slack.
std::pair<double, double> uhlmann_coherence(const DensityOperator& rho123, Rng& rng);

/// State file: shared matrix format with mandatory `dims`.
DensityOperator density_from_json(const json& doc);
json density_to_json(const DensityOperator& rho);

/// Standard examples.
DensityOperator bell_state();
DensityOperator ghz_state();

}  // namespace matconvex
