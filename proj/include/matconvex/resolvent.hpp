#pragma once

#include <vector>

#include "matconvex/convexity.hpp"
#include "matconvex/matrix_io.hpp"

namespace matconvex {

/// A pole u outside the window (a, b). The associated function is
/// f_u(z) = sign / (u - z) with sign = -1 for u <= a and +1 for u >= b, which
/// is positive on the window in both cases.
class ResolventPoint {
 public:
  ResolventPoint(double u, SpectrumWindow window);

  double u() const noexcept { return u_; }
  const SpectrumWindow& window() const noexcept { return window_; }
  double sign() const noexcept { return u_ >= window_.upper() ? 1.0 : -1.0; }
  double f(double z) const { return sign() / (u_ - z); }

 private:
  double u_;
  SpectrumWindow window_;
};

/// Distance below which |u - lambda| is treated as a singular resolvent.
inline constexpr double kResolventSingularity = 1e-10;

/// sign * (u I - A)^{-1}, computed by LU (independent of the spectral route).
HermitianMatrix resolvent_value(const HermitianMatrix& a, const ResolventPoint& p);

/// d^2/dt^2 f_u(A + tQ) at t = 0, assembled as 2 X* X with
/// X = sqrt(R) Q R and R = sign * (u I - A)^{-1} positive definite.
HermitianMatrix resolvent_second_derivative(const HermitianMatrix& a, const HermitianMatrix& q,
                                            const ResolventPoint& p);

/// ||(A + D)^{-1} - A^{-1} + A^{-1} D (A + D)^{-1}||_F divided by the scale
/// ||A^{-1}|| (1 + ||D|| ||(A + D)^{-1}||) (operator norms). Inverses by LU.
double resolvent_identity_residual(const HermitianMatrix& a, const HermitianMatrix& delta);

struct PickAtom {
  double u;
  double w;
};

/// f(z) = alpha + beta z + gamma z^2 + sum_j w_j (z - c)(1 + u_j z) / (u_j - z)
/// with the atoms a discrete measure on the complement of the window.
struct PickRepresentation {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double c = 0.0;
  SpectrumWindow window{-1.0, 1.0};
  std::vector<PickAtom> atoms;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

double pick_eval_scalar(const PickRepresentation& rep, double z);

/// Atomwise evaluation: each atom expands into a signed resolvent plus an
/// affine remainder, so this route never diagonalizes A.
HermitianMatrix pick_eval_matrix(const PickRepresentation& rep, const HermitianMatrix& a);

/// The same value through the spectral calculus of pick_eval_scalar.
HermitianMatrix pick_eval_matrix_spectral(const PickRepresentation& rep, const HermitianMatrix& a);

/// Exact d^2/dt^2 of the represented function along A + tQ: 2 gamma Q^2 plus
/// positively weighted resolvent second derivatives.
HermitianMatrix pick_second_derivative(const PickRepresentation& rep, const HermitianMatrix& a,
                                       const HermitianMatrix& q);

/// The represented function as a ScalarFunction with its exact second derivative.
ScalarFunction pick_function(const PickRepresentation& rep);

/// |(z - c)(1 + u z)/(u - z) - [(1 + u^2)(u - c) sign f_u(z) - u z + u c - (1 + u^2)]|.
double elementary_decomposition_residual(double u, double c, double z, const SpectrumWindow& window);

/// Second-derivative certification of the represented function. The expected
/// outcome is always certified.
Verdict certify_representation(const PickRepresentation& rep, Eigen::Index n, std::size_t trials,
                               const RandomSpec& spec,
                               const Tolerances& tol = kSecondDerivativeTolerances);

/// Window bounds accept numbers or the strings "inf" / "-inf".
PickRepresentation pick_from_json(const json& doc);
json pick_to_json(const PickRepresentation& rep);

}  // namespace matconvex
