#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matconvex/linalg.hpp"
#include "matconvex/random.hpp"

namespace matconvex {

/// Exact d^2/dt^2 f(M + tQ) at t = 0, when a closed form is known.
using SecondDerivativeFn =
    std::function<HermitianMatrix(const HermitianMatrix& m, const HermitianMatrix& q)>;

/// A real function on an open interval, optionally carrying exact
/// derivative information used in place of finite differences.
class ScalarFunction {
 public:
  /// Spot-checks `eval` for finiteness at 32 points of a compact core of the
  /// domain; throws ValidationError otherwise.
  ScalarFunction(std::string name, std::function<double(double)> eval, SpectrumWindow domain,
                 std::function<double(double)> derivative = {},
                 SecondDerivativeFn second_derivative = {});

  const std::string& name() const noexcept { return name_; }
  const SpectrumWindow& domain() const noexcept { return domain_; }
  double operator()(double x) const { return eval_(x); }
  const std::function<double(double)>& eval() const noexcept { return eval_; }

  bool has_derivative() const noexcept { return static_cast<bool>(derivative_); }
  /// f'(x): the registered derivative, else a central difference with step
  /// 1e-6 (1 + |x|).
  double derivative(double x) const;

  bool has_exact_second_derivative() const noexcept { return static_cast<bool>(second_); }
  const SecondDerivativeFn& exact_second_derivative() const noexcept { return second_; }

  /// f(H) with the domain enforced.
  HermitianMatrix on(const HermitianMatrix& h) const;

 private:
  std::string name_;
  std::function<double(double)> eval_;
  SpectrumWindow domain_;
  std::function<double(double)> derivative_;
  SecondDerivativeFn second_;
};

/// lambda in the open interval (0, 1).
class MixingWeight {
 public:
  explicit MixingWeight(double lambda);
  double value() const noexcept { return lambda_; }
  MixingWeight complement() const { return MixingWeight(1.0 - lambda_); }

 private:
  double lambda_;
};

enum class Status { certified, violated, inconclusive };
std::string to_string(Status s);

enum class TestKind { definition, jensen, second_derivative, monotonicity, joint_local, joint_midpoint };
std::string to_string(TestKind k);

/// Everything needed to re-evaluate one trial of a randomized test.
struct Witness {
  TestKind kind = TestKind::definition;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::vector<HermitianMatrix> points;  // A0, A1 | atoms M_i | M | tuple entries
  std::vector<HermitianMatrix> directions;  // Q (or Q_j for tuples)
  std::optional<double> lambda;
  std::vector<double> weights;  // Jensen atom weights
  std::vector<double> sites;  // Loewner sites
  std::optional<double> step;  // finite-difference step, if one was used
};

struct Verdict {
  Status status = Status::inconclusive;
  std::size_t trials = 0;
  /// Smallest trial margin seen (negative means the inequality failed).
  double worst_margin = kInf;
  /// The trial that produced worst_margin; always present when trials > 0.
  std::optional<Witness> witness;
};

/// Margins >= -certify certify; margins < -violate violate; in between is
/// reported as inconclusive.
struct Tolerances {
  double certify;
  double violate;
};

inline constexpr Tolerances kDefinitionTolerances{1e-8, 1e-6};
/// Second-derivative margins are relative: lambda_min(D2) / (1 + ||D2||).
inline constexpr Tolerances kSecondDerivativeTolerances{1e-5, 1e-4};
inline constexpr Tolerances kMonotonicityTolerances{1e-8, 1e-8};

Status classify(double worst_margin, const Tolerances& tol);

/// Default finite-difference step (1 + ||M||) eps^(1/4).
double default_fd_step(const HermitianMatrix& m);

/// (1 - lambda) f(A0) + lambda f(A1) - f(A_lambda).
HermitianMatrix convexity_gap(const ScalarFunction& f, const HermitianMatrix& a0,
                              const HermitianMatrix& a1, MixingWeight lambda);

Verdict definition_test(const ScalarFunction& f, const SpectrumWindow& window, Eigen::Index n,
                        std::size_t trials, const RandomSpec& spec,
                        const Tolerances& tol = kDefinitionTolerances);

/// sum_i w_i f(M_i) - f(sum_i w_i M_i).
HermitianMatrix jensen_gap(const ScalarFunction& f, const std::vector<HermitianMatrix>& atoms,
                           const std::vector<double>& weights);

Verdict jensen_test(const ScalarFunction& f, const SpectrumWindow& window, Eigen::Index n,
                    std::size_t atoms, std::size_t trials, const RandomSpec& spec,
                    const Tolerances& tol = kDefinitionTolerances);

/// (f(M + hQ) - 2 f(M) + f(M - hQ)) / h^2.
HermitianMatrix second_derivative_fd(const ScalarFunction& f, const HermitianMatrix& m,
                                     const HermitianMatrix& q, double h);

/// Exact callback when registered, else the central difference at the default step.
HermitianMatrix second_derivative(const ScalarFunction& f, const HermitianMatrix& m,
                                  const HermitianMatrix& q);

Verdict second_derivative_test(const ScalarFunction& f, const SpectrumWindow& window,
                               Eigen::Index n, std::size_t trials, const RandomSpec& spec,
                               const Tolerances& tol = kSecondDerivativeTolerances);

/// Piecewise-linear kernel: (1 - lambda) t on [0, lambda], (1 - t) lambda on
/// [lambda, 1], zero elsewhere.
double kernel_K(MixingWeight lambda, double t);

/// Frobenius norm of gap - int_0^1 K(t) d^2/dt^2 f(A_t) dt, the integral by
/// Gauss-Legendre on [0, lambda] and [lambda, 1] with `nodes_per_panel` each.
/// The integrand uses the exact second derivative when f registers one.
double kernel_identity_residual(const ScalarFunction& f, const HermitianMatrix& a0,
                                const HermitianMatrix& a1, MixingWeight lambda,
                                int nodes_per_panel);

/// Divided-difference matrix on strictly increasing sites.
HermitianMatrix loewner_matrix(const ScalarFunction& f, const std::vector<double>& sites);

Verdict monotonicity_test(const ScalarFunction& f, const SpectrumWindow& window,
                          std::size_t max_sites, std::size_t trials, const RandomSpec& spec,
                          const Tolerances& tol = kMonotonicityTolerances);

/// g(x) = (f(x) - f(y)) / (x - y), with g(y) = f'(y).
ScalarFunction secant_transform(const ScalarFunction& f, double y);

/// Re-evaluates a stored single-variable witness (definition, jensen,
/// second_derivative, monotonicity) and returns its margin.
double replay_witness(const ScalarFunction& f, const Witness& w);

}  // namespace matconvex
