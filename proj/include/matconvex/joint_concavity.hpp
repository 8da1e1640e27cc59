#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "matconvex/convexity.hpp"
#include "matconvex/density.hpp"
#include "matconvex/matrix_io.hpp"

namespace matconvex {

/// Ordered k-tuple (k >= 1) of equal-dimension Hermitian matrices.
class MatrixTuple {
 public:
  explicit MatrixTuple(std::vector<HermitianMatrix> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  Eigen::Index dim() const noexcept { return entries_.front().dim(); }
  const HermitianMatrix& operator[](std::size_t j) const { return entries_[j]; }
  const std::vector<HermitianMatrix>& entries() const noexcept { return entries_; }

  /// Throws ConditioningError if some entry has min eigenvalue below floor.
  void require_positive_definite(double floor = kPositiveFloor) const;

  static constexpr double kPositiveFloor = 1e-8;

 private:
  std::vector<HermitianMatrix> entries_;
};

/// Direction tuple scaled so that max_j ||Q_j|| = 1 (left at zero if every
/// entry vanishes).
class DirectionTuple {
 public:
  explicit DirectionTuple(std::vector<HermitianMatrix> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  const HermitianMatrix& operator[](std::size_t j) const { return entries_[j]; }
  const std::vector<HermitianMatrix>& entries() const noexcept { return entries_; }

 private:
  std::vector<HermitianMatrix> entries_;
};

/// Exponents p_j >= 0 with sum <= 1.
class PowerVector {
 public:
  explicit PowerVector(std::vector<double> p);
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t j) const { return p_[j]; }
  const std::vector<double>& values() const noexcept { return p_; }
  double sum() const;

 private:
  std::vector<double> p_;
};

/// Quadrature for the integral representation of tensor powers. In simplex
/// coordinates y = (1, u_2, .., u_k) / (1 + sum u) the integral becomes
/// int_simplex prod y_j^(p_j - 1) (sum_j y_j L_j)^{-1} dy with a smooth
/// integrand; the simplex is parametrized by stick breaking, one Beta-weight
/// rule per stick variable with `nodes_per_axis` nodes.
struct QuadratureConfig {
  int nodes_per_axis = 64;
  double tolerance = 1e-5;

  void validate() const;
};

/// Nodes v_i in (0, 1), their complements 1 - v_i (kept separately for
/// accuracy near 1) and weights w_i with
/// sum_i w_i h(v_i) ~ int_0^1 v^(a-1) (1 - v)^(b-1) h(v) dv for smooth h.
/// Each half of [0, 1] gets half the nodes; an endpoint singularity is
/// removed by the substitution v = s^(1/a) / 2 (or 1 - v = s^(1/b) / 2).
struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> complements;
  std::vector<double> weights;
};
AxisRule beta_weight_rule(double a, double b, int nodes);

HermitianMatrix parallel_sum(const MatrixTuple& tuple);

/// Exact d^2/dt^2 of the parallel sum along A_j + t Q_j:
/// -2 sum_{j,m} Y_j* (delta_jm - T_jm) Y_m.
HermitianMatrix parallel_sum_hessian(const MatrixTuple& tuple, const DirectionTuple& dirs);

/// The kn x kn block matrix T_jm = A_j^{-1/2} P A_m^{-1/2}, P the parallel sum.
CMatrix projection_blocks(const MatrixTuple& tuple);

/// (||T - T^dagger||_F, ||T^2 - T||_F).
std::pair<double, double> projection_residuals(const MatrixTuple& tuple);

using TupleMap = std::function<HermitianMatrix(const MatrixTuple&)>;
using TupleFunctional = std::function<double(const MatrixTuple&)>;
using TupleSampler = std::function<MatrixTuple(Rng&, std::size_t k, Eigen::Index n)>;

/// Each entry drawn by random_in_window on `window` (positive definite for
/// windows inside (0, inf)).
TupleSampler window_sampler(SpectrumWindow window);

/// Central second difference of `map` along the direction tuple.
HermitianMatrix multivariate_second_difference(const TupleMap& map, const MatrixTuple& tuple,
                                               const DirectionTuple& dirs, double h);
double default_tuple_step(const MatrixTuple& tuple);

enum class JointMode { local, midpoint };

/// Concavity check of a matrix-valued map on tuples. Local mode: margin
/// -lambda_max(D2) / (1 + ||D2||) of the second difference. Midpoint mode:
/// lambda_min of map(mid) - (map(X0) + map(X1)) / 2.
Verdict joint_concavity_test(const TupleMap& map, const TupleSampler& sampler, std::size_t k,
                             Eigen::Index n, std::size_t trials, const RandomSpec& spec,
                             JointMode mode = JointMode::local);
Verdict joint_concavity_test(const TupleMap& map, const TupleSampler& sampler, std::size_t k,
                             Eigen::Index n, std::size_t trials, const RandomSpec& spec,
                             JointMode mode, const Tolerances& tol);

/// Midpoint concavity for a real-valued functional; margin is the gap
/// divided by 1 + max(|F(X0)|, |F(X1)|).
Verdict scalar_concavity_test(const TupleFunctional& functional, const TupleSampler& sampler,
                              std::size_t k, Eigen::Index n, std::size_t trials,
                              const RandomSpec& spec, const Tolerances& tol = kDefinitionTolerances);

double replay_joint_witness(const TupleMap& map, const Witness& w);

/// int over (0, inf)^(k-1) of prod_j u_j^(p_j - 1) / (1 + u_2 + ... + u_k),
/// which is the Dirichlet integral prod_j Gamma(p_j). Requires k >= 2, every
/// p_j > 0 and sum p = 1.
double c_constant(const PowerVector& p, const QuadratureConfig& quad = {});

/// A_1^{p_1} (x) ... (x) A_k^{p_k} from the integral of parallel sums of the
/// commuting lifts I (x) .. A_j .. (x) I. Zero exponents become identity
/// factors; sum p < 1 adds an identity lift with the remaining weight. At most
/// three active factors.
HermitianMatrix tensor_power_integral(const MatrixTuple& tuple, const PowerVector& p,
                                      const QuadratureConfig& quad = {});

/// The same tensor product by spectral calculus.
HermitianMatrix tensor_power_direct(const MatrixTuple& tuple, const PowerVector& p);

/// Tr[A^p K* B^r K] for p, r >= 0, p + r <= 1; K maps the A-space to the B-space.
double lieb_functional(const HermitianMatrix& a, const HermitianMatrix& b, const CMatrix& k,
                       double p, double r);

/// |Tr[A^p K* (B^T)^r K] - <k| A^p (x) B^r |k>| with |k> the column-stacked
/// entrywise conjugate of K.
double vectorization_residual(const HermitianMatrix& a, const HermitianMatrix& b,
                              const CMatrix& k, double p, double r);

/// Column-stacked conjugate of K, the vector used by vectorization_residual.
CVector vectorize_for_lieb(const CMatrix& k);

/// Eigenvalues below 1e-12 are lifted to 1e-12 and the trace renormalized.
HermitianMatrix regularize_state(const HermitianMatrix& rho);

/// Skew information Tr[rho K^2] - Tr[K rho^p K rho^(1-p)] >= 0, for 0 < p < 1.
double wyd_skew_information(const DensityOperator& rho, const HermitianMatrix& k, double p);
/// The concave part rho -> Tr[K rho^p K rho^(1-p)] (no regularization).
double wyd_trace_term(const HermitianMatrix& rho, const HermitianMatrix& k, double p);

/// B^{1/2} f(B^{-1/2} A B^{-1/2}) B^{1/2}.
HermitianMatrix perspective(const ScalarFunction& f, const HermitianMatrix& a,
                            const HermitianMatrix& b);

struct KuboAndoAtom {
  double t;
  double nu;
};

/// a A + b B + sum_j nu_j (1 + t_j)/t_j ((t_j A)^{-1} + B^{-1})^{-1}.
struct KuboAndoRepresentation {
  double a = 0.0;
  double b = 0.0;
  std::vector<KuboAndoAtom> atoms;

  void validate() const;
};

HermitianMatrix kubo_ando_eval(const KuboAndoRepresentation& rep, const HermitianMatrix& a,
                               const HermitianMatrix& b);

/// f(x) = a x + b + sum_j nu_j (t_j x / (t_j x + 1)) (1 + t_j)/t_j on (0, inf).
ScalarFunction kubo_ando_function(const KuboAndoRepresentation& rep);

KuboAndoRepresentation kubo_ando_from_json(const json& doc);
json kubo_ando_to_json(const KuboAndoRepresentation& rep);

}  // namespace matconvex
