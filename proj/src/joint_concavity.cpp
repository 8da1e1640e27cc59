#include "matconvex/joint_concavity.hpp"

#include <cmath>
#include <sstream>

#include "matconvex/quadrature.hpp"

namespace matconvex {

MatrixTuple::MatrixTuple(std::vector<HermitianMatrix> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("matrix tuple needs at least one entry");
  for (const auto& e : entries_) require_same_dim(entries_.front(), e, "matrix tuple");
}

void MatrixTuple::require_positive_definite(double floor) const {
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    const double lo = min_eigenvalue(entries_[j]);
    if (lo < floor) {
      std::ostringstream os;
      os << "tuple entry " << j << " is not strictly positive: min eigenvalue " << lo;
      throw ConditioningError(os.str());
    }
  }
}

DirectionTuple::DirectionTuple(std::vector<HermitianMatrix> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("direction tuple needs at least one entry");
  double largest = 0.0;
  for (const auto& e : entries_) {
    require_same_dim(entries_.front(), e, "direction tuple");
    largest = std::max(largest, operator_norm(e));
  }
  if (largest > 0.0) {
    for (auto& e : entries_) e = e * (1.0 / largest);
  }
}

PowerVector::PowerVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw ValidationError("power vector needs at least one exponent");
  for (double x : p_) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError("exponents must be >= 0");
  }
  if (sum() > 1.0 + 1e-12) throw ValidationError("exponents must sum to at most 1");
}

double PowerVector::sum() const {
  double s = 0.0;
  for (double x : p_) s += x;
  return s;
}

void QuadratureConfig::validate() const {
  if (nodes_per_axis < 8) throw ValidationError("quadrature needs at least 8 nodes per axis");
  if (!(tolerance > 0.0)) throw ValidationError("quadrature tolerance must be positive");
}

AxisRule beta_weight_rule(double a, double b, int nodes) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("Beta-weight exponents must be positive");
  const int head = (nodes + 1) / 2;
  const int tail = nodes - head;
  AxisRule rule;
  // [0, 1/2]: v = s^(1/a) / 2 turns v^(a-1) dv into 2^-a / a ds.
  const auto lo = gauss_legendre(head, 0.0, 1.0);
  for (int i = 0; i < head; ++i) {
    double v, w;
    if (a < 1.0) {
      v = 0.5 * std::pow(lo.nodes[i], 1.0 / a);
      w = lo.weights[i] * std::pow(0.5, a) / a;
    } else {
      v = 0.5 * lo.nodes[i];
      w = 0.5 * lo.weights[i] * std::pow(v, a - 1.0);
    }
    rule.nodes.push_back(v);
    rule.complements.push_back(1.0 - v);
    rule.weights.push_back(w * std::pow(1.0 - v, b - 1.0));
  }
  // [1/2, 1]: the mirror image in 1 - v.
  const auto hi = gauss_legendre(tail, 0.0, 1.0);
  for (int i = tail - 1; i >= 0; --i) {
    double c, w;
    if (b < 1.0) {
      c = 0.5 * std::pow(hi.nodes[i], 1.0 / b);
      w = hi.weights[i] * std::pow(0.5, b) / b;
    } else {
      c = 0.5 * hi.nodes[i];
      w = 0.5 * hi.weights[i] * std::pow(c, b - 1.0);
    }
    rule.nodes.push_back(1.0 - c);
    rule.complements.push_back(c);
    rule.weights.push_back(w * std::pow(1.0 - c, a - 1.0));
  }
  return rule;
}

namespace {

HermitianMatrix inverse_sqrt(const HermitianMatrix& a) {
  return apply_function(a, [](double x) { return 1.0 / std::sqrt(x); });
}

HermitianMatrix power(const HermitianMatrix& a, double p) {
  if (p == 0.0) return HermitianMatrix::identity(a.dim());
  if (p == 1.0) return a;
  return apply_function(a, [p](double x) { return std::pow(std::max(x, 0.0), p); });
}

}  // namespace

HermitianMatrix parallel_sum(const MatrixTuple& tuple) {
  tuple.require_positive_definite();
  HermitianMatrix sum = HermitianMatrix::zero(tuple.dim());
  for (const auto& a : tuple.entries()) sum = sum + inverse(a);
  return inverse(sum);
}

HermitianMatrix parallel_sum_hessian(const MatrixTuple& tuple, const DirectionTuple& dirs) {
  if (dirs.size() != tuple.size()) throw DimensionError("direction tuple length mismatch");
  require_same_dim(tuple[0], dirs[0], "parallel-sum Hessian");
  const HermitianMatrix p = parallel_sum(tuple);
  const std::size_t k = tuple.size();
  const auto n = tuple.dim();

  std::vector<CMatrix> y(k);
  std::vector<CMatrix> inv_half(k);
  for (std::size_t j = 0; j < k; ++j) {
    inv_half[j] = inverse_sqrt(tuple[j]).matrix();
    y[j] = inv_half[j] * dirs[j].matrix() * inverse(tuple[j]).matrix() * p.matrix();
  }
  CMatrix total = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t m = 0; m < k; ++m) {
      CMatrix middle = -(inv_half[j] * p.matrix() * inv_half[m]);
      if (j == m) middle += CMatrix::Identity(n, n);
      total += y[j].adjoint() * middle * y[m];
    }
  }
  return HermitianMatrix::hermitian_part(-2.0 * total);
}

CMatrix projection_blocks(const MatrixTuple& tuple) {
  const HermitianMatrix p = parallel_sum(tuple);
  const std::size_t k = tuple.size();
  const auto n = tuple.dim();
  std::vector<CMatrix> inv_half(k);
  for (std::size_t j = 0; j < k; ++j) inv_half[j] = inverse_sqrt(tuple[j]).matrix();
  CMatrix t(k * n, k * n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t m = 0; m < k; ++m) {
      t.block(j * n, m * n, n, n) = inv_half[j] * p.matrix() * inv_half[m];
    }
  }
  return t;
}

std::pair<double, double> projection_residuals(const MatrixTuple& tuple) {
  const CMatrix t = projection_blocks(tuple);
  return {(t - t.adjoint()).norm(), (t * t - t).norm()};
}

TupleSampler window_sampler(SpectrumWindow window) {
  return [window](Rng& rng, std::size_t k, Eigen::Index n) {
    std::vector<HermitianMatrix> entries;
    for (std::size_t j = 0; j < k; ++j) entries.push_back(random_in_window(n, window, rng));
    return MatrixTuple(std::move(entries));
  };
}

namespace {

HermitianMatrix second_difference(const TupleMap& map, const MatrixTuple& tuple,
                                  const std::vector<HermitianMatrix>& dirs, double h) {
  if (dirs.size() != tuple.size()) throw DimensionError("direction tuple length mismatch");
  std::vector<HermitianMatrix> plus, minus;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    plus.push_back(tuple[j] + dirs[j] * h);
    minus.push_back(tuple[j] - dirs[j] * h);
  }
  const HermitianMatrix fp = map(MatrixTuple(std::move(plus)));
  const HermitianMatrix fm = map(MatrixTuple(std::move(minus)));
  const HermitianMatrix f0 = map(tuple);
  return (fp + fm - f0 * 2.0) * (1.0 / (h * h));
}

double local_margin(const HermitianMatrix& d2) {
  const auto ev = spectral_decompose(d2).eigenvalues;
  const double top = ev(ev.size() - 1);
  const double norm = std::max(std::abs(ev(0)), std::abs(top));
  return -top / (1.0 + norm);
}

std::vector<HermitianMatrix> slice(const std::vector<HermitianMatrix>& v, std::size_t from,
                                   std::size_t count) {
  return {v.begin() + from, v.begin() + from + count};
}

HermitianMatrix midpoint_gap(const TupleMap& map, const MatrixTuple& x0, const MatrixTuple& x1) {
  std::vector<HermitianMatrix> mid;
  for (std::size_t j = 0; j < x0.size(); ++j) mid.push_back((x0[j] + x1[j]) * 0.5);
  return map(MatrixTuple(std::move(mid))) - (map(x0) + map(x1)) * 0.5;
}

}  // namespace

HermitianMatrix multivariate_second_difference(const TupleMap& map, const MatrixTuple& tuple,
                                               const DirectionTuple& dirs, double h) {
  return second_difference(map, tuple, dirs.entries(), h);
}

double default_tuple_step(const MatrixTuple& tuple) {
  static const double eps_quarter = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  double largest = 0.0;
  for (const auto& a : tuple.entries()) largest = std::max(largest, operator_norm(a));
  return (1.0 + largest) * eps_quarter;
}

double replay_joint_witness(const TupleMap& map, const Witness& w) {
  if (w.kind == TestKind::joint_local) {
    const MatrixTuple tuple(w.points);
    return local_margin(second_difference(map, tuple, w.directions, w.step.value()));
  }
  if (w.kind == TestKind::joint_midpoint) {
    const std::size_t k = w.points.size() / 2;
    return min_eigenvalue(
        midpoint_gap(map, MatrixTuple(slice(w.points, 0, k)), MatrixTuple(slice(w.points, k, k))));
  }
  throw UnsupportedError("witness kind " + to_string(w.kind) + " is not a tuple test");
}

Verdict joint_concavity_test(const TupleMap& map, const TupleSampler& sampler, std::size_t k,
                             Eigen::Index n, std::size_t trials, const RandomSpec& spec,
                             JointMode mode) {
  return joint_concavity_test(map, sampler, k, n, trials, spec, mode,
                              mode == JointMode::local ? kSecondDerivativeTolerances
                                                       : kDefinitionTolerances);
}

Verdict joint_concavity_test(const TupleMap& map, const TupleSampler& sampler, std::size_t k,
                             Eigen::Index n, std::size_t trials, const RandomSpec& spec,
                             JointMode mode, const Tolerances& tol) {
  Verdict v;
  v.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomSpec trial = spec.offset(t);
    Rng rng(trial);
    Witness w{.seed = trial.seed, .stream_id = trial.stream_id};
    const MatrixTuple x0 = sampler(rng, k, n);
    w.points = x0.entries();
    if (mode == JointMode::local) {
      w.kind = TestKind::joint_local;
      std::vector<HermitianMatrix> q;
      for (std::size_t j = 0; j < k; ++j) q.push_back(random_hermitian(n, rng));
      w.directions = DirectionTuple(std::move(q)).entries();
      w.step = default_tuple_step(x0);
    } else {
      w.kind = TestKind::joint_midpoint;
      w.lambda = 0.5;
      const MatrixTuple x1 = sampler(rng, k, n);
      w.points.insert(w.points.end(), x1.entries().begin(), x1.entries().end());
    }
    const double margin = replay_joint_witness(map, w);
    if (!v.witness || margin < v.worst_margin) {
      v.worst_margin = margin;
      v.witness = std::move(w);
    }
  }
  v.status = trials == 0 ? Status::inconclusive : classify(v.worst_margin, tol);
  return v;
}

Verdict scalar_concavity_test(const TupleFunctional& functional, const TupleSampler& sampler,
                              std::size_t k, Eigen::Index n, std::size_t trials,
                              const RandomSpec& spec, const Tolerances& tol) {
  Verdict v;
  v.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomSpec trial = spec.offset(t);
    Rng rng(trial);
    Witness w{.kind = TestKind::joint_midpoint, .seed = trial.seed, .stream_id = trial.stream_id};
    w.lambda = 0.5;
    const MatrixTuple x0 = sampler(rng, k, n);
    const MatrixTuple x1 = sampler(rng, k, n);
    std::vector<HermitianMatrix> mid;
    for (std::size_t j = 0; j < k; ++j) mid.push_back((x0[j] + x1[j]) * 0.5);
    const double f0 = functional(x0);
    const double f1 = functional(x1);
    const double gap = functional(MatrixTuple(std::move(mid))) - 0.5 * (f0 + f1);
    const double margin = gap / (1.0 + std::max(std::abs(f0), std::abs(f1)));
    w.points = x0.entries();
    w.points.insert(w.points.end(), x1.entries().begin(), x1.entries().end());
    if (!v.witness || margin < v.worst_margin) {
      v.worst_margin = margin;
      v.witness = std::move(w);
    }
  }
  v.status = trials == 0 ? Status::inconclusive : classify(v.worst_margin, tol);
  return v;
}

namespace {

/// Stick-breaking rules for Dirichlet exponents q: variable j carries the
/// weight v^(q_j - 1) (1 - v)^(q_{j+1} + ... + q_k - 1).
std::vector<AxisRule> stick_rules(const std::vector<double>& q, const QuadratureConfig& quad) {
  std::vector<AxisRule> rules;
  double rest = 0.0;
  for (double x : q) rest += x;
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    rest -= q[j];
    rules.push_back(beta_weight_rule(q[j], rest, quad.nodes_per_axis));
  }
  return rules;
}

/// Visits every point of the product grid in a fixed order, calling
/// visit(y, weight) with y the simplex point y_j = v_j prod_{i<j} (1 - v_i).
template <typename Visit>
void for_each_simplex_node(const std::vector<AxisRule>& rules, Visit&& visit) {
  std::vector<std::size_t> index(rules.size(), 0);
  std::vector<double> y(rules.size() + 1);
  for (;;) {
    double weight = 1.0;
    double stick = 1.0;
    for (std::size_t a = 0; a < rules.size(); ++a) {
      y[a] = stick * rules[a].nodes[index[a]];
      stick *= rules[a].complements[index[a]];
      weight *= rules[a].weights[index[a]];
    }
    y.back() = stick;
    visit(y, weight);
    std::size_t a = rules.size();
    while (a > 0 && ++index[a - 1] == rules[a - 1].nodes.size()) index[--a] = 0;
    if (a == 0) return;
  }
}

double normalizing_constant(const std::vector<AxisRule>& rules) {
  double total = 0.0;
  for_each_simplex_node(rules, [&](const std::vector<double>&, double w) { total += w; });
  return total;
}

}  // namespace

double c_constant(const PowerVector& p, const QuadratureConfig& quad) {
  quad.validate();
  if (p.size() < 2) throw ValidationError("the constant needs k >= 2 exponents");
  for (double x : p.values()) {
    if (x <= 0.0) {
      throw ValidationError(
          "zero exponent: the integral diverges; drop the factor (dimension reduction) instead");
    }
  }
  if (std::abs(p.sum() - 1.0) > 1e-12) throw ValidationError("exponents must sum to 1");
  return normalizing_constant(stick_rules(p.values(), quad));
}

HermitianMatrix tensor_power_direct(const MatrixTuple& tuple, const PowerVector& p) {
  if (p.size() != tuple.size()) throw DimensionError("one exponent per tuple entry required");
  tuple.require_positive_definite();
  CMatrix out = power(tuple[0], p[0]).matrix();
  for (std::size_t j = 1; j < tuple.size(); ++j) out = kron(out, power(tuple[j], p[j]).matrix());
  return HermitianMatrix::hermitian_part(out);
}

HermitianMatrix tensor_power_integral(const MatrixTuple& tuple, const PowerVector& p,
                                      const QuadratureConfig& quad) {
  quad.validate();
  if (p.size() != tuple.size()) throw DimensionError("one exponent per tuple entry required");
  tuple.require_positive_definite();
  const auto n = tuple.dim();
  const std::size_t k = tuple.size();
  const auto big = static_cast<Eigen::Index>(std::pow(static_cast<double>(n), static_cast<double>(k)));

  // Lift j: I (x) .. (x) A_j^{-1} (x) .. (x) I on the full space.
  auto inverse_lift = [&](std::size_t j) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < k; ++i) {
      out = kron(out, i == j ? inverse(tuple[i]).matrix() : CMatrix::Identity(n, n));
    }
    return out;
  };

  std::vector<CMatrix> lifts;
  std::vector<double> q;
  for (std::size_t j = 0; j < k; ++j) {
    if (p[j] > 0.0) {
      lifts.push_back(inverse_lift(j));
      q.push_back(p[j]);
    }
  }
  const double rest = 1.0 - p.sum();
  if (rest > 1e-14) {
    lifts.push_back(CMatrix::Identity(big, big));
    q.push_back(rest);
  }
  if (lifts.empty()) return HermitianMatrix::identity(big);
  if (lifts.size() == 1) return HermitianMatrix::hermitian_part(lifts[0].inverse());
  if (lifts.size() > 3) {
    throw UnsupportedError("integral representation supports at most 3 active factors, got " +
                           std::to_string(lifts.size()));
  }

  const auto rules = stick_rules(q, quad);
  CMatrix total = CMatrix::Zero(big, big);
  const CMatrix id = CMatrix::Identity(big, big);
  for_each_simplex_node(rules, [&](const std::vector<double>& y, double w) {
    CMatrix x = y[0] * lifts[0];
    for (std::size_t j = 1; j < y.size(); ++j) x += y[j] * lifts[j];
    total += w * x.ldlt().solve(id);
  });
  return HermitianMatrix::hermitian_part(total / normalizing_constant(rules));
}

namespace {

void check_lieb_exponents(double p, double r) {
  if (!(p >= 0.0 && r >= 0.0 && p + r <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "Lieb exponents need p, r >= 0 and p + r <= 1, got p = " << p << ", r = " << r;
    throw ValidationError(os.str());
  }
}

void check_lieb_shapes(const HermitianMatrix& a, const HermitianMatrix& b, const CMatrix& k) {
  if (k.cols() != a.dim() || k.rows() != b.dim()) {
    throw DimensionError("K must map the A-space to the B-space (rows = dim B, cols = dim A)");
  }
  MatrixTuple({a}).require_positive_definite();
  MatrixTuple({b}).require_positive_definite();
}

}  // namespace

double lieb_functional(const HermitianMatrix& a, const HermitianMatrix& b, const CMatrix& k,
                       double p, double r) {
  check_lieb_exponents(p, r);
  check_lieb_shapes(a, b, k);
  return (power(a, p).matrix() * k.adjoint() * power(b, r).matrix() * k).trace().real();
}

CVector vectorize_for_lieb(const CMatrix& k) {
  const CMatrix conj = k.conjugate();
  return Eigen::Map<const CVector>(conj.data(), conj.size());
}

double vectorization_residual(const HermitianMatrix& a, const HermitianMatrix& b,
                              const CMatrix& k, double p, double r) {
  check_lieb_exponents(p, r);
  check_lieb_shapes(a, b, k);
  const HermitianMatrix bt(CMatrix(b.matrix().transpose()));
  const Complex lhs = (power(a, p).matrix() * k.adjoint() * power(bt, r).matrix() * k).trace();
  const CVector v = vectorize_for_lieb(k);
  const Complex rhs = v.dot(kron(power(a, p).matrix(), power(b, r).matrix()) * v);
  return std::abs(lhs - rhs);
}

HermitianMatrix regularize_state(const HermitianMatrix& rho) {
  auto sd = spectral_decompose(rho);
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    sd.eigenvalues(i) = std::max(sd.eigenvalues(i), 1e-12);
  }
  sd.eigenvalues /= sd.eigenvalues.sum();
  return HermitianMatrix::hermitian_part(sd.reconstruct());
}

double wyd_trace_term(const HermitianMatrix& rho, const HermitianMatrix& k, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("skew-information exponent must lie in (0, 1)");
  require_same_dim(rho, k, "skew information");
  const CMatrix& km = k.matrix();
  return (km * power(rho, p).matrix() * km * power(rho, 1.0 - p).matrix()).trace().real();
}

double wyd_skew_information(const DensityOperator& rho, const HermitianMatrix& k, double p) {
  const HermitianMatrix r = regularize_state(rho.matrix());
  const double plain = (r.matrix() * k.matrix() * k.matrix()).trace().real();
  return plain - wyd_trace_term(r, k, p);
}

HermitianMatrix perspective(const ScalarFunction& f, const HermitianMatrix& a,
                            const HermitianMatrix& b) {
  require_same_dim(a, b, "perspective");
  MatrixTuple({b}).require_positive_definite();
  const auto sd = spectral_decompose(b);
  const HermitianMatrix root = apply_function(sd, [](double x) { return std::sqrt(x); });
  const HermitianMatrix inv_root = apply_function(sd, [](double x) { return 1.0 / std::sqrt(x); });
  const HermitianMatrix middle = f.on(sandwich(inv_root, a));
  return sandwich(root, middle);
}

void KuboAndoRepresentation::validate() const {
  if (!std::isfinite(a)) throw ValidationError("invalid representation field 'a': must be finite");
  if (!std::isfinite(b)) throw ValidationError("invalid representation field 'b': must be finite");
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const std::string field = "atoms[" + std::to_string(j) + "]";
    if (!std::isfinite(atoms[j].t) || atoms[j].t <= 0.0) {
      throw ValidationError("invalid representation field '" + field + ".t': must be > 0");
    }
    if (!std::isfinite(atoms[j].nu) || atoms[j].nu <= 0.0) {
      throw ValidationError("invalid representation field '" + field + ".nu': must be > 0");
    }
  }
}

HermitianMatrix kubo_ando_eval(const KuboAndoRepresentation& rep, const HermitianMatrix& a,
                               const HermitianMatrix& b) {
  rep.validate();
  require_same_dim(a, b, "Kubo-Ando mean");
  HermitianMatrix out = a * rep.a + b * rep.b;
  for (const auto& atom : rep.atoms) {
    out = out + parallel_sum(MatrixTuple({a * atom.t, b})) * (atom.nu * (1.0 + atom.t) / atom.t);
  }
  return out;
}

ScalarFunction kubo_ando_function(const KuboAndoRepresentation& rep) {
  rep.validate();
  return ScalarFunction(
      "kubo-ando",
      [rep](double x) {
        double v = rep.a * x + rep.b;
        for (const auto& atom : rep.atoms) {
          v += atom.nu * (atom.t * x / (atom.t * x + 1.0)) * (1.0 + atom.t) / atom.t;
        }
        return v;
      },
      SpectrumWindow(0.0, kInf));
}

KuboAndoRepresentation kubo_ando_from_json(const json& doc) {
  const std::string where = "kubo_ando";
  if (!doc.is_object()) throw ParseError("representation must be an object", where);
  KuboAndoRepresentation rep;
  for (const auto& [key, value] : doc.items()) {
    if (key == "a" || key == "b") {
      if (!value.is_number()) throw ParseError("'" + key + "' must be a number", where + "." + key);
      (key == "a" ? rep.a : rep.b) = value.get<double>();
    } else if (key == "atoms") {
      if (!value.is_array()) throw ParseError("'atoms' must be an array", where + ".atoms");
      for (std::size_t j = 0; j < value.size(); ++j) {
        const auto& atom = value[j];
        const std::string aw = where + ".atoms[" + std::to_string(j) + "]";
        if (!atom.is_object() || !atom.contains("t") || !atom.contains("nu") || atom.size() != 2 ||
            !atom["t"].is_number() || !atom["nu"].is_number()) {
          throw ParseError("atom must be {\"t\": number, \"nu\": number}", aw);
        }
        rep.atoms.push_back({atom["t"].get<double>(), atom["nu"].get<double>()});
      }
    } else {
      throw ParseError("unknown field '" + key + "'", where + "." + key);
    }
  }
  rep.validate();
  return rep;
}

json kubo_ando_to_json(const KuboAndoRepresentation& rep) {
  json atoms = json::array();
  for (const auto& a : rep.atoms) atoms.push_back({{"t", a.t}, {"nu", a.nu}});
  return {{"a", rep.a}, {"b", rep.b}, {"atoms", atoms}};
}

}  // namespace matconvex
