#include "matconvex/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "matconvex/quadrature.hpp"

namespace matconvex {

ScalarFunction::ScalarFunction(std::string name, std::function<double(double)> eval,
                               SpectrumWindow domain, std::function<double(double)> derivative,
                               SecondDerivativeFn second_derivative)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      domain_(domain),
      derivative_(std::move(derivative)),
      second_(std::move(second_derivative)) {
  if (!eval_) throw ValidationError("function '" + name_ + "' has no evaluator");
  // Spot check on a compact piece of the domain; infinite ends are replaced
  // by a finite span of 10 around the finite end (or the origin).
  double lo = domain_.lower();
  double hi = domain_.upper();
  if (!std::isfinite(lo) && !std::isfinite(hi)) {
    lo = -10.0;
    hi = 10.0;
  } else if (!std::isfinite(lo)) {
    lo = hi - 10.0;
  } else if (!std::isfinite(hi)) {
    hi = lo + 10.0;
  }
  const double delta = 0.05 * (hi - lo);
  for (int i = 0; i < 32; ++i) {
    const double x = lo + delta + (hi - lo - 2.0 * delta) * i / 31.0;
    if (!std::isfinite(eval_(x))) {
      std::ostringstream os;
      os << "function '" << name_ << "' is not finite at " << x;
      throw ValidationError(os.str());
    }
  }
}

double ScalarFunction::derivative(double x) const {
  if (derivative_) return derivative_(x);
  const double s = 1e-6 * (1.0 + std::abs(x));
  return (eval_(x + s) - eval_(x - s)) / (2.0 * s);
}

HermitianMatrix ScalarFunction::on(const HermitianMatrix& h) const {
  return apply_function(h, eval_, domain_);
}

MixingWeight::MixingWeight(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    std::ostringstream os;
    os << "mixing weight must lie in (0, 1), got " << lambda;
    throw ValidationError(os.str());
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::certified: return "certified";
    case Status::violated: return "violated";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(TestKind k) {
  switch (k) {
    case TestKind::definition: return "definition";
    case TestKind::jensen: return "jensen";
    case TestKind::second_derivative: return "second_derivative";
    case TestKind::monotonicity: return "monotonicity";
    case TestKind::joint_local: return "joint_local";
    case TestKind::joint_midpoint: return "joint_midpoint";
  }
  return "?";
}

Status classify(double worst_margin, const Tolerances& tol) {
  if (worst_margin < -tol.violate) return Status::violated;
  if (worst_margin >= -tol.certify) return Status::certified;
  return Status::inconclusive;
}

double default_fd_step(const HermitianMatrix& m) {
  static const double eps_quarter = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  return (1.0 + operator_norm(m)) * eps_quarter;
}

HermitianMatrix convexity_gap(const ScalarFunction& f, const HermitianMatrix& a0,
                              const HermitianMatrix& a1, MixingWeight lambda) {
  require_same_dim(a0, a1, "convexity gap");
  const double l = lambda.value();
  const HermitianMatrix mid = a0 * (1.0 - l) + a1 * l;
  auto eval = [&](const HermitianMatrix& h, const char* label) {
    try {
      return f.on(h);
    } catch (const DomainError& e) {
      throw DomainError(std::string(label) + ": " + e.what(), e.offending_value());
    }
  };
  return eval(a0, "A0") * (1.0 - l) + eval(a1, "A1") * l - eval(mid, "A_lambda");
}

namespace {

/// Keeps the trial with the smallest margin; ties go to the earlier stream.
struct WorstTracker {
  double margin = kInf;
  std::optional<Witness> witness;

  void offer(double m, Witness&& w) {
    if (!witness || m < margin) {
      margin = m;
      witness = std::move(w);
    }
  }

  Verdict finish(std::size_t trials, const Tolerances& tol) {
    Verdict v;
    v.trials = trials;
    v.worst_margin = margin;
    v.witness = std::move(witness);
    v.status = trials == 0 ? Status::inconclusive : classify(margin, tol);
    return v;
  }
};

double definition_margin(const ScalarFunction& f, const Witness& w) {
  return min_eigenvalue(convexity_gap(f, w.points.at(0), w.points.at(1), MixingWeight(*w.lambda)));
}

double jensen_margin(const ScalarFunction& f, const Witness& w) {
  return min_eigenvalue(jensen_gap(f, w.points, w.weights));
}

double relative_margin(const HermitianMatrix& d2) {
  const auto ev = spectral_decompose(d2).eigenvalues;
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) / (1.0 + norm);
}

double second_derivative_margin(const ScalarFunction& f, const Witness& w) {
  const auto& m = w.points.at(0);
  const auto& q = w.directions.at(0);
  const HermitianMatrix d2 =
      w.step ? second_derivative_fd(f, m, q, *w.step) : f.exact_second_derivative()(m, q);
  return relative_margin(d2);
}

double monotonicity_margin(const ScalarFunction& f, const Witness& w) {
  return min_eigenvalue(loewner_matrix(f, w.sites));
}

std::vector<double> random_simplex_weights(std::size_t k, Rng& rng) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) {
    x = std::pow(-std::log(rng.uniform()), 3.0);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

Verdict definition_test(const ScalarFunction& f, const SpectrumWindow& window, Eigen::Index n,
                        std::size_t trials, const RandomSpec& spec, const Tolerances& tol) {
  window.compact_core();  // rejects unbounded windows
  WorstTracker worst;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomSpec trial = spec.offset(t);
    Rng rng(trial);
    Witness w{.kind = TestKind::definition, .seed = trial.seed, .stream_id = trial.stream_id};
    w.points.push_back(random_in_window(n, window, rng));
    w.points.push_back(random_in_window(n, window, rng));
    w.lambda = rng.uniform();
    const double margin = definition_margin(f, w);
    worst.offer(margin, std::move(w));
  }
  return worst.finish(trials, tol);
}

HermitianMatrix jensen_gap(const ScalarFunction& f, const std::vector<HermitianMatrix>& atoms,
                           const std::vector<double>& weights) {
  if (atoms.empty() || atoms.size() != weights.size()) {
    throw ValidationError("Jensen gap needs matching non-empty atoms and weights");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("Jensen weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("Jensen weights must sum to 1");
  HermitianMatrix mean = HermitianMatrix::zero(atoms.front().dim());
  HermitianMatrix averaged = mean;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    mean = mean + atoms[i] * weights[i];
    averaged = averaged + f.on(atoms[i]) * weights[i];
  }
  return averaged - f.on(mean);
}

Verdict jensen_test(const ScalarFunction& f, const SpectrumWindow& window, Eigen::Index n,
                    std::size_t atoms, std::size_t trials, const RandomSpec& spec,
                    const Tolerances& tol) {
  if (atoms < 2) throw ValidationError("Jensen test needs at least two atoms");
  window.compact_core();
  WorstTracker worst;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomSpec trial = spec.offset(t);
    Rng rng(trial);
    Witness w{.kind = TestKind::jensen, .seed = trial.seed, .stream_id = trial.stream_id};
    for (std::size_t i = 0; i < atoms; ++i) w.points.push_back(random_in_window(n, window, rng));
    w.weights = random_simplex_weights(atoms, rng);
    const double margin = jensen_margin(f, w);
    worst.offer(margin, std::move(w));
  }
  return worst.finish(trials, tol);
}

HermitianMatrix second_derivative_fd(const ScalarFunction& f, const HermitianMatrix& m,
                                     const HermitianMatrix& q, double h) {
  require_same_dim(m, q, "second difference");
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  auto eval = [&](const HermitianMatrix& x) {
    try {
      return f.on(x);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "M +/- hQ leaves the domain at h = " << h << "; use a smaller step (" << e.what()
         << ")";
      throw DomainError(os.str(), e.offending_value());
    }
  };
  const HermitianMatrix plus = eval(m + q * h);
  const HermitianMatrix minus = eval(m - q * h);
  const HermitianMatrix centre = eval(m);
  return (plus + minus - centre * 2.0) * (1.0 / (h * h));
}

HermitianMatrix second_derivative(const ScalarFunction& f, const HermitianMatrix& m,
                                  const HermitianMatrix& q) {
  if (f.has_exact_second_derivative()) return f.exact_second_derivative()(m, q);
  return second_derivative_fd(f, m, q, default_fd_step(m));
}

Verdict second_derivative_test(const ScalarFunction& f, const SpectrumWindow& window,
                               Eigen::Index n, std::size_t trials, const RandomSpec& spec,
                               const Tolerances& tol) {
  window.compact_core();
  WorstTracker worst;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomSpec trial = spec.offset(t);
    Rng rng(trial);
    Witness w{.kind = TestKind::second_derivative, .seed = trial.seed, .stream_id = trial.stream_id};
    w.points.push_back(random_in_window(n, window, rng));
    w.directions.push_back(random_direction(n, rng));
    if (!f.has_exact_second_derivative()) w.step = default_fd_step(w.points[0]);
    const double margin = second_derivative_margin(f, w);
    worst.offer(margin, std::move(w));
  }
  return worst.finish(trials, tol);
}

double kernel_K(MixingWeight lambda, double t) {
  const double l = lambda.value();
  if (t < 0.0 || t > 1.0) return 0.0;
  return t <= l ? (1.0 - l) * t : (1.0 - t) * l;
}

double kernel_identity_residual(const ScalarFunction& f, const HermitianMatrix& a0,
                                const HermitianMatrix& a1, MixingWeight lambda,
                                int nodes_per_panel) {
  const HermitianMatrix gap = convexity_gap(f, a0, a1, lambda);
  const HermitianMatrix q = a1 - a0;
  if (q.frobenius_norm() == 0.0) return gap.frobenius_norm();

  CMatrix integral = CMatrix::Zero(a0.dim(), a0.dim());
  const double l = lambda.value();
  for (const auto& [lo, hi] : {std::pair{0.0, l}, std::pair{l, 1.0}}) {
    const auto rule = gauss_legendre(nodes_per_panel, lo, hi);
    for (int i = 0; i < nodes_per_panel; ++i) {
      const double t = rule.nodes[i];
      const HermitianMatrix at = a0 + q * t;
      const HermitianMatrix d2 = second_derivative(f, at, q);
      integral += (rule.weights[i] * kernel_K(lambda, t)) * d2.matrix();
    }
  }
  return (gap.matrix() - integral).norm();
}

HermitianMatrix loewner_matrix(const ScalarFunction& f, const std::vector<double>& sites) {
  if (sites.empty()) throw ValidationError("Loewner matrix needs at least one site");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (!f.domain().contains(sites[i])) {
      throw DomainError("Loewner site outside the function's domain", sites[i]);
    }
    if (i > 0 && !(sites[i] > sites[i - 1])) {
      throw ValidationError("Loewner sites must be strictly increasing (duplicate or unsorted site)");
    }
  }
  const auto k = static_cast<Eigen::Index>(sites.size());
  std::vector<double> values(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) values[i] = f(sites[i]);
  Eigen::MatrixXd l(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    l(i, i) = f.derivative(sites[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      l(i, j) = l(j, i) = (values[i] - values[j]) / (sites[i] - sites[j]);
    }
  }
  return HermitianMatrix::from_real(l);
}

Verdict monotonicity_test(const ScalarFunction& f, const SpectrumWindow& window,
                          std::size_t max_sites, std::size_t trials, const RandomSpec& spec,
                          const Tolerances& tol) {
  if (max_sites < 1) throw ValidationError("monotonicity test needs max_sites >= 1");
  const auto [lo, hi] = window.compact_core();
  const std::size_t min_sites = std::min<std::size_t>(2, max_sites);
  WorstTracker worst;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomSpec trial = spec.offset(t);
    Rng rng(trial);
    Witness w{.kind = TestKind::monotonicity, .seed = trial.seed, .stream_id = trial.stream_id};
    const std::size_t k = min_sites + rng.below(max_sites - min_sites + 1);
    for (;;) {
      w.sites.clear();
      for (std::size_t i = 0; i < k; ++i) w.sites.push_back(rng.uniform(lo, hi));
      std::sort(w.sites.begin(), w.sites.end());
      bool separated = true;
      for (std::size_t i = 1; i < k; ++i) separated = separated && w.sites[i] - w.sites[i - 1] > 1e-9;
      if (separated) break;
    }
    const double margin = monotonicity_margin(f, w);
    worst.offer(margin, std::move(w));
  }
  return worst.finish(trials, tol);
}

ScalarFunction secant_transform(const ScalarFunction& f, double y) {
  if (!f.domain().contains(y)) throw DomainError("secant point outside the domain", y);
  const double fy = f(y);
  const double dfy = f.derivative(y);
  auto g = [f, y, fy, dfy](double x) {
    if (x == y) return dfy;
    return (f(x) - fy) / (x - y);
  };
  std::ostringstream name;
  name << "secant(" << f.name() << ", " << y << ")";
  return ScalarFunction(name.str(), g, f.domain());
}

double replay_witness(const ScalarFunction& f, const Witness& w) {
  switch (w.kind) {
    case TestKind::definition: return definition_margin(f, w);
    case TestKind::jensen: return jensen_margin(f, w);
    case TestKind::second_derivative: return second_derivative_margin(f, w);
    case TestKind::monotonicity: return monotonicity_margin(f, w);
    default: throw UnsupportedError("witness kind " + to_string(w.kind) + " is not a scalar-function test");
  }
}

}  // namespace matconvex
