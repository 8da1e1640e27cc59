#include "matconvex/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "matconvex/builtins.hpp"
#include "matconvex/entropy.hpp"
#include "matconvex/joint_concavity.hpp"
#include "matconvex/quadrature.hpp"
#include "matconvex/resolvent.hpp"

namespace matconvex {

namespace {

namespace cs = check_status;

/// Stream layout: check c, sub-battery s, trial t -> c * 10^6 + s * 10^4 + t.
RandomSpec streams(std::uint64_t seed, std::uint64_t check, std::uint64_t sub = 0) {
  return {seed, check * 1'000'000 + sub * 10'000};
}

/// U diag(lambda) U* with lambda uniform in [lo, hi].
HermitianMatrix spectrum_in(Eigen::Index n, double lo, double hi, Rng& rng) {
  const CMatrix u = haar_unitary(n, rng);
  RVector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) lambda(i) = rng.uniform(lo, hi);
  return HermitianMatrix::hermitian_part(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
}

/// Tracks the smallest slack of a battery together with where it occurred.
struct Worst {
  double slack = kInf;
  json at = nullptr;

  void see(double s, json where) {
    if (s < slack) {
      slack = s;
      at = std::move(where);
    }
  }
};

double verdict_slack(const Verdict& v, const Tolerances& tol) { return v.worst_margin + tol.certify; }

// ---------------------------------------------------------------- convexity

CheckRecord certify_x2_inv(std::uint64_t seed) {
  const SpectrumWindow w(0.1, 5.0);
  json runs = json::array();
  double slack = kInf;
  std::uint64_t sub = 0;
  for (const char* name : {"x2", "inv"}) {
    const ScalarFunction f = builtin(name).function;
    for (Eigen::Index n = 1; n <= 4; ++n) {
      const Verdict d = definition_test(f, w, n, 200, streams(seed, 1, sub++));
      const Verdict s = second_derivative_test(f, w, n, 200, streams(seed, 1, sub++));
      slack = std::min({slack, verdict_slack(d, kDefinitionTolerances),
                        verdict_slack(s, kSecondDerivativeTolerances)});
      if (d.status != Status::certified || s.status != Status::certified) slack = std::min(slack, -1.0);
      runs.push_back({{"function", name},
                      {"n", n},
                      {"definition", to_string(d.status)},
                      {"definition_margin", d.worst_margin},
                      {"second_derivative", to_string(s.status)},
                      {"second_derivative_margin", s.worst_margin}});
    }
  }
  return record_from_slack("convexity.certify_x2_inv", slack, {{"window", "(0.1, 5)"}, {"runs", runs}});
}

CheckRecord violate_x3_x4(std::uint64_t seed) {
  json details = {{"window", "(0.1, 2)"}, {"n", 2}, {"trials", 1000}};
  double slack = kInf;
  std::uint64_t sub = 0;
  for (const char* name : {"x3", "x4"}) {
    const ScalarFunction f = builtin(name).function;
    const Verdict v = definition_test(f, SpectrumWindow(0.1, 2.0), 2, 1000, streams(seed, 2, sub++));
    const json wj = json::parse(witness_to_json(*v.witness).dump());
    const double replayed = replay_witness(f, witness_from_json(wj));
    const double replay_error = std::abs(replayed - v.worst_margin);
    slack = std::min({slack, -kDefinitionTolerances.violate - v.worst_margin, 1e-12 - replay_error});
    if (v.status != Status::violated) slack = std::min(slack, -1.0);
    details[name] = {{"status", to_string(v.status)},
                     {"worst_margin", v.worst_margin},
                     {"replay_error", replay_error},
                     {"witness", wj}};
  }
  return record_from_slack("convexity.violate_x3_x4", slack, details);
}

CheckRecord monotonicity(std::uint64_t seed) {
  const ScalarFunction root = builtin("sqrt").function;
  const ScalarFunction cube = builtin("x3").function;
  const Verdict vs = monotonicity_test(root, SpectrumWindow(0.1, 10.0), 4, 200, streams(seed, 3, 0));
  const Verdict vc = monotonicity_test(cube, SpectrumWindow(0.1, 10.0), 4, 200, streams(seed, 3, 1));
  const HermitianMatrix l = loewner_matrix(cube, {0.1, 1.0});
  const HermitianMatrix closed = HermitianMatrix::from_real(
      (Eigen::MatrixXd(2, 2) << 0.03, 1.11, 1.11, 3.0).finished());
  const double deviation = (l - closed).frobenius_norm();
  const double lowest = min_eigenvalue(l);
  double slack = std::min({verdict_slack(vs, kMonotonicityTolerances),
                           -kMonotonicityTolerances.violate - vc.worst_margin, 1e-12 - deviation,
                           -lowest});
  if (vs.status != Status::certified || vc.status != Status::violated) slack = std::min(slack, -1.0);
  return record_from_slack("convexity.monotonicity", slack,
                           {{"sqrt", to_string(vs.status)},
                            {"sqrt_margin", vs.worst_margin},
                            {"x3", to_string(vc.status)},
                            {"x3_margin", vc.worst_margin},
                            {"x3_two_site_witness", {{"sites", {0.1, 1.0}},
                                                     {"deviation_from_closed_form", deviation},
                                                     {"min_eigenvalue", lowest}}}});
}

CheckRecord kernel_identity(std::uint64_t seed) {
  const ScalarFunction f = builtin("x4").function;
  const SpectrumWindow w(0.1, 2.0);
  double worst = 0.0;
  for (Eigen::Index n : {1, 2}) {
    for (std::uint64_t t = 0; t < 10; ++t) {
      Rng rng(streams(seed, 4, n).offset(t));
      const HermitianMatrix a0 = random_in_window(n, w, rng);
      const HermitianMatrix a1 = random_in_window(n, w, rng);
      const MixingWeight lambda(rng.uniform(0.05, 0.95));
      worst = std::max(worst, kernel_identity_residual(f, a0, a1, lambda, 32));
    }
  }
  return record_from_slack("convexity.kernel_identity", 1e-6 - worst,
                           {{"function", "x4"}, {"nodes_per_panel", 32}, {"max_residual", worst}});
}

// ---------------------------------------------------------------- resolvent

CheckRecord resolvent_identity(std::uint64_t seed) {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(streams(seed, 5).offset(t));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 4);
    const HermitianMatrix a = random_in_window(n, SpectrumWindow(0.5, 2.0), rng);
    const HermitianMatrix d = random_direction(n, rng) * 0.3;
    worst = std::max(worst, resolvent_identity_residual(a, d));
  }
  return record_from_slack("resolvent.identity", 1e-10 - worst, {{"triples", 100}, {"max_residual", worst}});
}

CheckRecord resolvent_fd(std::uint64_t seed) {
  const SpectrumWindow w(-1.0, 1.0);
  double worst = 0.0;
  double lowest = kInf;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(streams(seed, 6).offset(t));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(t % 4);
    const HermitianMatrix a = random_in_window(n, w, rng);
    const HermitianMatrix q = random_direction(n, rng);
    const double side = t % 2 == 0 ? 1.0 : -1.0;
    const ResolventPoint p(side * (1.0 + rng.uniform(0.1, 3.0)), w);
    const HermitianMatrix exact = resolvent_second_derivative(a, q, p);
    const ScalarFunction fu("f_u", [p](double z) { return p.f(z); }, w);
    const HermitianMatrix fd = second_derivative_fd(fu, a, q, default_fd_step(a));
    worst = std::max(worst, (exact - fd).frobenius_norm() / exact.frobenius_norm());
    lowest = std::min(lowest, min_eigenvalue(exact));
  }
  return record_from_slack("resolvent.second_derivative_fd", std::min(1e-4 - worst, lowest + 1e-10),
                           {{"triples", 100}, {"max_relative_deviation", worst}, {"min_eigenvalue", lowest}});
}

CheckRecord elementary_decomposition(std::uint64_t seed) {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Rng rng(streams(seed, 7).offset(t));
    const SpectrumWindow w = t % 2 == 0 ? SpectrumWindow(-1.0, 1.0) : SpectrumWindow(0.0, 1.0);
    const double c = rng.uniform(w.lower(), w.upper());
    const double z = rng.uniform(w.lower(), w.upper());
    const double u = (t / 2) % 2 == 0 ? w.upper() + rng.uniform(0.5, 5.0) : w.lower() - rng.uniform(0.5, 5.0);
    worst = std::max(worst, elementary_decomposition_residual(u, c, z, w));
  }
  return record_from_slack("resolvent.elementary_decomposition", 1e-12 - worst,
                           {{"points", 1000}, {"max_residual", worst}});
}

// ----------------------------------------------------------- jointconcavity

CheckRecord parallel_sum_certificate(std::uint64_t seed) {
  const TupleSampler sampler = window_sampler(SpectrumWindow(0.2, 5.0));
  const TupleMap map = [](const MatrixTuple& t) { return parallel_sum(t); };
  double top = -kInf, projection = 0.0, fd_dev = 0.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(streams(seed, 8).offset(t));
    const std::size_t k = 2 + t % 2;
    const Eigen::Index n = 2 + static_cast<Eigen::Index>((t / 2) % 4);
    const MatrixTuple tuple = sampler(rng, k, n);
    std::vector<HermitianMatrix> q;
    for (std::size_t j = 0; j < k; ++j) q.push_back(random_hermitian(n, rng));
    const DirectionTuple dirs(std::move(q));
    const HermitianMatrix h = parallel_sum_hessian(tuple, dirs);
    top = std::max(top, max_eigenvalue(h));
    const auto [sym, idem] = projection_residuals(tuple);
    projection = std::max({projection, sym, idem});
    const HermitianMatrix fd = multivariate_second_difference(map, tuple, dirs, default_tuple_step(tuple));
    fd_dev = std::max(fd_dev, (h - fd).frobenius_norm() / h.frobenius_norm());
  }
  return record_from_slack("jointconcavity.parallel_sum",
                           std::min({1e-8 - top, 1e-9 - projection, 1e-4 - fd_dev}),
                           {{"draws", 200},
                            {"max_hessian_eigenvalue", top},
                            {"max_projection_residual", projection},
                            {"max_fd_relative_deviation", fd_dev}});
}

CheckRecord tensor_power(std::uint64_t seed) {
  const SpectrumWindow w(0.5, 3.0);
  double worst = 0.0;
  std::uint64_t sub = 0;
  for (const auto& p : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.3, 0.7}}) {
    for (Eigen::Index n : {2, 3}) {
      for (std::uint64_t t = 0; t < 20; ++t) {
        Rng rng(streams(seed, 9, sub).offset(t));
        const MatrixTuple tuple({random_in_window(n, w, rng), random_in_window(n, w, rng)});
        const HermitianMatrix direct = tensor_power_direct(tuple, PowerVector(p));
        const HermitianMatrix quad = tensor_power_integral(tuple, PowerVector(p), {64, 1e-5});
        worst = std::max(worst, (quad - direct).frobenius_norm() / direct.frobenius_norm());
      }
      ++sub;
    }
  }
  // Convergence curve on one fixed instance.
  Rng rng(streams(seed, 9, 99));
  const MatrixTuple fixed({random_in_window(2, w, rng), random_in_window(2, w, rng)});
  const PowerVector p({0.3, 0.7});
  const HermitianMatrix direct = tensor_power_direct(fixed, p);
  json curve = json::array();
  double previous = kInf;
  double decrease = kInf;
  for (int nodes : {16, 32, 64, 128}) {
    const double err = (tensor_power_integral(fixed, p, {nodes, 1e-5}) - direct).frobenius_norm() /
                       direct.frobenius_norm();
    curve.push_back({{"nodes", nodes}, {"relative_error", err}});
    if (std::isfinite(previous)) decrease = std::min(decrease, previous - err);
    previous = err;
  }
  const double slack = std::min(1e-5 - worst, decrease > 0.0 ? 1.0 : decrease);
  return record_from_slack("jointconcavity.tensor_power", slack,
                           {{"pairs_per_case", 20},
                            {"nodes", 64},
                            {"max_relative_error", worst},
                            {"curve_p", {0.3, 0.7}},
                            {"curve", curve}});
}

CheckRecord c_constant_check(std::uint64_t) {
  const double g2 = gamma_by_quadrature(0.5);
  const double g3 = gamma_by_quadrature(1.0 / 3.0);
  const double c2 = c_constant(PowerVector({0.5, 0.5}));
  const double c3 = c_constant(PowerVector({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));
  const double e2 = std::abs(c2 - g2 * g2);
  const double e3 = std::abs(c3 - g3 * g3 * g3);
  return record_from_slack("jointconcavity.c_constant", std::min(1e-6 - e2, 1e-5 - e3),
                           {{"c2", c2},
                            {"gamma_half_squared", g2 * g2},
                            {"pi", std::numbers::pi},
                            {"c3", c3},
                            {"gamma_third_cubed", g3 * g3 * g3}});
}

CheckRecord lieb_wyd(std::uint64_t seed) {
  const SpectrumWindow w(0.1, 3.0);
  double lieb = kInf, wyd_gap = kInf, wyd_floor = kInf, wyd_zero = 0.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(streams(seed, 11, 0).offset(t));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 3);
    const Eigen::Index m = 2 + static_cast<Eigen::Index>((t / 3) % 2);
    const HermitianMatrix a0 = random_in_window(n, w, rng), a1 = random_in_window(n, w, rng);
    const HermitianMatrix b0 = random_in_window(m, w, rng), b1 = random_in_window(m, w, rng);
    const CMatrix k = ginibre(m, n, rng);
    const double p = rng.uniform(0.05, 0.95);
    const double r = rng.uniform(0.0, 1.0 - p);
    const double f0 = lieb_functional(a0, b0, k, p, r);
    const double f1 = lieb_functional(a1, b1, k, p, r);
    const double mid = lieb_functional((a0 + a1) * 0.5, (b0 + b1) * 0.5, k, p, r);
    lieb = std::min(lieb, (mid - 0.5 * (f0 + f1)) / (1.0 + std::max(std::abs(f0), std::abs(f1))));
  }
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(streams(seed, 11, 1).offset(t));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 3);
    const DensityOperator r0 = random_density({n}, rng), r1 = random_density({n}, rng);
    const HermitianMatrix k = random_hermitian(n, rng);
    const double p = rng.uniform(0.05, 0.95);
    // The trace term is the concave part; the skew information itself is convex.
    const double f0 = wyd_trace_term(r0.matrix(), k, p);
    const double f1 = wyd_trace_term(r1.matrix(), k, p);
    const double mid = wyd_trace_term((r0.matrix() + r1.matrix()) * 0.5, k, p);
    wyd_gap = std::min(wyd_gap, (mid - 0.5 * (f0 + f1)) / (1.0 + std::max(std::abs(f0), std::abs(f1))));
    wyd_floor = std::min({wyd_floor, wyd_skew_information(r0, k, p), wyd_skew_information(r1, k, p)});
  }
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng(streams(seed, 11, 2).offset(t));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 3);
    const CMatrix u = haar_unitary(n, rng);
    RVector probs(n), kd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      probs(i) = rng.uniform(0.05, 1.0);
      kd(i) = rng.uniform(-2.0, 2.0);
    }
    probs /= probs.sum();
    auto conj = [&](const RVector& d) {
      return HermitianMatrix::hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint());
    };
    wyd_zero = std::max(wyd_zero, std::abs(wyd_skew_information(DensityOperator(conj(probs)), conj(kd),
                                                                rng.uniform(0.05, 0.95))));
  }
  return record_from_slack("jointconcavity.lieb_wyd",
                           std::min({lieb + 1e-8, wyd_gap + 1e-8, wyd_floor + 1e-10, 1e-12 - wyd_zero}),
                           {{"pairs", 200},
                            {"min_lieb_scaled_gap", lieb},
                            {"min_wyd_scaled_gap", wyd_gap},
                            {"min_skew_information", wyd_floor},
                            {"max_wyd_commuting_value", wyd_zero}});
}

// ------------------------------------------------------------------ entropy

CheckRecord ssa_battery(std::uint64_t seed) {
  Worst worst;
  std::uint64_t sub = 0;
  for (const Dims& dims : {Dims{2, 2, 2}, Dims{2, 3, 2}}) {
    for (std::uint64_t t = 0; t < 500; ++t) {
      const RandomSpec spec = streams(seed, 12, sub).offset(t);
      const double s = ssa_report(random_density(dims, spec)).slack("ssa");
      worst.see(s + kSlackTolerance, {{"dims", dims}, {"stream_id", spec.stream_id}, {"slack", s}});
    }
    ++sub;
  }
  return record_from_slack("entropy.ssa", worst.slack,
                           {{"states_per_dims", 500}, {"tolerance", kSlackTolerance}, {"worst", worst.at}});
}

CheckRecord subadditivity_chain(std::uint64_t seed) {
  Worst worst;
  double deviation = 0.0;
  for (std::uint64_t t = 0; t < 500; ++t) {
    const RandomSpec spec = streams(seed, 13).offset(t);
    const EntropyReport r = subadditivity_report(random_density({2, 3}, spec));
    const json where = {{"stream_id", spec.stream_id}};
    worst.see(r.slack("pinching") + 1e-9, where);
    worst.see(r.slack("classical_subadditivity") + 1e-9, where);
    deviation = std::max(deviation, r.value("marginal_deviation"));
  }
  return record_from_slack("entropy.subadditivity", std::min(worst.slack, 1e-10 - deviation),
                           {{"states", 500},
                            {"dims", {2, 3}},
                            {"worst", worst.at},
                            {"max_marginal_deviation", deviation}});
}

CheckRecord mutual_information(std::uint64_t seed) {
  Worst worst;
  double residual = 0.0;
  for (std::uint64_t t = 0; t < 500; ++t) {
    // Same ensemble as the subadditivity chain.
    const RandomSpec spec = streams(seed, 13).offset(t);
    const EntropyReport r = mutual_information_decomposition(random_density({2, 3}, spec));
    const json where = {{"stream_id", spec.stream_id}};
    worst.see(r.value("quantum_part") + 1e-9, where);
    worst.see(r.value("classical_part") + 1e-9, where);
    residual = std::max(residual, r.value("sum_residual"));
  }
  const EntropyReport bell = mutual_information_decomposition(bell_state());
  const double bell_error = std::max(std::abs(bell.value("quantum_part") - std::log(2.0)),
                                     std::abs(bell.value("classical_part") - std::log(2.0)));
  return record_from_slack("entropy.mutual_information",
                           std::min({worst.slack, 1e-10 - residual, 1e-9 - bell_error}),
                           {{"states", 500},
                            {"worst", worst.at},
                            {"max_sum_residual", residual},
                            {"bell_quantum_part", bell.value("quantum_part")},
                            {"bell_classical_part", bell.value("classical_part")}});
}

CheckRecord relative_entropy_machinery(std::uint64_t seed) {
  double eps_residual = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng(streams(seed, 14, 0).offset(t));
    const HermitianMatrix a = spectrum_in(3, 0.1, 2.0, rng);
    const HermitianMatrix b = spectrum_in(3, 0.1, 2.0, rng);
    eps_residual = std::max(eps_residual, epsilon_limit_residual(a, b, 1e-5));
  }
  double joint = kInf;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(streams(seed, 14, 1).offset(t));
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 3);
    const HermitianMatrix a0 = spectrum_in(n, 0.05, 2.0, rng), a1 = spectrum_in(n, 0.05, 2.0, rng);
    const HermitianMatrix b0 = spectrum_in(n, 0.05, 2.0, rng), b1 = spectrum_in(n, 0.05, 2.0, rng);
    const double gap = relative_entropy((a0 + a1) * 0.5, (b0 + b1) * 0.5) -
                       0.5 * (relative_entropy(a0, b0) + relative_entropy(a1, b1));
    joint = std::min(joint, gap);
  }
  double lieb_ruskai = kInf;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(streams(seed, 14, 2).offset(t));
    const Dims dims = t % 3 == 0 ? Dims{2, 2} : t % 3 == 1 ? Dims{2, 3} : Dims{2, 2, 2};
    const DensityOperator ra = random_density(dims, rng);
    const DensityOperator rb = random_density(dims, rng);
    lieb_ruskai = std::min(lieb_ruskai, lieb_ruskai_concavity_gap(ra, rb, rng.uniform()));
  }
  return record_from_slack("entropy.relative_entropy",
                           std::min({1e-3 - eps_residual, joint + 1e-8, lieb_ruskai + 1e-8}),
                           {{"epsilon", 1e-5},
                            {"max_epsilon_residual", eps_residual},
                            {"min_joint_concavity_gap", joint},
                            {"min_lieb_ruskai_gap", lieb_ruskai}});
}

CheckRecord monte_carlo(std::uint64_t seed) {
  const DensityOperator random = random_density({2, 2}, streams(seed, 15, 0));
  const double haar_random = haar_average_residual(random, 10'000, streams(seed, 15, 1));
  const double haar_bell = haar_average_residual(bell_state(), 10'000, streams(seed, 15, 2));
  const DensityOperator exact = pinch(random);
  const double d2 =
      (pinch_monte_carlo(random, 100, streams(seed, 15, 3)).matrix() - exact.matrix()).frobenius_norm();
  const double d4 =
      (pinch_monte_carlo(random, 10'000, streams(seed, 15, 4)).matrix() - exact.matrix()).frobenius_norm();
  return record_from_slack("entropy.monte_carlo",
                           std::min({0.05 - haar_random, 0.05 - haar_bell, d2 - d4}),
                           {{"haar_residual_random_1e4", haar_random},
                            {"haar_residual_bell_1e4", haar_bell},
                            {"pinch_distance_1e2", d2},
                            {"pinch_distance_1e4", d4}});
}

/// Wraps a check to fail (rather than abort the suite) on a library error.
SuiteCheck make(std::string group, std::string name, std::string criterion,
                CheckRecord (*fn)(std::uint64_t)) {
  return {group, name, criterion, [name, fn](std::uint64_t seed) {
            try {
              return fn(seed);
            } catch (const Error& e) {
              CheckRecord r;
              r.name = name;
              r.status = cs::kFail;
              r.margin = std::nan("");
              r.details = {{"error", e.what()}};
              return r;
            }
          }};
}

}  // namespace

const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> groups{"convexity", "resolvent", "jointconcavity", "entropy"};
  return groups;
}

const std::vector<SuiteCheck>& suite_checks() {
  static const std::vector<SuiteCheck> checks{
      make("entropy", "entropy.ssa", "SSA battery", ssa_battery),
      make("entropy", "entropy.subadditivity", "Subadditivity chain", subadditivity_chain),
      make("entropy", "entropy.mutual_information", "Mutual-information decomposition", mutual_information),
      make("jointconcavity", "jointconcavity.parallel_sum", "Parallel-sum certificate", parallel_sum_certificate),
      make("jointconcavity", "jointconcavity.tensor_power", "Tensor-power quadrature", tensor_power),
      make("jointconcavity", "jointconcavity.c_constant", "Constant C_k", c_constant_check),
      make("jointconcavity", "jointconcavity.lieb_wyd", "Lieb functional & WYD", lieb_wyd),
      make("entropy", "entropy.relative_entropy", "Relative-entropy machinery", relative_entropy_machinery),
      make("convexity", "convexity.certify_x2_inv", "Convexity detectors with ground truth", certify_x2_inv),
      make("convexity", "convexity.violate_x3_x4", "Convexity detectors with ground truth", violate_x3_x4),
      make("convexity", "convexity.monotonicity", "Convexity detectors with ground truth", monotonicity),
      make("resolvent", "resolvent.identity", "Resolvent exactness", resolvent_identity),
      make("resolvent", "resolvent.second_derivative_fd", "Resolvent exactness", resolvent_fd),
      make("resolvent", "resolvent.elementary_decomposition", "Resolvent exactness", elementary_decomposition),
      make("convexity", "convexity.kernel_identity", "Kernel identity", kernel_identity),
      make("entropy", "entropy.monte_carlo", "Monte Carlo physics checks", monte_carlo),
  };
  return checks;
}

Report run_suite(std::uint64_t seed, const std::vector<std::string>& only) {
  for (const auto& g : only) {
    if (std::find(suite_groups().begin(), suite_groups().end(), g) == suite_groups().end()) {
      throw ValidationError("unknown suite group '" + g +
                            "' (expected convexity, resolvent, jointconcavity or entropy)");
    }
  }
  Report report;
  report.command = "run-suite";
  report.config = {{"seed", seed}, {"only", only.empty() ? json(suite_groups()) : json(only)}};
  for (const auto& check : suite_checks()) {
    if (!only.empty() && std::find(only.begin(), only.end(), check.group) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    CheckRecord r = check.run(seed);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.details["criterion"] = check.criterion;
    if (r.name == "entropy.ssa" && *r.seconds >= 60.0) {
      r.status = cs::kFail;
      r.details["runtime_limit_exceeded"] = true;
    }
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace matconvex
