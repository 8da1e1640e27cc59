#include "matconvex/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "matconvex/builtins.hpp"
#include "matconvex/entropy.hpp"
#include "matconvex/joint_concavity.hpp"
#include "matconvex/quadrature.hpp"
#include "matconvex/resolvent.hpp"
#include "matconvex/suite.hpp"

namespace matconvex {

namespace {

double parse_bound(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return x;
}

Tolerances resolve(const RunConfig& c, Tolerances defaults) {
  if (c.certify_tol) defaults.certify = *c.certify_tol;
  if (c.violate_tol) defaults.violate = *c.violate_tol;
  return defaults;
}

json tolerances_json(const Tolerances& t) { return {{"certify", t.certify}, {"violate", t.violate}}; }

Report start(const RunConfig& c) {
  Report r;
  r.command = c.command;
  r.config = {{"seed", c.seed}};
  return r;
}

constexpr std::uint64_t kSubStream = 1'000'000;

}  // namespace

SpectrumWindow parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError("window must be 'a,b', got '" + text + "'");
  return SpectrumWindow(parse_bound(text.substr(0, comma)), parse_bound(text.substr(comma + 1)));
}

std::vector<Eigen::Index> parse_dims(const std::string& text) {
  std::vector<Eigen::Index> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    const double d = parse_bound(part);
    if (d < 1.0 || d != std::floor(d) || d > 64.0) throw ValidationError("bad factor dimension '" + part + "'");
    dims.push_back(static_cast<Eigen::Index>(d));
  }
  if (dims.empty()) throw ValidationError("dims must look like 2x3x2");
  if (product_of(dims) > 64) throw ValidationError("total dimension above 64 is out of desk scale");
  return dims;
}

// ------------------------------------------------------------ certify-function

Report cmd_certify_function(const RunConfig& c) {
  if (c.mode != "convex" && c.mode != "monotone" && c.mode != "all") {
    throw ValidationError("mode must be convex, monotone or all");
  }
  const SpectrumWindow window = parse_window(c.window);
  ScalarFunction f = builtin(c.function).function;
  if (c.secant) f = secant_transform(f, *c.secant);
  if (window.lower() < f.domain().lower() || window.upper() > f.domain().upper()) {
    throw ValidationError("window " + window.to_string() + " is not inside the domain " +
                          f.domain().to_string() + " of " + c.function);
  }

  Report r = start(c);
  r.config.update({{"function", c.function},
                   {"window", window.to_string()},
                   {"n", c.n},
                   {"trials", c.trials},
                   {"mode", c.mode}});
  if (c.secant) r.config["secant_at"] = *c.secant;
  const RandomSpec base{c.seed, 0};
  json tolerances = json::object();
  if (c.mode != "monotone") {
    const Tolerances dt = resolve(c, kDefinitionTolerances);
    const Tolerances st = resolve(c, kSecondDerivativeTolerances);
    r.checks.push_back(record_from_verdict("definition", definition_test(f, window, c.n, c.trials, base, dt), dt));
    r.checks.push_back(record_from_verdict(
        "jensen", jensen_test(f, window, c.n, c.atoms, c.trials, base.offset(kSubStream), dt), dt));
    r.checks.push_back(record_from_verdict(
        "second_derivative",
        second_derivative_test(f, window, c.n, c.trials, base.offset(2 * kSubStream), st), st));
    tolerances["definition"] = tolerances["jensen"] = tolerances_json(dt);
    tolerances["second_derivative"] = tolerances_json(st);
    r.config["jensen_atoms"] = c.atoms;
  }
  if (c.mode != "convex") {
    const Tolerances mt = resolve(c, kMonotonicityTolerances);
    r.checks.push_back(record_from_verdict(
        "monotonicity", monotonicity_test(f, window, c.sites, c.trials, base.offset(3 * kSubStream), mt), mt));
    tolerances["monotonicity"] = tolerances_json(mt);
    r.config["max_sites"] = c.sites;
  }
  r.config["tolerances"] = tolerances;
  return r;
}

// --------------------------------------------------------------- check-entropy

namespace {

json with_bits(const EntropyReport& e) {
  json bits = json::object();
  for (const auto& [k, v] : e.values) {
    if (k.rfind("S", 0) == 0 || k.find("part") != std::string::npos || k == "mutual_information") {
      bits[k] = v / std::log(2.0);
    }
  }
  json d = e.to_json();
  d["bits"] = bits;
  return d;
}

std::vector<std::string> entropy_checks(const std::string& requested, std::size_t factors) {
  auto applicable = [&](const std::string& name) {
    if (name == "ssa") return factors == 3;
    if (name == "subadditivity" || name == "decomposition") return factors == 2;
    if (name == "lieb-ruskai") return factors >= 2;
    throw ValidationError("unknown entropy check '" + name +
                          "' (expected ssa, subadditivity, decomposition, lieb-ruskai or all)");
  };
  if (requested != "all") {
    if (!applicable(requested)) {
      throw ValidationError("check '" + requested + "' does not apply to a state with " +
                            std::to_string(factors) + " factors");
    }
    return {requested};
  }
  std::vector<std::string> out;
  for (const char* name : {"subadditivity", "decomposition", "ssa", "lieb-ruskai"}) {
    if (applicable(name)) out.push_back(name);
  }
  return out;
}

EntropyReport entropy_report(const std::string& check, const DensityOperator& rho) {
  if (check == "ssa") return ssa_report(rho);
  if (check == "subadditivity") return subadditivity_report(rho);
  if (check == "decomposition") return mutual_information_decomposition(rho);
  // Lieb-Ruskai against the maximally mixed state at lambda = 1/2.
  EntropyReport e;
  e.slacks = {{"lieb_ruskai", lieb_ruskai_concavity_gap(rho, DensityOperator::maximally_mixed(rho.dims()), 0.5)}};
  return e;
}

}  // namespace

Report cmd_check_entropy(const RunConfig& c) {
  const double tol = c.slack_tol.value_or(kSlackTolerance);
  Report r = start(c);
  r.config["slack_tolerance"] = tol;
  if (c.state_path.empty() == c.random_dims.empty()) {
    throw ValidationError("give exactly one of --state FILE or --random DIMS");
  }
  if (!c.state_path.empty()) {
    const DensityOperator rho = density_from_json(read_json_file(c.state_path));
    r.config["state"] = c.state_path;
    r.config["dims"] = rho.dims();
    r.config["check"] = c.check;
    for (const auto& name : entropy_checks(c.check, rho.factors())) {
      const EntropyReport e = entropy_report(name, rho);
      r.checks.push_back(record_from_slack(name, e.worst_slack() + tol, with_bits(e)));
      r.checks.back().margin = e.worst_slack();
    }
    return r;
  }
  const Dims dims = parse_dims(c.random_dims);
  r.config.update({{"random", c.random_dims}, {"trials", c.trials}, {"check", c.check}});
  std::uint64_t sub = 0;
  for (const auto& name : entropy_checks(c.check, dims.size())) {
    double worst = kInf;
    std::uint64_t worst_stream = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
      const RandomSpec spec{c.seed, sub * kSubStream + t};
      Rng rng(spec);
      const DensityOperator rho = random_density(dims, rng);
      double s;
      if (name == "lieb-ruskai") {
        const DensityOperator other = random_density(dims, rng);
        s = lieb_ruskai_concavity_gap(rho, other, rng.uniform());
      } else {
        s = entropy_report(name, rho).worst_slack();
      }
      if (s < worst) {
        worst = s;
        worst_stream = spec.stream_id;
      }
    }
    CheckRecord rec = record_from_slack(name, worst + tol, {{"trials", c.trials}, {"worst_stream_id", worst_stream}});
    rec.margin = worst;
    if (c.trials > 0) {
      Rng rng(RandomSpec{c.seed, worst_stream});
      rec.details["worst_state"] = density_to_json(random_density(dims, rng));
    }
    r.checks.push_back(std::move(rec));
    ++sub;
  }
  return r;
}

// ------------------------------------------------------ certify-representation

Report cmd_certify_representation(const RunConfig& c) {
  if (c.rep_path.empty()) throw ValidationError("--rep FILE is required");
  PickRepresentation rep = pick_from_json(read_json_file(c.rep_path));
  if (!c.window.empty()) {
    const SpectrumWindow sub = parse_window(c.window);
    if (sub.lower() < rep.window.lower() || sub.upper() > rep.window.upper()) {
      throw ValidationError("sampling window " + sub.to_string() + " is not inside " + rep.window.to_string());
    }
    rep.window = sub;
  }
  rep.validate();
  if (!rep.window.bounded()) {
    throw ValidationError("representation window " + rep.window.to_string() +
                          " is unbounded; pass --window a,b with a compact sub-window for sampling");
  }
  const Tolerances st = resolve(c, kSecondDerivativeTolerances);
  Report r = start(c);
  r.config.update({{"rep", c.rep_path},
                   {"window", rep.window.to_string()},
                   {"n", c.n},
                   {"trials", c.trials},
                   {"tolerances", tolerances_json(st)}});
  r.checks.push_back(record_from_verdict("second_derivative",
                                         certify_representation(rep, c.n, c.trials, {c.seed, 0}, st), st));
  double paths = 0.0;
  double decomposition = 0.0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng(RandomSpec{c.seed, kSubStream + t});
    const HermitianMatrix a = random_in_window(c.n, rep.window, rng);
    const HermitianMatrix atomwise = pick_eval_matrix(rep, a);
    const HermitianMatrix spectral = pick_eval_matrix_spectral(rep, a);
    paths = std::max(paths, (atomwise - spectral).frobenius_norm() / (1.0 + spectral.frobenius_norm()));
    const double z = rng.uniform(rep.window.lower(), rep.window.upper());
    for (const auto& atom : rep.atoms) {
      decomposition = std::max(decomposition, elementary_decomposition_residual(atom.u, rep.c, z, rep.window));
    }
  }
  r.checks.push_back(record_from_slack("atomwise_vs_spectral", 1e-9 - paths, {{"max_relative_deviation", paths}}));
  r.checks.push_back(
      record_from_slack("elementary_decomposition", 1e-12 - decomposition, {{"max_residual", decomposition}}));
  return r;
}

// ------------------------------------------------------------ check-concavity

namespace {

void parallel_sum_suite(const RunConfig& c, Report& r) {
  if (c.k < 1 || c.k > 8) throw ValidationError("k must lie in 1..8");
  const TupleSampler sampler = window_sampler(SpectrumWindow(0.2, 5.0));
  const TupleMap map = [](const MatrixTuple& t) { return parallel_sum(t); };
  double top = -kInf, projection = 0.0, fd_dev = 0.0;
  std::uint64_t worst_stream = 0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    const RandomSpec spec{c.seed, t};
    Rng rng(spec);
    const MatrixTuple tuple = sampler(rng, c.k, c.n);
    std::vector<HermitianMatrix> q;
    for (std::size_t j = 0; j < c.k; ++j) q.push_back(random_hermitian(c.n, rng));
    const DirectionTuple dirs(std::move(q));
    const HermitianMatrix h = parallel_sum_hessian(tuple, dirs);
    const double e = max_eigenvalue(h);
    if (e > top) {
      top = e;
      worst_stream = spec.stream_id;
    }
    const auto [sym, idem] = projection_residuals(tuple);
    projection = std::max({projection, sym, idem});
    const double hn = h.frobenius_norm();
    if (hn > 0.0) {
      const HermitianMatrix fd = multivariate_second_difference(map, tuple, dirs, default_tuple_step(tuple));
      fd_dev = std::max(fd_dev, (h - fd).frobenius_norm() / hn);
    }
  }
  r.checks.push_back(record_from_slack("hessian_negativity", 1e-8 - top,
                                       {{"max_eigenvalue", top}, {"worst_stream_id", worst_stream}}));
  r.checks.push_back(record_from_slack("projection", 1e-9 - projection, {{"max_residual", projection}}));
  r.checks.push_back(record_from_slack("hessian_vs_fd", 1e-4 - fd_dev, {{"max_relative_deviation", fd_dev}}));
  const Tolerances tol = resolve(c, kSecondDerivativeTolerances);
  r.checks.push_back(record_from_verdict(
      "joint_concavity_local",
      joint_concavity_test(map, sampler, c.k, c.n, c.trials, {c.seed, kSubStream}, JointMode::local, tol), tol));
}

void tensor_power_suite(const RunConfig& c, Report& r) {
  const std::vector<double> pv = c.p.empty() ? std::vector<double>{0.5, 0.5} : c.p;
  const PowerVector p(pv);
  const double tol = c.certify_tol.value_or(1e-5);
  const QuadratureConfig quad{c.nodes, tol};
  quad.validate();
  r.config.update({{"p", pv}, {"nodes", c.nodes}, {"tolerance", tol}});
  const SpectrumWindow w(0.5, 3.0);
  auto draw = [&](Rng& rng) {
    std::vector<HermitianMatrix> e;
    for (std::size_t j = 0; j < p.size(); ++j) e.push_back(random_in_window(c.n, w, rng));
    return MatrixTuple(std::move(e));
  };
  double worst = 0.0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng(RandomSpec{c.seed, t});
    const MatrixTuple tuple = draw(rng);
    const HermitianMatrix direct = tensor_power_direct(tuple, p);
    const HermitianMatrix quadv = tensor_power_integral(tuple, p, quad);
    worst = std::max(worst, (quadv - direct).frobenius_norm() / direct.frobenius_norm());
  }
  r.checks.push_back(record_from_slack("quadrature_error", tol - worst, {{"max_relative_error", worst}}));

  const bool all_positive = std::all_of(pv.begin(), pv.end(), [](double x) { return x > 0.0; });
  if (pv.size() >= 2 && all_positive && std::abs(p.sum() - 1.0) <= 1e-12) {
    double oracle = 1.0;
    for (double x : pv) oracle *= gamma_by_quadrature(x);
    const double value = c_constant(p, quad);
    r.checks.push_back(record_from_slack("c_constant", tol - std::abs(value - oracle),
                                         {{"value", value}, {"gamma_oracle", oracle}}));
  }
  if (c.curve) {
    Rng rng(RandomSpec{c.seed, kSubStream});
    const MatrixTuple tuple = draw(rng);
    const HermitianMatrix direct = tensor_power_direct(tuple, p);
    json curve = json::array();
    double previous = kInf, decrease = kInf;
    for (int nodes : {16, 32, 64, 128}) {
      const double err = (tensor_power_integral(tuple, p, {nodes, tol}) - direct).frobenius_norm() /
                         direct.frobenius_norm();
      curve.push_back({{"nodes", nodes}, {"relative_error", err}});
      if (std::isfinite(previous)) decrease = std::min(decrease, previous - err);
      previous = err;
    }
    r.checks.push_back(record_from_slack("convergence", decrease, {{"curve", curve}}));
  }
}

void lieb_suite(const RunConfig& c, Report& r) {
  const double p = c.p.size() > 0 ? c.p[0] : 0.5;
  const double q = c.p.size() > 1 ? c.p[1] : 1.0 - p;
  const double tol = c.certify_tol.value_or(1e-8);
  r.config.update({{"p", p}, {"r", q}});
  const SpectrumWindow w(0.1, 3.0);
  double gap = kInf, vec = 0.0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng(RandomSpec{c.seed, t});
    const HermitianMatrix a0 = random_in_window(c.n, w, rng), a1 = random_in_window(c.n, w, rng);
    const HermitianMatrix b0 = random_in_window(c.n, w, rng), b1 = random_in_window(c.n, w, rng);
    const CMatrix k = ginibre(c.n, c.n, rng);
    const double f0 = lieb_functional(a0, b0, k, p, q);
    const double f1 = lieb_functional(a1, b1, k, p, q);
    const double mid = lieb_functional((a0 + a1) * 0.5, (b0 + b1) * 0.5, k, p, q);
    gap = std::min(gap, (mid - 0.5 * (f0 + f1)) / (1.0 + std::max(std::abs(f0), std::abs(f1))));
    vec = std::max(vec, vectorization_residual(a0, b0, k, p, q));
  }
  r.checks.push_back(record_from_slack("midpoint_concavity", gap + tol, {{"min_scaled_gap", gap}}));
  r.checks.push_back(record_from_slack("vectorization", 1e-10 - vec, {{"max_residual", vec}}));
}

void wyd_suite(const RunConfig& c, Report& r) {
  const double p = c.p.empty() ? 0.5 : c.p[0];
  const double tol = c.certify_tol.value_or(1e-8);
  r.config["p"] = p;
  double gap = kInf, floor = kInf, zero = 0.0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng(RandomSpec{c.seed, t});
    const DensityOperator r0 = random_density({c.n}, rng), r1 = random_density({c.n}, rng);
    const HermitianMatrix k = random_hermitian(c.n, rng);
    const double f0 = wyd_trace_term(r0.matrix(), k, p);
    const double f1 = wyd_trace_term(r1.matrix(), k, p);
    const double mid = wyd_trace_term((r0.matrix() + r1.matrix()) * 0.5, k, p);
    gap = std::min(gap, (mid - 0.5 * (f0 + f1)) / (1.0 + std::max(std::abs(f0), std::abs(f1))));
    floor = std::min({floor, wyd_skew_information(r0, k, p), wyd_skew_information(r1, k, p)});
    // A K that commutes with rho: a polynomial in rho.
    const HermitianMatrix kc = r0.matrix() * rng.uniform(-2.0, 2.0) + sandwich(r0.matrix(), r0.matrix());
    zero = std::max(zero, std::abs(wyd_skew_information(r0, kc, p)));
  }
  r.checks.push_back(record_from_slack("trace_term_concavity", gap + tol, {{"min_scaled_gap", gap}}));
  r.checks.push_back(record_from_slack("nonnegativity", floor + 1e-10, {{"min_value", floor}}));
  r.checks.push_back(record_from_slack("commuting_zero", 1e-12 - zero, {{"max_abs_value", zero}}));
}

void perspective_suite(const RunConfig& c, Report& r) {
  const ScalarFunction root = builtin("sqrt").function;
  const TupleMap map = [&root](const MatrixTuple& t) { return perspective(root, t[0], t[1]); };
  const Tolerances tol = resolve(c, kDefinitionTolerances);
  r.config["function"] = "sqrt";
  r.checks.push_back(record_from_verdict(
      "joint_concavity_midpoint",
      joint_concavity_test(map, window_sampler(SpectrumWindow(0.1, 5.0)), 2, c.n, c.trials, {c.seed, 0},
                           JointMode::midpoint, tol),
      tol));
  double homogeneity = 0.0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng rng(RandomSpec{c.seed, kSubStream + t});
    const HermitianMatrix a = random_in_window(c.n, SpectrumWindow(0.1, 5.0), rng);
    const HermitianMatrix b = random_in_window(c.n, SpectrumWindow(0.1, 5.0), rng);
    const double s = rng.uniform(0.2, 5.0);
    homogeneity = std::max(homogeneity,
                           (perspective(root, a * s, b * s) - perspective(root, a, b) * s).frobenius_norm());
  }
  r.checks.push_back(record_from_slack("homogeneity", 1e-9 - homogeneity, {{"max_deviation", homogeneity}}));
}

void kubo_ando_suite(const RunConfig& c, Report& r) {
  std::vector<KuboAndoRepresentation> reps;
  if (!c.rep_path.empty()) {
    reps.push_back(kubo_ando_from_json(read_json_file(c.rep_path)));
    r.config["rep"] = c.rep_path;
  } else {
    Rng rng(RandomSpec{c.seed, 2 * kSubStream});
    for (int i = 0; i < 5; ++i) {
      KuboAndoRepresentation rep{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0), {}};
      const auto count = 1 + rng.below(3);
      for (std::uint64_t j = 0; j < count; ++j) rep.atoms.push_back({rng.uniform(0.1, 10.0), rng.uniform(0.1, 2.0)});
      reps.push_back(rep);
    }
    r.config["random_representations"] = 5;
  }
  const SpectrumWindow w(0.1, 5.0);
  double coherence = 0.0;
  double worst_margin = kInf;
  const Tolerances tol = resolve(c, kDefinitionTolerances);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const ScalarFunction f = kubo_ando_function(reps[i]);
    for (std::size_t t = 0; t < c.trials; ++t) {
      Rng rng(RandomSpec{c.seed, (3 + i) * kSubStream + t});
      const HermitianMatrix a = random_in_window(c.n, w, rng);
      const HermitianMatrix b = random_in_window(c.n, w, rng);
      coherence = std::max(coherence, (kubo_ando_eval(reps[i], a, b) - perspective(f, a, b)).frobenius_norm());
    }
    const auto rep = reps[i];
    const TupleMap map = [rep](const MatrixTuple& t) { return kubo_ando_eval(rep, t[0], t[1]); };
    const Verdict v = joint_concavity_test(map, window_sampler(w), 2, c.n, c.trials,
                                           {c.seed, (10 + i) * kSubStream}, JointMode::midpoint, tol);
    worst_margin = std::min(worst_margin, v.worst_margin);
  }
  r.checks.push_back(record_from_slack("representation_coherence", 1e-8 - coherence, {{"max_deviation", coherence}}));
  Verdict combined;
  combined.trials = c.trials * reps.size();
  combined.worst_margin = worst_margin;
  combined.status = classify(worst_margin, tol);
  r.checks.push_back(record_from_verdict("joint_concavity_midpoint", combined, tol));
}

}  // namespace

Report cmd_check_concavity(const RunConfig& c) {
  Report r = start(c);
  r.config.update({{"suite", c.suite}, {"n", c.n}, {"trials", c.trials}});
  if (c.suite == "parallel-sum") {
    r.config["k"] = c.k;
    parallel_sum_suite(c, r);
  } else if (c.suite == "tensor-power") {
    tensor_power_suite(c, r);
  } else if (c.suite == "lieb") {
    lieb_suite(c, r);
  } else if (c.suite == "wyd") {
    wyd_suite(c, r);
  } else if (c.suite == "perspective") {
    perspective_suite(c, r);
  } else if (c.suite == "kubo-ando") {
    kubo_ando_suite(c, r);
  } else {
    throw ValidationError("unknown concavity suite '" + c.suite +
                          "' (expected parallel-sum, tensor-power, lieb, wyd, perspective or kubo-ando)");
  }
  return r;
}

Report cmd_run_suite(const RunConfig& c) { return run_suite(c.seed, c.only); }

Report run_command(const RunConfig& c) {
  if (c.command == "certify-function") return cmd_certify_function(c);
  if (c.command == "check-entropy") return cmd_check_entropy(c);
  if (c.command == "certify-representation") return cmd_certify_representation(c);
  if (c.command == "check-concavity") return cmd_check_concavity(c);
  if (c.command == "run-suite") return cmd_run_suite(c);
  throw ValidationError("unknown command '" + c.command + "'");
}

}  // namespace matconvex
