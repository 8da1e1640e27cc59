#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "matconvex/builtins.hpp"
#include "matconvex/error.hpp"
#include "matconvex/joint_concavity.hpp"
#include "matconvex/quadrature.hpp"
#include "matconvex/random.hpp"

using namespace matconvex;

namespace {

constexpr double kPi = std::numbers::pi;

HermitianMatrix scalar(double x) { return HermitianMatrix::identity(1) * x; }

MatrixTuple pair(const HermitianMatrix& a, const HermitianMatrix& b) { return MatrixTuple({a, b}); }

/// Permutation taking index a*m + b of C^n (x) C^m to b*n + a of C^m (x) C^n.
CMatrix swap_factors(Eigen::Index n, Eigen::Index m) {
  CMatrix s = CMatrix::Zero(n * m, n * m);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) s(b * n + a, a * m + b) = 1.0;
  }
  return s;
}

}  // namespace

TEST_CASE("parallel sum examples") {
  CHECK(dist(parallel_sum(pair(HermitianMatrix::identity(2), HermitianMatrix::identity(2))),
             HermitianMatrix::identity(2) * 0.5) < 1e-14);
  CHECK(parallel_sum(pair(scalar(2), scalar(3)))(0, 0).real() == doctest::Approx(1.2).epsilon(1e-14));
  const auto d = HermitianMatrix::diagonal({1.0, 2.0});
  CHECK(dist(parallel_sum(MatrixTuple({d, d, d})), HermitianMatrix::diagonal({1.0 / 3, 2.0 / 3})) < 1e-14);
  CHECK_THROWS_AS(parallel_sum(pair(HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::identity(2))),
                  ConditioningError);
}

TEST_CASE("parallel sum permutation symmetry") {
  Rng rng(RandomSpec{30, 0});
  const SpectrumWindow w(0.2, 4);
  const auto a = random_in_window(3, w, rng), b = random_in_window(3, w, rng), c = random_in_window(3, w, rng);
  const auto p = parallel_sum(MatrixTuple({a, b, c}));
  CHECK(dist(p, parallel_sum(MatrixTuple({c, a, b}))) <= 1e-12);
  CHECK(dist(p, parallel_sum(MatrixTuple({b, c, a}))) <= 1e-12);
}

TEST_CASE("parallel sum Hessian") {
  Rng rng(RandomSpec{31, 0});
  const auto a = random_in_window(3, SpectrumWindow(0.2, 4), rng);
  const auto zero = DirectionTuple({HermitianMatrix::zero(3), HermitianMatrix::zero(3)});
  CHECK(parallel_sum_hessian(pair(a, a), zero).frobenius_norm() == 0.0);
  // one matrix: the parallel sum is the identity map
  const DirectionTuple one({random_hermitian(3, rng)});
  CHECK(parallel_sum_hessian(MatrixTuple({a}), one).frobenius_norm() < 1e-12);
  // frozen value, confirmed against the finite-difference oracle
  const MatrixTuple ones = pair(scalar(1), scalar(1));
  const DirectionTuple q({scalar(1), scalar(-1)});
  const double exact = parallel_sum_hessian(ones, q)(0, 0).real();
  CHECK(exact == doctest::Approx(-1.0).epsilon(1e-14));
  const TupleMap map = [](const MatrixTuple& t) { return parallel_sum(t); };
  CHECK(multivariate_second_difference(map, ones, q, 1e-3)(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("Hessian negativity and FD agreement on random draws") {
  const TupleMap map = [](const MatrixTuple& t) { return parallel_sum(t); };
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(RandomSpec{32, t});
    const std::size_t k = 2 + t % 2;
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 4);
    const MatrixTuple tuple = window_sampler(SpectrumWindow(0.2, 5))(rng, k, n);
    std::vector<HermitianMatrix> q;
    for (std::size_t j = 0; j < k; ++j) q.push_back(random_hermitian(n, rng));
    const DirectionTuple dirs(q);
    const auto h = parallel_sum_hessian(tuple, dirs);
    CHECK(max_eigenvalue(h) <= 1e-8);
    if (t < 100) {
      const auto fd = multivariate_second_difference(map, tuple, dirs, default_tuple_step(tuple));
      CHECK(dist(h, fd) <= 1e-4 * h.frobenius_norm());
    }
    const auto [sym, idem] = projection_residuals(tuple);
    CHECK(sym <= 1e-9);
    CHECK(idem <= 1e-9);
  }
}

TEST_CASE("projection blocks") {
  const auto [s1, i1] = projection_residuals(MatrixTuple({random_in_window(3, SpectrumWindow(0.5, 2), RandomSpec{33, 0})}));
  CHECK(s1 <= 1e-12);
  CHECK(i1 <= 1e-12);
  const CMatrix t = projection_blocks(pair(HermitianMatrix::identity(2), HermitianMatrix::identity(2)));
  CHECK(dist(t, CMatrix::Constant(2, 2, 0.0) + 0.5 * CMatrix::Identity(2, 2).replicate(2, 2)) <= 1e-12);
  CHECK(dist(t * t, t) <= 1e-12);
}

TEST_CASE("joint concavity test examples") {
  const auto sampler = window_sampler(SpectrumWindow(0.2, 5));
  const TupleMap ps = [](const MatrixTuple& t) { return parallel_sum(t); };
  CHECK(joint_concavity_test(ps, sampler, 2, 3, 200, {34, 0}).status == Status::certified);

  const PowerVector half({0.5, 0.5});
  const TupleMap roots = [&half](const MatrixTuple& t) { return tensor_power_direct(t, half); };
  CHECK(joint_concavity_test(roots, sampler, 2, 2, 200, {34, 1}).status == Status::certified);

  const TupleMap square = [](const MatrixTuple& t) {
    const auto a2 = HermitianMatrix::hermitian_part(t[0].matrix() * t[0].matrix());
    return tensor(a2, HermitianMatrix::identity(t[1].dim()));
  };
  for (JointMode mode : {JointMode::local, JointMode::midpoint}) {
    const Verdict v = joint_concavity_test(square, sampler, 2, 2, 500, {34, 2}, mode);
    CHECK(v.status == Status::violated);
    REQUIRE(v.witness);
    CHECK(replay_joint_witness(square, *v.witness) < 0.0);
  }
}

TEST_CASE("Beta weight rule") {
  for (auto [a, b] : {std::pair{0.5, 0.5}, std::pair{0.3, 0.7}, std::pair{1.0 / 3, 2.0 / 3}, std::pair{2.0, 0.4}}) {
    const AxisRule r = beta_weight_rule(a, b, 64);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      s0 += r.weights[i];
      s1 += r.weights[i] * r.nodes[i];
      CHECK(r.nodes[i] + r.complements[i] == doctest::Approx(1.0));
    }
    const double beta = std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    CHECK(s0 == doctest::Approx(beta).epsilon(1e-9));
    CHECK(s1 == doctest::Approx(beta * a / (a + b)).epsilon(1e-9));
  }
}

TEST_CASE("constant C_k") {
  CHECK(std::abs(c_constant(PowerVector({0.5, 0.5})) - kPi) <= 1e-6);
  const double third = 1.0 / 3.0;
  const double oracle = std::pow(gamma_by_quadrature(third), 3);
  CHECK(oracle == doctest::Approx(19.225).epsilon(1e-4));
  CHECK(std::abs(c_constant(PowerVector({third, third, third})) - oracle) <= 1e-5);
  for (double p : {0.3, 0.5, 0.7}) {
    CHECK(std::abs(c_constant(PowerVector({p, 1 - p})) * std::sin(kPi * p) / kPi - 1.0) <= 1e-6);
  }
  CHECK_THROWS_AS(c_constant(PowerVector({1.0})), ValidationError);
  CHECK_THROWS_AS(c_constant(PowerVector({0.0, 1.0})), ValidationError);
  CHECK_THROWS_AS(c_constant(PowerVector({0.3, 0.3})), ValidationError);
  CHECK_THROWS_AS(PowerVector({0.7, 0.7}), ValidationError);
  CHECK_THROWS_AS(PowerVector({-0.1, 0.5}), ValidationError);
  CHECK_THROWS_AS((QuadratureConfig{0, 1e-5}).validate(), ValidationError);
}

TEST_CASE("tensor powers by spectral calculus") {
  const auto i2 = HermitianMatrix::identity(2);
  CHECK(dist(tensor_power_direct(pair(HermitianMatrix::diagonal({2, 5}), HermitianMatrix::diagonal({3, 7})),
                                 PowerVector({0, 0})),
             HermitianMatrix::identity(4)) < 1e-14);
  CHECK(dist(tensor_power_direct(pair(HermitianMatrix::diagonal({2, 5}), HermitianMatrix::diagonal({3, 7})),
                                 PowerVector({1, 0})),
             tensor(HermitianMatrix::diagonal({2, 5}), i2)) < 1e-14);
  const auto diag_pair = pair(HermitianMatrix::diagonal({1, 4}), HermitianMatrix::diagonal({1, 9}));
  CHECK(dist(tensor_power_direct(diag_pair, PowerVector({0.5, 0.5})), HermitianMatrix::diagonal({1, 3, 2, 6})) <
        1e-14);

  // simultaneous permutation of (A_j, p_j) permutes the tensor factors
  Rng rng(RandomSpec{35, 0});
  const auto a = random_in_window(2, SpectrumWindow(0.3, 3), rng);
  const auto b = random_in_window(2, SpectrumWindow(0.3, 3), rng);
  const auto ab = tensor_power_direct(pair(a, b), PowerVector({0.3, 0.6}));
  const auto ba = tensor_power_direct(pair(b, a), PowerVector({0.6, 0.3}));
  const CMatrix s = swap_factors(2, 2);
  CHECK(dist(s * ab.matrix() * s.adjoint(), ba.matrix()) < 1e-12);
}

TEST_CASE("tensor powers by quadrature") {
  const auto i2 = HermitianMatrix::identity(2);
  CHECK(dist(tensor_power_integral(pair(i2, i2), PowerVector({0.5, 0.5})), HermitianMatrix::identity(4)) <= 1e-8);
  const auto diag_pair = pair(HermitianMatrix::diagonal({1, 4}), HermitianMatrix::diagonal({1, 9}));
  CHECK(dist(tensor_power_integral(diag_pair, PowerVector({0.5, 0.5})), HermitianMatrix::diagonal({1, 3, 2, 6})) <=
        1e-5);

  for (const auto& p : {std::vector<double>{0.3, 0.7}, std::vector<double>{0.2, 0.5}, std::vector<double>{0.5, 0.0}}) {
    Rng rng(RandomSpec{36, 0});
    const auto a = random_in_window(2, SpectrumWindow(0.5, 3), rng);
    const auto b = random_in_window(2, SpectrumWindow(0.5, 3), rng);
    const auto direct = tensor_power_direct(pair(a, b), PowerVector(p));
    CHECK(dist(tensor_power_integral(pair(a, b), PowerVector(p)), direct) <= 1e-5 * direct.frobenius_norm());
  }

  Rng rng(RandomSpec{37, 0});
  const SpectrumWindow w(0.5, 3);
  const MatrixTuple three({random_in_window(2, w, rng), random_in_window(2, w, rng), random_in_window(2, w, rng)});
  const PowerVector third({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto direct = tensor_power_direct(three, third);
  CHECK(dist(tensor_power_integral(three, third), direct) <= 1e-5 * direct.frobenius_norm());

  const MatrixTuple four({i2, i2, i2, i2});
  CHECK_THROWS_AS(tensor_power_integral(four, PowerVector({0.25, 0.25, 0.25, 0.25})), UnsupportedError);
}

TEST_CASE("quadrature error decreases with nodes") {
  Rng rng(RandomSpec{38, 0});
  const SpectrumWindow w(0.5, 3);
  const auto tuple = pair(random_in_window(2, w, rng), random_in_window(2, w, rng));
  for (const auto& p : {PowerVector({0.5, 0.5}), PowerVector({0.3, 0.7})}) {
    const auto direct = tensor_power_direct(tuple, p);
    double previous = kInf;
    for (int nodes : {16, 32, 64, 128}) {
      const double err = dist(tensor_power_integral(tuple, p, {nodes, 1e-5}), direct) / direct.frobenius_norm();
      if (p[0] == 0.3) CHECK(err < previous);
      CHECK(err <= std::max(previous, 1e-13));
      previous = err;
    }
  }
}

TEST_CASE("Lieb functional") {
  const auto i2 = HermitianMatrix::identity(2);
  CHECK(lieb_functional(i2, i2, CMatrix::Identity(2, 2), 0.5, 0.5) == doctest::Approx(2.0));
  CHECK(lieb_functional(scalar(4), scalar(9), CMatrix::Identity(1, 1), 0.5, 0.5) == doctest::Approx(6.0));
  CHECK(vectorization_residual(i2, i2, CMatrix::Identity(2, 2), 0.5, 0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(lieb_functional(i2, i2, CMatrix::Identity(2, 2), 0.7, 0.7), ValidationError);

  // diagonal A, B with K = I: both sides are sum_i a_i^p b_i^r
  const auto a = HermitianMatrix::diagonal({1.0, 2.0, 5.0});
  const auto b = HermitianMatrix::diagonal({3.0, 0.5, 4.0});
  double want = 0.0;
  for (int i = 0; i < 3; ++i) want += std::pow(a(i, i).real(), 0.3) * std::pow(b(i, i).real(), 0.6);
  CHECK(lieb_functional(a, b, CMatrix::Identity(3, 3), 0.3, 0.6) == doctest::Approx(want).epsilon(1e-13));
  CHECK(vectorization_residual(a, b, CMatrix::Identity(3, 3), 0.3, 0.6) <= 1e-13);
}

TEST_CASE("vectorization identity by brute-force index expansion") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    Rng rng(RandomSpec{39, t});
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 2), m = 2;
    const auto a = random_in_window(n, SpectrumWindow(0.2, 3), rng);
    const auto b = random_in_window(m, SpectrumWindow(0.2, 3), rng);
    const CMatrix k = ginibre(m, n, rng);
    const double p = 0.4, r = 0.5;
    const CMatrix ap = apply_function(a, [p](double x) { return std::pow(x, p); }).matrix();
    const CMatrix br = apply_function(b, [r](double x) { return std::pow(x, r); }).matrix();
    // sum over K_{b a} A^p_{a a'} B^r_{b b'} conj(K_{b' a'})
    Complex brute = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index i2 = 0; i2 < n; ++i2)
        for (Eigen::Index j = 0; j < m; ++j)
          for (Eigen::Index j2 = 0; j2 < m; ++j2)
            brute += k(j, i) * ap(i, i2) * br(j, j2) * std::conj(k(j2, i2));
    const CVector v = vectorize_for_lieb(k);
    const Complex quad = v.dot(kron(ap, br) * v);
    CHECK(std::abs(brute - quad) <= 1e-10);
    const Complex trace = (ap * k.adjoint() * br.transpose() * k).trace();
    CHECK(std::abs(trace - brute) <= 1e-10);
    CHECK(vectorization_residual(a, b, k, p, r) <= 1e-10);
  }
}

TEST_CASE("Lieb midpoint concavity") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(RandomSpec{40, t});
    const SpectrumWindow w(0.1, 3);
    const auto a0 = random_in_window(2, w, rng), a1 = random_in_window(2, w, rng);
    const auto b0 = random_in_window(3, w, rng), b1 = random_in_window(3, w, rng);
    const CMatrix k = ginibre(3, 2, rng);
    const double p = rng.uniform(0.05, 0.95), r = rng.uniform(0, 1 - p);
    const double f0 = lieb_functional(a0, b0, k, p, r), f1 = lieb_functional(a1, b1, k, p, r);
    const double mid = lieb_functional((a0 + a1) * 0.5, (b0 + b1) * 0.5, k, p, r);
    CHECK(mid >= 0.5 * (f0 + f1) - 1e-8 * (1 + std::max(std::abs(f0), std::abs(f1))));
  }
}

TEST_CASE("WYD skew information") {
  // frozen value: 1 - sqrt(3)/2
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const DensityOperator rho(HermitianMatrix::diagonal({0.75, 0.25}));
  const double value = wyd_skew_information(rho, HermitianMatrix::from_real(x), 0.5);
  CHECK(value == doctest::Approx(1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(value == doctest::Approx(0.133974596).epsilon(1e-8));

  const auto k = random_hermitian(3, RandomSpec{41, 0});
  CHECK(std::abs(wyd_skew_information(DensityOperator::maximally_mixed({3}), k, 0.3)) <= 1e-12);

  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(RandomSpec{42, t});
    const auto r0 = random_density({3}, rng), r1 = random_density({3}, rng);
    const auto kk = random_hermitian(3, rng);
    const double p = rng.uniform(0.05, 0.95);
    CHECK(wyd_skew_information(r0, kk, p) >= -1e-10);
    const double f0 = wyd_trace_term(r0.matrix(), kk, p), f1 = wyd_trace_term(r1.matrix(), kk, p);
    const double mid = wyd_trace_term((r0.matrix() + r1.matrix()) * 0.5, kk, p);
    CHECK(mid >= 0.5 * (f0 + f1) - 1e-8 * (1 + std::max(std::abs(f0), std::abs(f1))));
  }

  // rank-one rho under shrinking regularization approaches the variance-type limit
  CVector psi(2);
  psi << std::sqrt(0.8), std::sqrt(0.2);
  const auto pure = DensityOperator::pure(psi, {2});
  const auto kx = HermitianMatrix::from_real(x);
  const double limit = (kx.matrix() * kx.matrix() * pure.matrix().matrix()).trace().real();
  double previous = kInf;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const DensityOperator mixed(pure.matrix() * (1 - eps) + HermitianMatrix::identity(2) * (eps / 2));
    const double gap = std::abs(limit - wyd_skew_information(mixed, kx, 0.5));
    CHECK(gap <= previous);
    previous = gap;
  }
}

TEST_CASE("perspective") {
  Rng rng(RandomSpec{43, 0});
  const SpectrumWindow w(0.2, 4);
  const auto a = random_in_window(3, w, rng), b = random_in_window(3, w, rng);
  const ScalarFunction id("id", [](double z) { return z; }, SpectrumWindow(0, kInf));
  CHECK(dist(perspective(id, a, b), a) < 1e-12);
  const auto root = builtin("sqrt").function;
  CHECK(dist(perspective(root, b, b), b) < 1e-12);
  CHECK(dist(perspective(root, HermitianMatrix::diagonal({4, 9}), HermitianMatrix::identity(2)),
             HermitianMatrix::diagonal({2, 3})) < 1e-14);
  const TupleMap map = [&root](const MatrixTuple& t) { return perspective(root, t[0], t[1]); };
  CHECK(joint_concavity_test(map, window_sampler(SpectrumWindow(0.1, 5)), 2, 2, 200, {43, 1},
                             JointMode::midpoint)
            .status == Status::certified);
}

TEST_CASE("Kubo-Ando representations") {
  Rng rng(RandomSpec{44, 0});
  const SpectrumWindow w(0.2, 4);
  const auto a = random_in_window(3, w, rng), b = random_in_window(3, w, rng);
  CHECK(dist(kubo_ando_eval({1.0, 0.0, {}}, a, b), a) < 1e-14);
  CHECK(dist(kubo_ando_eval({0.0, 1.0, {}}, a, b), b) < 1e-14);

  // frozen value for a single atom t = nu = 1 at A = 2, B = 3
  const KuboAndoRepresentation atom{0.0, 0.0, {{1.0, 1.0}}};
  const double v = kubo_ando_eval(atom, scalar(2), scalar(3))(0, 0).real();
  CHECK(v == doctest::Approx(2.4).epsilon(1e-14));
  CHECK(perspective(kubo_ando_function(atom), scalar(2), scalar(3))(0, 0).real() == doctest::Approx(2.4));

  for (std::uint64_t r = 0; r < 5; ++r) {
    Rng rr(RandomSpec{45, r});
    KuboAndoRepresentation rep{rr.uniform(0, 2), rr.uniform(0, 2), {}};
    for (std::uint64_t j = 0; j <= r % 3; ++j) rep.atoms.push_back({rr.uniform(0.1, 10), rr.uniform(0.1, 2)});
    const auto f = kubo_ando_function(rep);
    for (std::uint64_t t = 0; t < 20; ++t) {
      const auto x = random_in_window(3, w, rr), y = random_in_window(3, w, rr);
      CHECK(dist(kubo_ando_eval(rep, x, y), perspective(f, x, y)) <= 1e-8);
    }
  }

  CHECK_THROWS_AS((KuboAndoRepresentation{0, 0, {{-1.0, 1.0}}}).validate(), ValidationError);
  const KuboAndoRepresentation rep{0.5, 1.0, {{1.0, 1.0}, {4.0, 0.5}}};
  const auto back = kubo_ando_from_json(json::parse(kubo_ando_to_json(rep).dump()));
  CHECK(back.a == rep.a);
  CHECK(back.atoms.size() == 2);
  CHECK(back.atoms[1].t == 4.0);
  json doc = kubo_ando_to_json(rep);
  doc["c"] = 1;
  CHECK_THROWS_AS(kubo_ando_from_json(doc), ParseError);
}
