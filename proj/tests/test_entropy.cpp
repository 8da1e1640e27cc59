#include <cmath>

#include "helpers.hpp"
#include "matconvex/entropy.hpp"
#include "matconvex/error.hpp"
#include "matconvex/matrix_io.hpp"
#include "matconvex/random.hpp"

using namespace matconvex;

namespace {

const double kLn2 = std::log(2.0);

DensityOperator classical_correlated() {
  return DensityOperator(HermitianMatrix::diagonal({0.5, 0.0, 0.0, 0.5}), {2, 2});
}

DensityOperator product3(std::uint64_t seed) {
  Rng rng(RandomSpec{seed, 0});
  const auto a = random_density({2}, rng), b = random_density({3}, rng), c = random_density({2}, rng);
  return DensityOperator::product(DensityOperator::product(a, b), c);
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  CVector psi = CVector::Zero(3);
  psi << 1.0, Complex(0, 2), -1.0;
  CHECK(std::abs(von_neumann_entropy(DensityOperator::pure(psi, {3}))) <= 1e-12);
  CHECK(von_neumann_entropy(DensityOperator::maximally_mixed({2, 3})) == doctest::Approx(std::log(6.0)));
  const double want = 0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0);
  CHECK(von_neumann_entropy(DensityOperator(HermitianMatrix::diagonal({0.75, 0.25}))) ==
        doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.5623).epsilon(1e-4));
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto rho = random_density({2, 3}, RandomSpec{50, t});
    const double s = von_neumann_entropy(rho);
    CHECK(s >= -1e-12);
    CHECK(s <= std::log(6.0) + 1e-12);
  }
}

TEST_CASE("partial trace") {
  Rng rng(RandomSpec{51, 0});
  const auto r1 = random_density({2}, rng), r2 = random_density({3}, rng);
  const auto prod = DensityOperator::product(r1, r2);
  CHECK(dist(partial_trace(prod, {0}).matrix(), r1.matrix()) < 1e-14);
  CHECK(dist(partial_trace(prod, {1}).matrix(), r2.matrix()) < 1e-14);
  CHECK(dist(partial_trace(bell_state(), {0}).matrix(), HermitianMatrix::identity(2) * 0.5) < 1e-15);
  CHECK(dist(partial_trace(prod, {0, 1}).matrix(), prod.matrix()) == 0.0);
  CHECK(dist(partial_trace(prod, {1, 0}).matrix(), prod.matrix()) == 0.0);

  // brute-force index summation on 2 x 3 x 2, keeping factors 0 and 2
  const auto rho = random_density({2, 3, 2}, rng);
  const CMatrix& m = rho.matrix().matrix();
  CMatrix want = CMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int c2 = 0; c2 < 2; ++c2)
          for (int b = 0; b < 3; ++b) want(a * 2 + c, a2 * 2 + c2) += m(a * 6 + b * 2 + c, a2 * 6 + b * 2 + c2);
  const auto kept = partial_trace(rho, {2, 0});
  CHECK(dist(kept.matrix().matrix(), want) < 1e-14);
  CHECK(kept.dims() == Dims{2, 2});

  CHECK_THROWS_AS(partial_trace(prod, {}), ValidationError);
  CHECK_THROWS_AS(partial_trace(prod, {0, 0}), ValidationError);
  CHECK_THROWS_AS(partial_trace(prod, {2}), ValidationError);
}

TEST_CASE("conditional entropy") {
  Rng rng(RandomSpec{52, 0});
  const auto r1 = random_density({2}, rng), r2 = random_density({2}, rng);
  CHECK(conditional_entropy(DensityOperator::product(r1, r2), {0}, {1}) ==
        doctest::Approx(von_neumann_entropy(r1)).epsilon(1e-12));
  const double bell = conditional_entropy(bell_state(), {0}, {1});
  CHECK(bell == doctest::Approx(-kLn2).epsilon(1e-12));
  CHECK(bell < 0.0);
  CHECK(std::abs(conditional_entropy(classical_correlated(), {0}, {1})) <= 1e-12);
}

TEST_CASE("relative entropy") {
  const auto a = random_density({3}, RandomSpec{53, 0}).matrix();
  CHECK(std::abs(relative_entropy(a, a)) <= 1e-12);
  // frozen value with the concave sign convention
  const double v = relative_entropy(HermitianMatrix::diagonal({0.5, 0.5}), HermitianMatrix::diagonal({0.75, 0.25}));
  CHECK(v == doctest::Approx(-(0.5 * std::log(2.0 / 3.0) + 0.5 * std::log(2.0))).epsilon(1e-14));
  CHECK(v == doctest::Approx(-0.143841).epsilon(1e-5));
  const auto rho = random_density({3}, RandomSpec{53, 1});
  CHECK(relative_entropy(rho.matrix(), HermitianMatrix::identity(3) * (1.0 / 3)) ==
        doctest::Approx(von_neumann_entropy(rho) - std::log(3.0)).epsilon(1e-12));
  CHECK(relative_entropy(HermitianMatrix::diagonal({0.5, 0.5}), HermitianMatrix::diagonal({1.0, 0.0})) == -kInf);
  CHECK_THROWS_AS(relative_entropy(HermitianMatrix::diagonal({1.0, -0.5}), HermitianMatrix::identity(2)),
                  DomainError);
}

TEST_CASE("relative entropy joint concavity") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(RandomSpec{54, t});
    const SpectrumWindow w(0.1, 2);
    const auto a0 = random_in_window(3, w, rng), a1 = random_in_window(3, w, rng);
    const auto b0 = random_in_window(3, w, rng), b1 = random_in_window(3, w, rng);
    const double mid = relative_entropy((a0 + a1) * 0.5, (b0 + b1) * 0.5);
    CHECK(mid - 0.5 * (relative_entropy(a0, b0) + relative_entropy(a1, b1)) >= -1e-8);
  }
}

TEST_CASE("epsilon limit") {
  const auto a = random_in_window(3, SpectrumWindow(0.1, 2), RandomSpec{55, 0});
  CHECK(epsilon_limit_residual(a, a, 1e-5) <= 1e-12);
  const double r = epsilon_limit_residual(HermitianMatrix::identity(1), HermitianMatrix::identity(1) * 2.0, 1e-5);
  CHECK(r <= 1e-4);
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng(RandomSpec{56, t});
    const auto x = random_in_window(3, SpectrumWindow(0.1, 2), rng);
    const auto y = random_in_window(3, SpectrumWindow(0.1, 2), rng);
    CHECK(epsilon_limit_residual(x, y, 1e-5) <= 1e-3);
    const double coarse = epsilon_limit_residual(x, y, 1e-3);
    const double fine = epsilon_limit_residual(x, y, 1e-4);
    if (coarse > 1e-9) {
      CHECK(coarse / fine >= 5.0);
      CHECK(coarse / fine <= 20.0);
    }
  }
  CHECK_THROWS_AS(epsilon_limit_residual(HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::identity(2), 1e-5),
                  ConditioningError);
}

TEST_CASE("Haar average of the partial conjugation") {
  Rng rng(RandomSpec{57, 0});
  const auto r1 = random_density({2}, rng);
  const auto fixed = DensityOperator::product(r1, DensityOperator::maximally_mixed({2}));
  CHECK(haar_average_residual(fixed, 10, RandomSpec{57, 1}) <= 1e-12);
  CHECK(haar_average_residual(bell_state(), 10000, RandomSpec{57, 2}) <= 0.05);
  const auto rho = random_density({2, 2}, rng);
  const double few = haar_average_residual(rho, 100, RandomSpec{57, 3});
  const double many = haar_average_residual(rho, 10000, RandomSpec{57, 4});
  CHECK(few / many >= 2.0);
  CHECK(few / many <= 50.0);
}

TEST_CASE("pinching") {
  const auto diag = DensityOperator(HermitianMatrix::diagonal({0.1, 0.2, 0.3, 0.15, 0.05, 0.2}), {2, 3});
  CHECK(dist(pinch(diag).matrix(), diag.matrix()) < 1e-14);
  Rng rng(RandomSpec{58, 0});
  const auto prod = DensityOperator::product(random_density({2}, rng), random_density({3}, rng));
  CHECK(dist(pinch(prod).matrix(), prod.matrix()) < 1e-12);
  CHECK(dist(pinch(bell_state()).matrix(), HermitianMatrix::diagonal({0.5, 0, 0, 0.5})) < 1e-15);

  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto rho = random_density({2, 3}, RandomSpec{59, t});
    const auto p = pinch(rho);
    CHECK(dist(pinch(p).matrix(), p.matrix()) <= 1e-10);
    CHECK(von_neumann_entropy(p) >= von_neumann_entropy(rho) - 1e-9);
    for (std::size_t f : {0u, 1u}) {
      CHECK(dist(partial_trace(p, {f}).matrix(), partial_trace(rho, {f}).matrix()) <= 1e-10);
    }
  }
}

TEST_CASE("pinching by random phases") {
  const auto diag = DensityOperator(HermitianMatrix::diagonal({0.1, 0.2, 0.3, 0.4}), {2, 2});
  CHECK(dist(pinch_monte_carlo(diag, 3, RandomSpec{60, 0}).matrix(), diag.matrix()) < 1e-14);
  CHECK(dist(pinch_monte_carlo(bell_state(), 10000, RandomSpec{60, 1}).matrix(),
             HermitianMatrix::diagonal({0.5, 0, 0, 0.5})) <= 0.05);

  const auto rho = random_density({2, 2}, RandomSpec{60, 2});
  const auto one = pinch_monte_carlo(rho, 1, RandomSpec{60, 3});
  const CMatrix basis = product_eigenbasis(rho);
  const CMatrix d1 = basis.adjoint() * one.matrix().matrix() * basis;
  const CMatrix d0 = basis.adjoint() * pinch(rho).matrix().matrix() * basis;
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(d1(i, i) - d0(i, i)) < 1e-12);

  const auto exact = pinch(rho);
  const double few = dist(pinch_monte_carlo(rho, 100, RandomSpec{60, 4}).matrix(), exact.matrix());
  const double many = dist(pinch_monte_carlo(rho, 10000, RandomSpec{60, 5}).matrix(), exact.matrix());
  CHECK(many < few);
}

TEST_CASE("pinching basis tie-breaking") {
  // a degenerate marginal gets the computational basis
  const CMatrix b = pinching_basis(HermitianMatrix::identity(3) * (1.0 / 3));
  CHECK(dist(b, CMatrix::Identity(3, 3)) < 1e-14);
  const CMatrix again = pinching_basis(HermitianMatrix::identity(3) * (1.0 / 3));
  CHECK(b == again);
}

TEST_CASE("Lieb-Ruskai concavity gap") {
  const auto rho = random_density({2, 2}, RandomSpec{61, 0});
  CHECK(std::abs(lieb_ruskai_concavity_gap(rho, rho, 0.4)) <= 1e-12);
  const auto other = random_density({2, 2}, RandomSpec{61, 1});
  CHECK(std::abs(lieb_ruskai_concavity_gap(rho, other, 1e-3)) <= 1e-2);
  const double bell = lieb_ruskai_concavity_gap(bell_state(), DensityOperator::maximally_mixed({2, 2}), 0.5);
  CHECK(bell >= 0.0);
  // eigenvalues of the mixture are 5/8, 1/8, 1/8, 1/8
  const double s = -(0.625 * std::log(0.625) + 0.375 * std::log(0.125));
  CHECK(bell == doctest::Approx(s - kLn2).epsilon(1e-12));
  CHECK(bell == doctest::Approx(0.380395666).epsilon(1e-8));
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(RandomSpec{62, t});
    const Dims dims = t % 2 ? Dims{2, 2} : Dims{2, 3};
    const auto a = random_density(dims, rng), b = random_density(dims, rng);
    CHECK(lieb_ruskai_concavity_gap(a, b, rng.uniform()) >= -1e-8);
  }
}

TEST_CASE("subadditivity chain") {
  Rng rng(RandomSpec{63, 0});
  const auto prod = DensityOperator::product(random_density({2}, rng), random_density({3}, rng));
  const auto p = subadditivity_report(prod);
  CHECK(std::abs(p.slack("pinching")) <= 1e-10);
  CHECK(std::abs(p.slack("classical_subadditivity")) <= 1e-10);

  const auto b = subadditivity_report(bell_state());
  CHECK(std::abs(b.value("S12")) <= 1e-12);
  CHECK(b.value("S_pinched") == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(b.value("S1") + b.value("S2") == doctest::Approx(2 * kLn2).epsilon(1e-12));

  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto r = subadditivity_report(random_density({2, 3}, RandomSpec{64, t}));
    CHECK(r.slack("pinching") >= -1e-9);
    CHECK(r.slack("classical_subadditivity") >= -1e-9);
    CHECK(r.value("marginal_deviation") <= 1e-10);
  }
}

TEST_CASE("mutual information decomposition") {
  Rng rng(RandomSpec{65, 0});
  const auto prod = DensityOperator::product(random_density({2}, rng), random_density({2}, rng));
  const auto p = mutual_information_decomposition(prod);
  CHECK(std::abs(p.value("quantum_part")) <= 1e-10);
  CHECK(std::abs(p.value("classical_part")) <= 1e-10);

  const auto b = mutual_information_decomposition(bell_state());
  CHECK(std::abs(b.value("quantum_part") - kLn2) <= 1e-9);
  CHECK(std::abs(b.value("classical_part") - kLn2) <= 1e-9);
  CHECK(b.value("mutual_information") == doctest::Approx(2 * kLn2).epsilon(1e-12));

  const auto c = mutual_information_decomposition(classical_correlated());
  CHECK(std::abs(c.value("quantum_part")) <= 1e-12);
  CHECK(std::abs(c.value("classical_part") - kLn2) <= 1e-12);

  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto r = mutual_information_decomposition(random_density({2, 3}, RandomSpec{66, t}));
    CHECK(r.value("quantum_part") >= -1e-9);
    CHECK(r.value("classical_part") >= -1e-9);
    CHECK(std::abs(r.value("sum_residual")) <= 1e-10);
  }
}

TEST_CASE("Uhlmann construction") {
  Rng rng(RandomSpec{67, 0});
  const auto fixed = DensityOperator::product(random_density({2, 2}, rng), DensityOperator::maximally_mixed({2}));
  CHECK(dist(uhlmann_tilde(fixed).matrix(), fixed.matrix()) < 1e-14);
  const auto ghz = uhlmann_tilde(ghz_state());
  CHECK(dist(ghz.matrix(), tensor(HermitianMatrix::diagonal({0.5, 0, 0, 0.5}), HermitianMatrix::identity(2) * 0.5)) <
        1e-15);
}

TEST_CASE("strong subadditivity") {
  CHECK(std::abs(ssa_report(product3(68)).slack("ssa")) <= 1e-10);
  const auto g = ssa_report(ghz_state());
  CHECK(std::abs(g.value("S123")) <= 1e-12);
  for (const char* k : {"S23", "S12", "S2"}) CHECK(g.value(k) == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(g.slack("ssa") == doctest::Approx(kLn2).epsilon(1e-12));
  for (const Dims& dims : {Dims{2, 2, 2}, Dims{2, 3, 2}}) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      CHECK(ssa_report(random_density(dims, RandomSpec{69, t})).slack("ssa") >= -1e-8);
    }
  }
}

TEST_CASE("Lieb-Ruskai and SSA agree on random tripartite states") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(RandomSpec{70, t});
    const auto rho = random_density(t % 2 ? Dims{2, 2, 2} : Dims{2, 3, 2}, rng);
    const auto [gap, slack] = uhlmann_coherence(rho, rng);
    CHECK(gap >= -1e-9);
    CHECK(slack >= gap - 1e-9);
  }
}

TEST_CASE("state files") {
  const auto rho = random_density({2, 3}, RandomSpec{71, 0});
  const auto back = density_from_json(json::parse(density_to_json(rho).dump()));
  CHECK(back.dims() == rho.dims());
  CHECK(back.matrix().matrix() == rho.matrix().matrix());

  json doc = density_to_json(rho);
  doc.erase("dims");
  CHECK_THROWS_AS(density_from_json(doc), ParseError);
  doc = density_to_json(rho);
  doc["entries"][0][0][0] = 2.0;
  CHECK_THROWS_AS(density_from_json(doc), ParseError);
  doc = density_to_json(rho);
  doc["dims"] = {2, 2};
  CHECK_THROWS_AS(density_from_json(doc), ParseError);
  doc = density_to_json(rho);
  doc["comment"] = "x";
  CHECK_THROWS_AS(density_from_json(doc), ParseError);
}

TEST_CASE("density operator validation") {
  CHECK_THROWS_AS(DensityOperator(HermitianMatrix::diagonal({0.6, 0.6})), ValidationError);
  CHECK_THROWS_AS(DensityOperator(HermitianMatrix::diagonal({1.5, -0.5})), ValidationError);
  CHECK_THROWS_AS(DensityOperator(HermitianMatrix::diagonal({0.5, 0.5}), {3}), ValidationError);
  const auto r = random_pure_state({2, 2}, *std::make_unique<Rng>(RandomSpec{72, 0}));
  CHECK(std::abs(von_neumann_entropy(r)) <= 1e-12);
}
