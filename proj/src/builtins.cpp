#include "matconvex/builtins.hpp"

#include <cmath>

#include "matconvex/resolvent.hpp"

namespace matconvex {

namespace {

const SpectrumWindow kPositive{0.0, kInf};
const SpectrumWindow kReal{-kInf, kInf};

/// Sum over the words in {M, Q} of length `degree` containing exactly two Q's,
/// times 2: the second t-derivative of (M + tQ)^degree at t = 0.
HermitianMatrix power_second_derivative(const HermitianMatrix& m, const HermitianMatrix& q,
                                        int degree) {
  const auto n = m.dim();
  CMatrix total = CMatrix::Zero(n, n);
  for (int i = 0; i < degree; ++i) {
    for (int j = i + 1; j < degree; ++j) {
      CMatrix word = CMatrix::Identity(n, n);
      for (int pos = 0; pos < degree; ++pos) {
        word = word * ((pos == i || pos == j) ? q.matrix() : m.matrix());
      }
      total += word;
    }
  }
  return HermitianMatrix::hermitian_part(2.0 * total);
}

SecondDerivativeFn power_rule(int degree) {
  return [degree](const HermitianMatrix& m, const HermitianMatrix& q) {
    return power_second_derivative(m, q, degree);
  };
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"affine", "x2",     "x3",  "x4",    "inv",
                                              "sqrt",   "neglog", "log", "xlogx", "exp"};
  return names;
}

BuiltinFunction builtin(const std::string& name) {
  if (name == "affine") {
    return {ScalarFunction(
                "affine", [](double x) { return 3.0 * x + 1.0; }, kReal, [](double) { return 3.0; },
                [](const HermitianMatrix& m, const HermitianMatrix&) {
                  return HermitianMatrix::zero(m.dim());
                }),
            {true, true, true, true}};
  }
  if (name == "x2") {
    return {ScalarFunction(
                "x2", [](double x) { return x * x; }, kReal, [](double x) { return 2.0 * x; },
                power_rule(2)),
            {true, false, true, true}};
  }
  if (name == "x3") {
    return {ScalarFunction(
                "x3", [](double x) { return x * x * x; }, kReal,
                [](double x) { return 3.0 * x * x; }, power_rule(3)),
            {false, false, true, true}};
  }
  if (name == "x4") {
    return {ScalarFunction(
                "x4", [](double x) { return x * x * x * x; }, kReal,
                [](double x) { return 4.0 * x * x * x; }, power_rule(4)),
            {false, false, true, true}};
  }
  if (name == "inv") {
    // 1/x is the resolvent family member with its pole at u = 0 below (0, inf).
    return {ScalarFunction(
                "inv", [](double x) { return 1.0 / x; }, kPositive,
                [](double x) { return -1.0 / (x * x); },
                [](const HermitianMatrix& m, const HermitianMatrix& q) {
                  return resolvent_second_derivative(m, q, ResolventPoint(0.0, kPositive));
                }),
            {true, false, true, false}};
  }
  if (name == "sqrt") {
    return {ScalarFunction(
                "sqrt", [](double x) { return std::sqrt(x); }, kPositive,
                [](double x) { return 0.5 / std::sqrt(x); }),
            {false, true, false, true}};
  }
  if (name == "neglog") {
    return {ScalarFunction(
                "neglog", [](double x) { return -std::log(x); }, kPositive,
                [](double x) { return -1.0 / x; }),
            {true, false, true, false}};
  }
  if (name == "log") {
    return {ScalarFunction(
                "log", [](double x) { return std::log(x); }, kPositive,
                [](double x) { return 1.0 / x; }),
            {false, true, false, true}};
  }
  if (name == "xlogx") {
    return {ScalarFunction(
                "xlogx", [](double x) { return x * std::log(x); }, kPositive,
                [](double x) { return std::log(x) + 1.0; }),
            {true, false, true, false}};
  }
  if (name == "exp") {
    return {ScalarFunction(
                "exp", [](double x) { return std::exp(x); }, kReal,
                [](double x) { return std::exp(x); }),
            {false, false, true, true}};
  }
  throw ValidationError("unknown function '" + name + "'");
}

}  // namespace matconvex
