#pragma once

#include <vector>

namespace matconvex {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi], nodes ascending.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Gamma(p) for p > 0 by one-dimensional quadrature of
/// int_0^inf exp(-v) v^(p-1) dv. Kept separate from the multi-dimensional
/// constant so it can serve as an independent check on it.
double gamma_by_quadrature(double p, int nodes = 96);

}  // namespace matconvex
