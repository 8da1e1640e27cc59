#include "matconvex/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "matconvex/error.hpp"

namespace matconvex {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ValidationError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Three-term recurrence for P_n(x) and its derivative.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double gamma_by_quadrature(double p, int nodes) {
  if (!(p > 0.0)) throw ValidationError("gamma_by_quadrature needs p > 0");
  // Reduce to (0, 1], where the substitution below keeps the integrand smooth.
  if (p > 1.0) return (p - 1.0) * gamma_by_quadrature(p - 1.0, nodes);
  // [0, 1]: v = s^(1/p) turns v^(p-1) dv into ds / p.
  double total = 0.0;
  const auto head = gauss_legendre(nodes, 0.0, 1.0);
  for (int i = 0; i < nodes; ++i) {
    total += head.weights[i] * std::exp(-std::pow(head.nodes[i], 1.0 / p)) / p;
  }
  // [1, 61]: smooth integrand, panels of width 4; the tail past 61 is below 1e-25.
  const int per_panel = std::max(16, nodes / 4);
  for (double a = 1.0; a < 61.0; a += 4.0) {
    const auto rule = gauss_legendre(per_panel, a, a + 4.0);
    for (int i = 0; i < per_panel; ++i) {
      const double v = rule.nodes[i];
      total += rule.weights[i] * std::exp(-v) * std::pow(v, p - 1.0);
    }
  }
  return total;
}

}  // namespace matconvex
