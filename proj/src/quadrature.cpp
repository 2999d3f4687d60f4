#include "oldg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace oldg {

namespace {
constexpr int kMaxExactness = 40;
}

void gauss_legendre_01(int n, VecX& nodes, VecX& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Roots of P_n on [-1,1] by Newton iteration, then shifted to [0,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pn1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadRule triangle_rule(int min_exactness) {
  if (min_exactness < 0)
    throw std::invalid_argument("triangle_rule: exactness must be >= 0");
  if (min_exactness > kMaxExactness)
    throw std::invalid_argument(
        "triangle_rule: requested exactness beyond implemented family");

  QuadRule rule;
  if (min_exactness <= 1) {
    rule.points.resize(1, 2);
    rule.points << 1.0 / 3.0, 1.0 / 3.0;
    rule.weights = VecX::Constant(1, 0.5);
    rule.exactness = 1;
    return rule;
  }
  if (min_exactness == 2) {
    rule.points.resize(3, 2);
    rule.points << 1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0,
        2.0 / 3.0;
    rule.weights = VecX::Constant(3, 1.0 / 6.0);
    rule.exactness = 2;
    return rule;
  }

  // Collapsed tensor-product (Duffy) rule: all weights positive at any
  // degree. For x^a y^b with a+b <= d the mapped integrand has degree
  // a+b+1 <= d+1 in xi, so m Gauss points with 2m-1 >= d+1 are exact.
  const int m = (min_exactness + 3) / 2;
  VecX gx, gw;
  gauss_legendre_01(m, gx, gw);
  rule.points.resize(m * m, 2);
  rule.weights.resize(m * m);
  int idx = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j, ++idx) {
      rule.points(idx, 0) = gx[i];
      rule.points(idx, 1) = gx[j] * (1.0 - gx[i]);
      rule.weights[idx] = gw[i] * gw[j] * (1.0 - gx[i]);
    }
  }
  rule.exactness = 2 * m - 2;
  return rule;
}

QuadRule edge_rule(int min_exactness) {
  if (min_exactness < 0)
    throw std::invalid_argument("edge_rule: exactness must be >= 0");
  if (min_exactness > kMaxExactness)
    throw std::invalid_argument(
        "edge_rule: requested exactness beyond implemented family");
  const int m = (min_exactness + 2) / 2;
  VecX gx, gw;
  gauss_legendre_01(m, gx, gw);
  QuadRule rule;
  rule.points = gx;
  rule.weights = gw;
  rule.exactness = 2 * m - 1;
  return rule;
}

}  // namespace oldg
