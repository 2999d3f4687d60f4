#pragma once

// Test-only oracles, independent of the library's computational paths.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "oldg/types.hpp"

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b) {
  const double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-12,
                               int depth = 30) {
  const double c = 0.5 * (a + b);
  const double whole = simpson(f, a, b);
  const double left = simpson(f, a, c);
  const double right = simpson(f, c, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, tol / 2, depth - 1) +
         adaptive_simpson(f, c, b, tol / 2, depth - 1);
}

// Dense Gaussian elimination with partial pivoting, hand-rolled so it shares
// nothing with the sparse solvers under test.
inline oldg::VecX dense_eliminate(oldg::MatX a, oldg::VecX b) {
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) < 1e-14)
      throw std::runtime_error("dense_eliminate: singular matrix");
    if (piv != k) {
      a.row(piv).swap(a.row(k));
      std::swap(b[piv], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / a(k, k);
      a.row(i).tail(n - k) -= m * a.row(k).tail(n - k);
      b[i] -= m * b[k];
    }
  }
  oldg::VecX x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

// Exact integral of x^a y^b over the unit reference triangle: a! b! / (a+b+2)!
inline double ref_triangle_monomial(int a, int b) {
  double num = 1.0;
  for (int k = 2; k <= a; ++k) num *= k;
  for (int k = 2; k <= b; ++k) num *= k;
  double den = 1.0;
  for (int k = 2; k <= a + b + 2; ++k) den *= k;
  return num / den;
}

// Midpoint-rule integral over [0,1]^2 for plain numeric cross-checks.
inline double unit_square_integral(const std::function<double(double, double)>& f,
                                   int n = 400) {
  double acc = 0.0;
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += f((i + 0.5) * h, (j + 0.5) * h) * h * h;
  return acc;
}

}  // namespace oracles
