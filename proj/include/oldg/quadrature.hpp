#pragma once

#include "oldg/types.hpp"

namespace oldg {

/// Quadrature nodes and positive weights on a reference domain: the unit
/// triangle (points are 2d, weights sum to 1/2) or the interval [0,1]
/// (points are 1d, weights sum to 1).
struct QuadRule {
  MatX points;   // n_points x dim
  VecX weights;  // all positive
  int exactness = 0;

  int n_points() const { return static_cast<int>(points.rows()); }
};

/// Gauss-Legendre nodes/weights shifted to [0,1].
void gauss_legendre_01(int n, VecX& nodes, VecX& weights);

/// Rule exact for all polynomials of total degree <= min_exactness on the
/// reference triangle. Throws if the request exceeds the implemented family.
QuadRule triangle_rule(int min_exactness);

/// Rule exact for all polynomials of degree <= min_exactness on [0,1].
QuadRule edge_rule(int min_exactness);

}  // namespace oldg
