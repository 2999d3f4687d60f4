#pragma once

#include <array>
#include <utility>
#include <vector>

#include "oldg/mesh.hpp"
#include "oldg/types.hpp"

namespace oldg {

/// Monomial basis x^a y^b, a+b <= degree, on the reference triangle.
/// Spans P_r exactly; ordering is by total degree, then descending x power.
struct PolyBasis {
  int degree = 0;
  int n_funcs = 0;
  std::vector<std::array<int, 2>> powers;

  /// Values of all functions at reference points: (n_funcs x n_points).
  MatX eval(const MatX& ref_points) const;
  /// Reference gradients (d/dxhat, d/dyhat), each (n_funcs x n_points).
  std::pair<MatX, MatX> eval_grad(const MatX& ref_points) const;
};

PolyBasis make_poly_basis(int degree);

/// L2(K)-orthonormal basis on one physical element, psi = transform *
/// monomials(ref). The transform is the inverse Cholesky factor of the
/// element Gram matrix of the seed.
struct ElementBasis {
  const PolyBasis* seed = nullptr;
  MatX transform;  // n_funcs x n_funcs, lower triangular
};

/// Throws for near-degenerate elements (area < 1e-14) or a non-SPD Gram.
ElementBasis orthonormalize_on_element(const PolyBasis& basis,
                                       const ElementGeometry& geom);

/// Orthonormal basis values at reference points: (n_funcs x n_points).
MatX basis_values(const ElementBasis& eb, const MatX& ref_points);

/// Physical-coordinate gradients of the orthonormal basis.
std::pair<MatX, MatX> basis_gradients(const ElementBasis& eb,
                                      const ElementGeometry& geom,
                                      const MatX& ref_points);

}  // namespace oldg
