#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "oldg/basis.hpp"
#include "oldg/mesh.hpp"
#include "oldg/types.hpp"

namespace oldg {

using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;

/// Broken polynomial space on a TriMesh with a per-element L2-orthonormal
/// basis, so every mass matrix is the identity. Dof layout is
/// element-major, component-major within the element, basis index minor.
struct DgSpace {
  const TriMesh* mesh = nullptr;
  int degree = 0;
  int n_components = 1;
  int nb = 0;  // basis functions per component
  int dofs_per_element = 0;
  int n_dofs_total = 0;
  std::shared_ptr<const PolyBasis> seed;  // heap-stable: element bases point here
  std::vector<ElementBasis> element_bases;
  VecX one_coefficients;  // scalar spaces: integrals of each basis function

  int dof(int elem, int comp, int i) const {
    return elem * dofs_per_element + comp * nb + i;
  }
  bool scalar() const { return n_components == 1; }
};

DgSpace make_space(const TriMesh& mesh, int degree, int n_components);

/// Coefficient vector of a discrete field on a DgSpace.
struct FieldVec {
  const DgSpace* space = nullptr;
  VecX coef;
};

FieldVec zero_field(const DgSpace& space);

/// Local L2 projection: on each element, (proj - f, psi) = 0 for all basis
/// functions. Quadrature exactness defaults to 2*degree + 4.
FieldVec l2_project(const DgSpace& space, const ScalarFn& f,
                    int quad_exactness = -1);
FieldVec l2_project(const DgSpace& space, const VectorFn& f,
                    int quad_exactness = -1);

/// Field value(s) at a reference point of an element.
VecX evaluate(const FieldVec& field, int elem, const Vec2& ref_point);

/// Exact integral over the domain of a scalar field.
double mean_value(const FieldVec& field);

/// Subtracts the (constant) mean; output integrates to zero.
FieldVec remove_mean(const FieldVec& field);

/// CSV rows (element id, x, y, value components) at quadrature points.
void export_field_csv(const FieldVec& field, std::ostream& out);

}  // namespace oldg
