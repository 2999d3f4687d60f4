#include "oldg/dg_space.hpp"

#include <ostream>
#include <stdexcept>

#include "oldg/quadrature.hpp"

namespace oldg {

DgSpace make_space(const TriMesh& mesh, int degree, int n_components) {
  if (n_components != 1 && n_components != 2)
    throw std::invalid_argument("make_space: n_components must be 1 or 2");
  DgSpace sp;
  sp.mesh = &mesh;
  sp.degree = degree;
  sp.n_components = n_components;
  sp.seed = std::make_shared<const PolyBasis>(make_poly_basis(degree));
  sp.nb = sp.seed->n_funcs;
  sp.dofs_per_element = n_components * sp.nb;
  sp.n_dofs_total = mesh.n_elements() * sp.dofs_per_element;
  sp.element_bases.reserve(mesh.geom.size());
  for (const auto& g : mesh.geom)
    sp.element_bases.push_back(orthonormalize_on_element(*sp.seed, g));

  if (n_components == 1) {
    const QuadRule rule = triangle_rule(degree);
    sp.one_coefficients.setZero(sp.n_dofs_total);
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const MatX vals = basis_values(sp.element_bases[e], rule.points);
      const VecX integrals =
          mesh.geom[e].det_jac * (vals * rule.weights);
      sp.one_coefficients.segment(sp.dof(e, 0, 0), sp.nb) = integrals;
    }
  }
  return sp;
}

FieldVec zero_field(const DgSpace& space) {
  return {&space, VecX::Zero(space.n_dofs_total)};
}

namespace {

template <typename Eval>
FieldVec project_impl(const DgSpace& space, int quad_exactness, Eval&& eval) {
  const int exactness =
      quad_exactness < 0 ? 2 * space.degree + 4 : quad_exactness;
  const QuadRule rule = triangle_rule(exactness);
  const int nq = rule.n_points();

  FieldVec out = zero_field(space);
  MatX fvals(space.n_components, nq);
  for (int e = 0; e < space.mesh->n_elements(); ++e) {
    const ElementGeometry& g = space.mesh->geom[e];
    for (int q = 0; q < nq; ++q) {
      const Vec2 x = g.to_physical(rule.points.row(q).transpose());
      eval(x, fvals, q);
    }
    const MatX vals = basis_values(space.element_bases[e], rule.points);
    for (int c = 0; c < space.n_components; ++c) {
      const VecX wf = rule.weights.cwiseProduct(fvals.row(c).transpose());
      out.coef.segment(space.dof(e, c, 0), space.nb) =
          g.det_jac * (vals * wf);
    }
  }
  return out;
}

}  // namespace

FieldVec l2_project(const DgSpace& space, const ScalarFn& f,
                    int quad_exactness) {
  if (!space.scalar())
    throw std::invalid_argument("l2_project: scalar function on vector space");
  return project_impl(space, quad_exactness,
                      [&](const Vec2& x, MatX& vals, int q) { vals(0, q) = f(x); });
}

FieldVec l2_project(const DgSpace& space, const VectorFn& f,
                    int quad_exactness) {
  if (space.n_components != 2)
    throw std::invalid_argument("l2_project: vector function on scalar space");
  return project_impl(space, quad_exactness, [&](const Vec2& x, MatX& vals, int q) {
    const Vec2 v = f(x);
    vals(0, q) = v.x();
    vals(1, q) = v.y();
  });
}

VecX evaluate(const FieldVec& field, int elem, const Vec2& ref_point) {
  const DgSpace& sp = *field.space;
  if (elem < 0 || elem >= sp.mesh->n_elements())
    throw std::out_of_range("evaluate: element id out of range");
  MatX pt(1, 2);
  pt << ref_point.x(), ref_point.y();
  const MatX vals = basis_values(sp.element_bases[elem], pt);
  VecX out(sp.n_components);
  for (int c = 0; c < sp.n_components; ++c)
    out[c] = vals.col(0).dot(field.coef.segment(sp.dof(elem, c, 0), sp.nb));
  return out;
}

double mean_value(const FieldVec& field) {
  if (!field.space->scalar())
    throw std::invalid_argument("mean_value: field must be scalar");
  return field.space->one_coefficients.dot(field.coef);
}

FieldVec remove_mean(const FieldVec& field) {
  const double mean = mean_value(field);  // throws on vector fields
  FieldVec out{field.space, field.coef - mean * field.space->one_coefficients};
  return out;
}

void export_field_csv(const FieldVec& field, std::ostream& out) {
  const DgSpace& sp = *field.space;
  const QuadRule rule = triangle_rule(2 * sp.degree);
  out << "# element,x,y";
  for (int c = 0; c < sp.n_components; ++c) out << ",value" << c;
  out << "\n";
  for (int e = 0; e < sp.mesh->n_elements(); ++e) {
    for (int q = 0; q < rule.n_points(); ++q) {
      const Vec2 ref = rule.points.row(q).transpose();
      const Vec2 x = sp.mesh->geom[e].to_physical(ref);
      const VecX v = evaluate(field, e, ref);
      out << e << "," << x.x() << "," << x.y();
      for (int c = 0; c < sp.n_components; ++c) out << "," << v[c];
      out << "\n";
    }
  }
}

}  // namespace oldg
