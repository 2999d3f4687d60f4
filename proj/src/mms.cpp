#include "oldg/mms.hpp"

#include <cmath>
#include <stdexcept>

#include "oldg/quadrature.hpp"

namespace oldg {

namespace {

// a(s) = s^3 (s-1)^2 and derivatives; a' = s^2 (s-1)(5s-3).
inline double a0(double s) { return s * s * s * (s - 1.0) * (s - 1.0); }
inline double a1(double s) { return s * s * (s - 1.0) * (5.0 * s - 3.0); }
inline double a2(double s) { return 20.0 * s * s * s - 24.0 * s * s + 6.0 * s; }
inline double a3(double s) { return 60.0 * s * s - 48.0 * s + 6.0; }

}  // namespace

Vec2 ExactSolution::velocity(const Vec2& x, double t) const {
  const double f = t + 1.0;
  return {a0(x.x()) * a1(x.y()) * f, -a1(x.x()) * a0(x.y()) * f};
}

Mat2 ExactSolution::velocity_gradient(const Vec2& x, double t) const {
  const double f = t + 1.0;
  Mat2 g;
  g(0, 0) = a1(x.x()) * a1(x.y()) * f;
  g(0, 1) = a0(x.x()) * a2(x.y()) * f;
  g(1, 0) = -a2(x.x()) * a0(x.y()) * f;
  g(1, 1) = -a1(x.x()) * a1(x.y()) * f;
  return g;
}

Vec2 ExactSolution::velocity_laplacian(const Vec2& x, double t) const {
  const double f = t + 1.0;
  return {(a2(x.x()) * a1(x.y()) + a0(x.x()) * a3(x.y())) * f,
          -(a3(x.x()) * a0(x.y()) + a1(x.x()) * a2(x.y())) * f};
}

Vec2 ExactSolution::velocity_time_derivative(const Vec2& x, double) const {
  return {a0(x.x()) * a1(x.y()), -a1(x.x()) * a0(x.y())};
}

Vec2 ExactSolution::convection(const Vec2& x, double t) const {
  const Vec2 u = velocity(x, t);
  const Mat2 g = velocity_gradient(x, t);
  return g * u;
}

double ExactSolution::pressure(const Vec2& x, double t) const {
  return std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()) * (t + 1.0);
}

Vec2 ExactSolution::pressure_gradient(const Vec2& x, double t) const {
  const double f = t + 1.0;
  return {M_PI * std::cos(M_PI * x.x()) * std::cos(M_PI * x.y()) * f,
          -M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()) * f};
}

Vec2 mms_forcing(const ExactSolution& exact, double mu, const KernelParams& k,
                 const Vec2& x, double t) {
  // The Laplacian carries the separable time factor (t+1); divide it out to
  // get the time-independent spatial part multiplied by the memory integral.
  const Vec2 lap = exact.velocity_laplacian(x, t);
  const Vec2 lap_spatial = lap / (t + 1.0);
  const double memory = kernel_poly1_integral(k, t);
  return exact.velocity_time_derivative(x, t) - mu * lap +
         exact.convection(x, t) - memory * lap_spatial +
         exact.pressure_gradient(x, t);
}

ErrorNorms error_norms(const FieldVec& u, const FieldVec& p,
                       const ExactSolution& exact, double t,
                       const FormParams& params) {
  const DgSpace& vel = *u.space;
  const DgSpace& pre = *p.space;
  if (vel.n_components != 2 || !pre.scalar() || vel.mesh != pre.mesh)
    throw std::invalid_argument("error_norms: space mismatch");
  const TriMesh& mesh = *vel.mesh;
  const QuadRule vrule = triangle_rule(2 * vel.degree + 4);
  const QuadRule frule = edge_rule(2 * vel.degree + 4);

  double err_u = 0.0, err_grad = 0.0, err_p = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementGeometry& g = mesh.geom[e];
    const MatX vvals = basis_values(vel.element_bases[e], vrule.points);
    auto [vgx, vgy] = basis_gradients(vel.element_bases[e], g, vrule.points);
    const MatX pvals = basis_values(pre.element_bases[e], vrule.points);

    for (int q = 0; q < vrule.n_points(); ++q) {
      const double wq = g.det_jac * vrule.weights[q];
      const Vec2 xq = g.to_physical(vrule.points.row(q).transpose());
      const Vec2 ue = exact.velocity(xq, t);
      const Mat2 ge = exact.velocity_gradient(xq, t);
      const double pe = exact.pressure(xq, t);

      Vec2 uh = Vec2::Zero();
      Mat2 gh = Mat2::Zero();
      for (int c = 0; c < 2; ++c) {
        const auto coef = u.coef.segment(vel.dof(e, c, 0), vel.nb);
        uh[c] = coef.dot(vvals.col(q));
        gh(c, 0) = coef.dot(vgx.col(q));
        gh(c, 1) = coef.dot(vgy.col(q));
      }
      const double ph =
          p.coef.segment(pre.dof(e, 0, 0), pre.nb).dot(pvals.col(q));

      err_u += wq * (uh - ue).squaredNorm();
      err_grad += wq * (gh - ge).squaredNorm();
      err_p += wq * (ph - pe) * (ph - pe);
    }
  }

  // Jump part of the dG error: the exact velocity is continuous with zero
  // boundary trace, so only the discrete jumps contribute.
  double err_jump = 0.0;
  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    const double sigma = params.sigma(f.interior());
    for (int q = 0; q < frule.n_points(); ++q) {
      const double s = frule.points(q, 0);
      const Vec2 xq = mesh.face_point(fid, s);
      const double wq = frule.weights[q] * f.measure;
      MatX pt1(1, 2);
      const Vec2 ra = mesh.geom[f.k1].to_reference(xq);
      pt1 << ra.x(), ra.y();
      const MatX va = basis_values(vel.element_bases[f.k1], pt1);
      Vec2 jump;
      for (int c = 0; c < 2; ++c)
        jump[c] = u.coef.segment(vel.dof(f.k1, c, 0), vel.nb).dot(va.col(0));
      if (f.interior()) {
        const Vec2 rb = mesh.geom[f.k2].to_reference(xq);
        pt1 << rb.x(), rb.y();
        const MatX vb = basis_values(vel.element_bases[f.k2], pt1);
        for (int c = 0; c < 2; ++c)
          jump[c] -=
              u.coef.segment(vel.dof(f.k2, c, 0), vel.nb).dot(vb.col(0));
      }
      err_jump += (sigma / f.h()) * wq * jump.squaredNorm();
    }
  }

  ErrorNorms out;
  out.u_l2 = std::sqrt(err_u);
  out.u_dg = std::sqrt(err_grad + err_jump);
  out.p_l2 = std::sqrt(err_p);
  return out;
}

}  // namespace oldg
