#include "oldg/verification.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "oldg/forms.hpp"
#include "oldg/mesh.hpp"
#include "oldg/quadrature.hpp"

namespace oldg {

namespace {

struct Setup {
  std::unique_ptr<TriMesh> mesh;
  std::unique_ptr<DgSpace> vel;
  std::unique_ptr<DgSpace> pre;
  FormParams fp;
};

Setup make_setup(int n, int r) {
  Setup s;
  s.mesh = std::make_unique<TriMesh>(build_uniform_mesh(n));
  s.vel = std::make_unique<DgSpace>(make_space(*s.mesh, r, 2));
  s.pre = std::make_unique<DgSpace>(make_space(*s.mesh, r - 1, 1));
  s.fp = default_form_params(r);
  return s;
}

FieldVec random_field(const DgSpace& sp, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FieldVec f = zero_field(sp);
  for (int i = 0; i < sp.n_dofs_total; ++i) f.coef[i] = dist(rng);
  return f;
}

double max_asymmetry(const SpMat& a) {
  const SpMat diff = SpMat(a.transpose()) - a;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

// (div_h w, g) by direct quadrature, independent of the assembled coupling.
double div_inner(const FieldVec& w, const FieldVec& g) {
  const DgSpace& vel = *w.space;
  const DgSpace& pre = *g.space;
  const QuadRule rule = triangle_rule(vel.degree + pre.degree + 2);
  double acc = 0.0;
  for (int e = 0; e < vel.mesh->n_elements(); ++e) {
    auto [gx, gy] = basis_gradients(vel.element_bases[e], vel.mesh->geom[e],
                                    rule.points);
    const MatX pvals = basis_values(pre.element_bases[e], rule.points);
    const VecX wq = vel.mesh->geom[e].det_jac * rule.weights;
    const VecX divw = gx.transpose() * w.coef.segment(vel.dof(e, 0, 0), vel.nb) +
                      gy.transpose() * w.coef.segment(vel.dof(e, 1, 0), vel.nb);
    const VecX gv = pvals.transpose() * g.coef.segment(pre.dof(e, 0, 0), pre.nb);
    acc += wq.dot(divw.cwiseProduct(gv));
  }
  return acc;
}

// (grad_h g, w) by direct quadrature.
double grad_inner(const FieldVec& g, const FieldVec& w) {
  const DgSpace& vel = *w.space;
  const DgSpace& pre = *g.space;
  const QuadRule rule = triangle_rule(vel.degree + pre.degree + 2);
  double acc = 0.0;
  for (int e = 0; e < vel.mesh->n_elements(); ++e) {
    auto [gx, gy] = basis_gradients(pre.element_bases[e], pre.mesh->geom[e],
                                    rule.points);
    const MatX vvals = basis_values(vel.element_bases[e], rule.points);
    const VecX wq = vel.mesh->geom[e].det_jac * rule.weights;
    const VecX dgx = gx.transpose() * g.coef.segment(pre.dof(e, 0, 0), pre.nb);
    const VecX dgy = gy.transpose() * g.coef.segment(pre.dof(e, 0, 0), pre.nb);
    const VecX w1 = vvals.transpose() * w.coef.segment(vel.dof(e, 0, 0), vel.nb);
    const VecX w2 = vvals.transpose() * w.coef.segment(vel.dof(e, 1, 0), vel.nb);
    acc += wq.dot(dgx.cwiseProduct(w1) + dgy.cwiseProduct(w2));
  }
  return acc;
}

// Direct face-sum side of the lift identities.
double face_sum_R(const FieldVec& w, const FieldVec& g) {
  const DgSpace& vel = *w.space;
  const DgSpace& pre = *g.space;
  const TriMesh& mesh = *vel.mesh;
  const QuadRule frule = edge_rule(vel.degree + pre.degree + 2);
  double acc = 0.0;
  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    for (int q = 0; q < frule.n_points(); ++q) {
      const Vec2 xq = mesh.face_point(fid, frule.points(q, 0));
      const double wq = frule.weights[q] * f.measure;
      const VecX wa = evaluate(w, f.k1, mesh.geom[f.k1].to_reference(xq));
      const VecX ga = evaluate(g, f.k1, mesh.geom[f.k1].to_reference(xq));
      double jwn, gavg;
      if (f.interior()) {
        const VecX wb = evaluate(w, f.k2, mesh.geom[f.k2].to_reference(xq));
        const VecX gb = evaluate(g, f.k2, mesh.geom[f.k2].to_reference(xq));
        jwn = f.normal.x() * (wa[0] - wb[0]) + f.normal.y() * (wa[1] - wb[1]);
        gavg = 0.5 * (ga[0] + gb[0]);
      } else {
        jwn = f.normal.x() * wa[0] + f.normal.y() * wa[1];
        gavg = ga[0];
      }
      acc += wq * gavg * jwn;
    }
  }
  return acc;
}

double face_sum_G(const FieldVec& beta, const FieldVec& w) {
  const DgSpace& vel = *w.space;
  const DgSpace& pre = *beta.space;
  const TriMesh& mesh = *vel.mesh;
  const QuadRule frule = edge_rule(vel.degree + pre.degree + 2);
  double acc = 0.0;
  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    if (!f.interior()) continue;
    for (int q = 0; q < frule.n_points(); ++q) {
      const Vec2 xq = mesh.face_point(fid, frule.points(q, 0));
      const double wq = frule.weights[q] * f.measure;
      const VecX wa = evaluate(w, f.k1, mesh.geom[f.k1].to_reference(xq));
      const VecX wb = evaluate(w, f.k2, mesh.geom[f.k2].to_reference(xq));
      const VecX ba = evaluate(beta, f.k1, mesh.geom[f.k1].to_reference(xq));
      const VecX bb = evaluate(beta, f.k2, mesh.geom[f.k2].to_reference(xq));
      const double wn = 0.5 * (f.normal.x() * (wa[0] + wb[0]) +
                               f.normal.y() * (wa[1] + wb[1]));
      acc += wq * wn * (ba[0] - bb[0]);
    }
  }
  return acc;
}

struct Check {
  InvariantReport report;
  void violation(double v) {
    report.worst = std::max(report.worst, v);
    report.samples += 1;
  }
};

}  // namespace

std::vector<InvariantReport> run_form_property_suite(unsigned seed,
                                                     int n_samples) {
  std::mt19937 rng(seed);
  Setup setups[2] = {make_setup(3, 1), make_setup(2, 2)};

  auto mk = [&](const char* name, double tol) {
    Check c;
    c.report.name = name;
    c.report.tol = tol;
    return c;
  };
  Check positivity = mk("a_c_positivity", 1e-10);
  Check sym_ad = mk("a_d_symmetry", 1e-12);
  Check sym_asip = mk("a_sip_symmetry", 1e-12);
  Check coercivity_eps = mk("a_eps_coercivity", 1e-10);
  Check coercivity_sip = mk("a_sip_coercivity", 1e-10);
  Check equiv_bform = mk("b_form_equivalence_div_vs_grad_route", 1e-10);
  Check equiv_lift_div = mk("b_form_equivalence_lift_div_route", 1e-10);
  Check equiv_lift_grad = mk("b_form_equivalence_lift_grad_route", 1e-10);
  Check lift_r_identity = mk("lift_R_defining_identity", 1e-10);
  Check lift_g_identity = mk("lift_G_defining_identity", 1e-10);
  Check decomposition = mk("a_c_centered_minus_upwind_decomposition", 1e-10);
  Check matrix_vs_apply = mk("a_c_matrix_matches_direct_evaluation", 1e-10);

  for (auto& s : setups) {
    const AssembledForm ad = assemble_diffusion(*s.vel, s.fp);
    const AssembledForm asip = assemble_pressure_poisson(*s.pre, s.fp);
    const AssembledForm bmat = assemble_pressure_coupling(*s.vel, *s.pre);
    sym_ad.violation(max_asymmetry(ad.matrix));
    sym_asip.violation(max_asymmetry(asip.matrix));

    SpMat a_eps_variants[3];
    double omegas[3];
    {
      int idx = 0;
      for (int eps : {-1, 0, 1}) {
        FormParams fp = s.fp;
        fp.epsilon = eps;
        a_eps_variants[idx] = assemble_diffusion(*s.vel, fp).matrix;
        omegas[idx] = fp.omega();
        ++idx;
      }
    }

    for (int sample = 0; sample < n_samples; ++sample) {
      const FieldVec z = random_field(*s.vel, rng);
      const FieldVec phi = random_field(*s.vel, rng);
      const FieldVec w = random_field(*s.vel, rng);
      const FieldVec g = random_field(*s.pre, rng);

      positivity.violation(-apply_convection(z, z, phi, phi));

      const double wdg2 = [&] {
        const double v = dg_norm(w, s.fp);
        return v * v;
      }();
      for (int k = 0; k < 3; ++k) {
        const double quad = w.coef.dot(a_eps_variants[k] * w.coef);
        coercivity_eps.violation(omegas[k] * wdg2 - quad);
      }
      {
        const double gdg = dg_seminorm(g, s.fp);
        const double quad = g.coef.dot(asip.matrix * g.coef);
        coercivity_sip.violation(0.5 * gdg * gdg - quad);
      }

      const double b_matrix = g.coef.dot(bmat.matrix * w.coef);
      equiv_bform.violation(std::abs(b_matrix - b_value_divgrad_form(w, g)));

      const FieldVec rw = lift_R(w, *s.pre);
      const FieldVec gg = lift_G(g, *s.vel);
      equiv_lift_div.violation(
          std::abs(b_matrix - (div_inner(w, g) - rw.coef.dot(g.coef))));
      equiv_lift_grad.violation(
          std::abs(b_matrix - (-grad_inner(g, w) + gg.coef.dot(w.coef))));
      lift_r_identity.violation(std::abs(rw.coef.dot(g.coef) - face_sum_R(w, g)));
      lift_g_identity.violation(std::abs(gg.coef.dot(w.coef) - face_sum_G(g, w)));

      const AssembledForm conv = assemble_convection(*s.vel, z);
      const double ac_matrix = w.coef.dot(conv.matrix * phi.coef);
      decomposition.violation(
          std::abs(ac_matrix - (convection_centered_part(z, phi, w) -
                                convection_upwind_part(z, z, phi, w))));
      matrix_vs_apply.violation(
          std::abs(ac_matrix - apply_convection(z, z, phi, w)));
    }
  }

  std::vector<InvariantReport> reports;
  for (Check* c : {&positivity, &sym_ad, &sym_asip, &coercivity_eps,
                   &coercivity_sip, &equiv_bform, &equiv_lift_div,
                   &equiv_lift_grad, &lift_r_identity, &lift_g_identity,
                   &decomposition, &matrix_vs_apply}) {
    c->report.worst = std::max(c->report.worst, 0.0);
    c->report.pass = c->report.worst <= c->report.tol;
    reports.push_back(c->report);
  }
  return reports;
}

}  // namespace oldg
