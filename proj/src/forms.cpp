#include "oldg/forms.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "oldg/quadrature.hpp"

namespace oldg {

void FormParams::validate() const {
  if (sigma_int <= 0.0 || sigma_bnd <= 0.0)
    throw std::invalid_argument("FormParams: sigma must satisfy sigma > 0");
  if (sigma_tilde <= 0.0)
    throw std::invalid_argument("FormParams: sigma_tilde must be > 0");
  if (epsilon != -1 && epsilon != 0 && epsilon != 1)
    throw std::invalid_argument("FormParams: epsilon must be in {-1, 0, 1}");
}

FormParams default_form_params(int velocity_degree) {
  FormParams p;
  p.sigma_int = 2.0 * (velocity_degree + 2);
  p.sigma_bnd = 2.0 * p.sigma_int;
  p.sigma_tilde = 10.0;
  p.epsilon = -1;
  return p;
}

namespace {

struct SideTab {
  MatX vals;      // nb x nq
  MatX gx, gy;    // nb x nq (physical gradients), empty if not requested
  MatX gn;        // nb x nq, gradient dot face normal
};

struct FaceQuad {
  VecX weights;            // physical weights
  std::vector<Vec2> phys;  // points on the edge
};

FaceQuad face_quad(const TriMesh& mesh, int face_id, const QuadRule& rule) {
  FaceQuad fq;
  const Face& f = mesh.faces[face_id];
  const int nq = rule.n_points();
  fq.weights = rule.weights * f.measure;
  fq.phys.resize(nq);
  for (int q = 0; q < nq; ++q)
    fq.phys[q] = mesh.face_point(face_id, rule.points(q, 0));
  return fq;
}

SideTab tabulate_side(const DgSpace& sp, int elem, const FaceQuad& fq,
                      const Vec2& normal, bool need_grads) {
  const ElementGeometry& g = sp.mesh->geom[elem];
  const int nq = static_cast<int>(fq.phys.size());
  MatX ref(nq, 2);
  for (int q = 0; q < nq; ++q)
    ref.row(q) = g.to_reference(fq.phys[q]).transpose();

  SideTab tab;
  tab.vals = basis_values(sp.element_bases[elem], ref);
  if (need_grads) {
    auto [gx, gy] = basis_gradients(sp.element_bases[elem], g, ref);
    tab.gn = normal.x() * gx + normal.y() * gy;
    tab.gx = std::move(gx);
    tab.gy = std::move(gy);
  }
  return tab;
}

// Values of one component of a field at tabulated points: row vector (1 x nq).
Eigen::RowVectorXd field_rows(const FieldVec& f, int elem, int comp,
                              const MatX& vals) {
  const DgSpace& sp = *f.space;
  return f.coef.segment(sp.dof(elem, comp, 0), sp.nb).transpose() * vals;
}

void scatter_component_block(const DgSpace& sp_row, const DgSpace& sp_col,
                             int e_row, int e_col, int comp_row, int comp_col,
                             const MatX& block, std::vector<Triplet>& trips) {
  const int row0 = sp_row.dof(e_row, comp_row, 0);
  const int col0 = sp_col.dof(e_col, comp_col, 0);
  for (int j = 0; j < block.cols(); ++j)
    for (int i = 0; i < block.rows(); ++i)
      trips.emplace_back(row0 + i, col0 + j, block(i, j));
}

// Scatters a stacked face block (sides in {A, B}) into all components.
void scatter_face_block(const DgSpace& sp, int eA, int eB, const MatX& local,
                        std::vector<Triplet>& trips) {
  const int nb = sp.nb;
  const int n_sides = static_cast<int>(local.rows()) / nb;
  const int elems[2] = {eA, eB};
  for (int c = 0; c < sp.n_components; ++c)
    for (int sr = 0; sr < n_sides; ++sr)
      for (int sc = 0; sc < n_sides; ++sc)
        scatter_component_block(sp, sp, elems[sr], elems[sc], c, c,
                                local.block(sr * nb, sc * nb, nb, nb), trips);
}

SpMat from_triplets(int rows, int cols, std::vector<Triplet>& trips) {
  SpMat m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

// Shared volume + face assembly of the interior-penalty Laplacian with the
// face block C - eps*C^T + P; used by both the velocity and pressure forms.
SpMat assemble_ip_laplacian(const DgSpace& sp, double sigma_int,
                            double sigma_bnd, int eps, bool interior_only) {
  const TriMesh& mesh = *sp.mesh;
  const QuadRule vrule = triangle_rule(2 * sp.degree + 2);
  const QuadRule frule = edge_rule(2 * sp.degree + 2);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.n_elements()) * sp.nb * sp.nb *
                (sp.n_components + 8));

  for (int e = 0; e < mesh.n_elements(); ++e) {
    auto [gx, gy] = basis_gradients(sp.element_bases[e], mesh.geom[e],
                                    vrule.points);
    const VecX sw =
        (mesh.geom[e].det_jac * vrule.weights).cwiseSqrt();
    const MatX sx = gx * sw.asDiagonal();
    const MatX sy = gy * sw.asDiagonal();
    const MatX local = sx * sx.transpose() + sy * sy.transpose();
    for (int c = 0; c < sp.n_components; ++c)
      scatter_component_block(sp, sp, e, e, c, c, local, trips);
  }

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    if (interior_only && !f.interior()) continue;
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const SideTab a = tabulate_side(sp, f.k1, fq, f.normal, true);

    MatX vj, na;
    if (f.interior()) {
      const SideTab b = tabulate_side(sp, f.k2, fq, f.normal, true);
      vj.resize(2 * sp.nb, fq.weights.size());
      vj << a.vals, -b.vals;
      na.resize(2 * sp.nb, fq.weights.size());
      na << 0.5 * a.gn, 0.5 * b.gn;
    } else {
      vj = a.vals;
      na = a.gn;
    }

    const double sigma = f.interior() ? sigma_int : sigma_bnd;
    const MatX c_blk = -(vj * fq.weights.asDiagonal()) * na.transpose();
    const MatX sj = vj * fq.weights.cwiseSqrt().asDiagonal();
    MatX local = c_blk - eps * c_blk.transpose();
    local.noalias() += (sigma / f.h()) * (sj * sj.transpose());
    scatter_face_block(sp, f.k1, f.k2, local, trips);
  }

  return from_triplets(sp.n_dofs_total, sp.n_dofs_total, trips);
}

}  // namespace

AssembledForm assemble_diffusion(const DgSpace& velocity,
                                 const FormParams& params) {
  params.validate();
  return {assemble_ip_laplacian(velocity, params.sigma_int, params.sigma_bnd,
                                params.epsilon, false),
          "A_eps"};
}

AssembledForm assemble_pressure_poisson(const DgSpace& pressure,
                                        const FormParams& params) {
  params.validate();
  if (!pressure.scalar())
    throw std::invalid_argument("assemble_pressure_poisson: scalar space only");
  return {assemble_ip_laplacian(pressure, params.sigma_tilde,
                                params.sigma_tilde, -1, true),
          "A_sip"};
}

AssembledForm assemble_pressure_coupling(const DgSpace& velocity,
                                         const DgSpace& pressure) {
  if (velocity.mesh != pressure.mesh)
    throw std::invalid_argument("assemble_pressure_coupling: mesh mismatch");
  if (velocity.n_components != 2 || !pressure.scalar())
    throw std::invalid_argument(
        "assemble_pressure_coupling: needs vector velocity, scalar pressure");

  const TriMesh& mesh = *velocity.mesh;
  const QuadRule vrule = triangle_rule(2 * velocity.degree + 2);
  const QuadRule frule = edge_rule(2 * velocity.degree + 2);
  std::vector<Triplet> trips;

  for (int e = 0; e < mesh.n_elements(); ++e) {
    auto [gx, gy] = basis_gradients(velocity.element_bases[e], mesh.geom[e],
                                    vrule.points);
    const MatX pvals = basis_values(pressure.element_bases[e], vrule.points);
    const VecX w = mesh.geom[e].det_jac * vrule.weights;
    const MatX pw = pvals * w.asDiagonal();
    scatter_component_block(pressure, velocity, e, e, 0, 0,
                            pw * gx.transpose(), trips);
    scatter_component_block(pressure, velocity, e, e, 0, 1,
                            pw * gy.transpose(), trips);
  }

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const SideTab va = tabulate_side(velocity, f.k1, fq, f.normal, false);
    const SideTab pa = tabulate_side(pressure, f.k1, fq, f.normal, false);

    MatX pavg, vjump;
    if (f.interior()) {
      const SideTab vb = tabulate_side(velocity, f.k2, fq, f.normal, false);
      const SideTab pb = tabulate_side(pressure, f.k2, fq, f.normal, false);
      pavg.resize(2 * pressure.nb, fq.weights.size());
      pavg << 0.5 * pa.vals, 0.5 * pb.vals;
      vjump.resize(2 * velocity.nb, fq.weights.size());
      vjump << va.vals, -vb.vals;
    } else {
      pavg = pa.vals;
      vjump = va.vals;
    }

    const MatX base = -(pavg * fq.weights.asDiagonal()) * vjump.transpose();
    const int elems[2] = {f.k1, f.k2};
    const int n_sides = f.interior() ? 2 : 1;
    for (int c = 0; c < 2; ++c) {
      const double nc = f.normal[c];
      for (int sr = 0; sr < n_sides; ++sr)
        for (int sc = 0; sc < n_sides; ++sc)
          scatter_component_block(
              pressure, velocity, elems[sr], elems[sc], 0, c,
              nc * base.block(sr * pressure.nb, sc * velocity.nb, pressure.nb,
                              velocity.nb),
              trips);
    }
  }

  return {from_triplets(pressure.n_dofs_total, velocity.n_dofs_total, trips),
          "b"};
}

namespace {

int convection_vol_exactness(int r) { return std::max(2 * r + 2, 3 * r - 1); }
int convection_face_exactness(int r) { return std::max(2 * r + 2, 3 * r); }

}  // namespace

AssembledForm assemble_convection(const DgSpace& velocity, const FieldVec& z) {
  if (z.space != &velocity)
    throw std::invalid_argument("assemble_convection: transport field space");
  const TriMesh& mesh = *velocity.mesh;
  const int nb = velocity.nb;
  const QuadRule vrule = triangle_rule(convection_vol_exactness(velocity.degree));
  const QuadRule frule = edge_rule(convection_face_exactness(velocity.degree));
  std::vector<Triplet> trips;

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const MatX vals = basis_values(velocity.element_bases[e], vrule.points);
    auto [gx, gy] = basis_gradients(velocity.element_bases[e], mesh.geom[e],
                                    vrule.points);
    const Eigen::RowVectorXd z1 = field_rows(z, e, 0, vals);
    const Eigen::RowVectorXd z2 = field_rows(z, e, 1, vals);
    const Eigen::RowVectorXd divz =
        field_rows(z, e, 0, gx) + field_rows(z, e, 1, gy);
    // D(j, q) = (z . grad phi_j)(q) + 1/2 div z(q) phi_j(q)
    const MatX d = gx * z1.asDiagonal() + gy * z2.asDiagonal() +
                   0.5 * (vals * divz.asDiagonal());
    const VecX w = mesh.geom[e].det_jac * vrule.weights;
    const MatX local = (vals * w.asDiagonal()) * d.transpose();
    for (int c = 0; c < velocity.n_components; ++c)
      scatter_component_block(velocity, velocity, e, e, c, c, local, trips);
  }

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const int nq = static_cast<int>(fq.weights.size());
    const SideTab a = tabulate_side(velocity, f.k1, fq, f.normal, false);

    if (!f.interior()) {
      // Single trace: jump and average of z both equal z|_K.
      VecX zn(nq);
      {
        const Eigen::RowVectorXd z1 = field_rows(z, f.k1, 0, a.vals);
        const Eigen::RowVectorXd z2 = field_rows(z, f.k1, 1, a.vals);
        zn = (f.normal.x() * z1 + f.normal.y() * z2).transpose();
      }
      VecX cw = VecX::Zero(nq);
      for (int q = 0; q < nq; ++q) {
        cw[q] = -0.5 * fq.weights[q] * zn[q];
        if (zn[q] < 0.0) cw[q] += fq.weights[q] * (-zn[q]);  // inflow upwind
      }
      const MatX local = (a.vals * cw.asDiagonal()) * a.vals.transpose();
      for (int c = 0; c < velocity.n_components; ++c)
        scatter_component_block(velocity, velocity, f.k1, f.k1, c, c, local,
                                trips);
      continue;
    }

    const SideTab b = tabulate_side(velocity, f.k2, fq, f.normal, false);
    VecX zn_jump(nq), zn_avg(nq);
    {
      const Eigen::RowVectorXd za1 = field_rows(z, f.k1, 0, a.vals);
      const Eigen::RowVectorXd za2 = field_rows(z, f.k1, 1, a.vals);
      const Eigen::RowVectorXd zb1 = field_rows(z, f.k2, 0, b.vals);
      const Eigen::RowVectorXd zb2 = field_rows(z, f.k2, 1, b.vals);
      zn_jump = (f.normal.x() * (za1 - zb1) + f.normal.y() * (za2 - zb2))
                    .transpose();
      zn_avg = (0.5 * (f.normal.x() * (za1 + zb1) + f.normal.y() * (za2 + zb2)))
                   .transpose();
    }

    MatX local = MatX::Zero(2 * nb, 2 * nb);
    const MatX* vals[2] = {&a.vals, &b.vals};
    for (int q = 0; q < nq; ++q) {
      const double wq = fq.weights[q];
      // -1/2 [z].n {phi.w}: averages of products keep sides uncoupled.
      const double cj = -0.25 * wq * zn_jump[q];
      for (int s = 0; s < 2; ++s) {
        const MatX& v = *vals[s];
        local.block(s * nb, s * nb, nb, nb).noalias() +=
            cj * (v.col(q) * v.col(q).transpose());
      }
      // Upwind per adjacent element; n_K flips sign on side B.
      for (int s = 0; s < 2; ++s) {
        const double an = (s == 0) ? zn_avg[q] : -zn_avg[q];
        if (an < 0.0) {
          const double cu = wq * (-an);
          const MatX& vint = *vals[s];
          const MatX& vext = *vals[1 - s];
          local.block(s * nb, s * nb, nb, nb).noalias() +=
              cu * (vint.col(q) * vint.col(q).transpose());
          local.block(s * nb, (1 - s) * nb, nb, nb).noalias() -=
              cu * (vint.col(q) * vext.col(q).transpose());
        }
      }
    }
    scatter_face_block(velocity, f.k1, f.k2, local, trips);
  }

  return {from_triplets(velocity.n_dofs_total, velocity.n_dofs_total, trips),
          "A_c"};
}

namespace {

void check_same_space(const FieldVec& a, const FieldVec& b, const char* who) {
  if (a.space != b.space || a.space == nullptr)
    throw std::invalid_argument(std::string(who) + ": fields on the same space");
}

// Traces of a vector field on a face side at tabulated points.
struct VecTrace {
  Eigen::RowVectorXd c1, c2;
};

VecTrace vec_trace(const FieldVec& f, int elem, const MatX& vals) {
  return {field_rows(f, elem, 0, vals), field_rows(f, elem, 1, vals)};
}

struct ConvParts {
  double centered = 0.0;
  double upwind_abs = 0.0;     // with |{z}.n_K|, classified by theta
  double upwind_signed = 0.0;  // with {z}.n_K, classified by theta
};

ConvParts convection_parts(const FieldVec& theta, const FieldVec& z,
                           const FieldVec& phi, const FieldVec& w) {
  check_same_space(theta, z, "apply_convection");
  check_same_space(z, phi, "apply_convection");
  check_same_space(phi, w, "apply_convection");
  const DgSpace& sp = *z.space;
  const TriMesh& mesh = *sp.mesh;
  const QuadRule vrule = triangle_rule(convection_vol_exactness(sp.degree));
  const QuadRule frule = edge_rule(convection_face_exactness(sp.degree));
  ConvParts parts;

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const MatX vals = basis_values(sp.element_bases[e], vrule.points);
    auto [gx, gy] = basis_gradients(sp.element_bases[e], mesh.geom[e],
                                    vrule.points);
    const VecTrace zt = vec_trace(z, e, vals);
    const VecTrace wt = vec_trace(w, e, vals);
    const Eigen::RowVectorXd divz =
        field_rows(z, e, 0, gx) + field_rows(z, e, 1, gy);
    const Eigen::RowVectorXd p1x = field_rows(phi, e, 0, gx);
    const Eigen::RowVectorXd p1y = field_rows(phi, e, 0, gy);
    const Eigen::RowVectorXd p2x = field_rows(phi, e, 1, gx);
    const Eigen::RowVectorXd p2y = field_rows(phi, e, 1, gy);
    const VecTrace pt = vec_trace(phi, e, vals);
    const VecX wq = mesh.geom[e].det_jac * vrule.weights;
    for (int q = 0; q < wq.size(); ++q) {
      const double transport = (zt.c1[q] * p1x[q] + zt.c2[q] * p1y[q]) * wt.c1[q] +
                               (zt.c1[q] * p2x[q] + zt.c2[q] * p2y[q]) * wt.c2[q];
      const double temam =
          0.5 * divz[q] * (pt.c1[q] * wt.c1[q] + pt.c2[q] * wt.c2[q]);
      parts.centered += wq[q] * (transport + temam);
    }
  }

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const int nq = static_cast<int>(fq.weights.size());
    const SideTab a = tabulate_side(sp, f.k1, fq, f.normal, false);
    const VecTrace za = vec_trace(z, f.k1, a.vals);
    const VecTrace ta = vec_trace(theta, f.k1, a.vals);
    const VecTrace pa = vec_trace(phi, f.k1, a.vals);
    const VecTrace wa = vec_trace(w, f.k1, a.vals);

    if (!f.interior()) {
      for (int q = 0; q < nq; ++q) {
        const double zn = f.normal.x() * za.c1[q] + f.normal.y() * za.c2[q];
        const double tn = f.normal.x() * ta.c1[q] + f.normal.y() * ta.c2[q];
        const double pw = pa.c1[q] * wa.c1[q] + pa.c2[q] * wa.c2[q];
        parts.centered += fq.weights[q] * (-0.5 * zn * pw);
        if (tn < 0.0) {  // exterior trace is zero on the boundary
          parts.upwind_abs += fq.weights[q] * std::abs(zn) * pw;
          parts.upwind_signed += fq.weights[q] * zn * pw;
        }
      }
      continue;
    }

    const SideTab b = tabulate_side(sp, f.k2, fq, f.normal, false);
    const VecTrace zb = vec_trace(z, f.k2, b.vals);
    const VecTrace tb = vec_trace(theta, f.k2, b.vals);
    const VecTrace pb = vec_trace(phi, f.k2, b.vals);
    const VecTrace wb = vec_trace(w, f.k2, b.vals);
    for (int q = 0; q < nq; ++q) {
      const double zjn = f.normal.x() * (za.c1[q] - zb.c1[q]) +
                         f.normal.y() * (za.c2[q] - zb.c2[q]);
      const double zan = 0.5 * (f.normal.x() * (za.c1[q] + zb.c1[q]) +
                                f.normal.y() * (za.c2[q] + zb.c2[q]));
      const double tan_ = 0.5 * (f.normal.x() * (ta.c1[q] + tb.c1[q]) +
                                 f.normal.y() * (ta.c2[q] + tb.c2[q]));
      const double pw_avg = 0.5 * (pa.c1[q] * wa.c1[q] + pa.c2[q] * wa.c2[q] +
                                   pb.c1[q] * wb.c1[q] + pb.c2[q] * wb.c2[q]);
      parts.centered += fq.weights[q] * (-0.5 * zjn * pw_avg);

      // Side K1: n_K = n_F; side K2: n_K = -n_F.
      const double jump1 = (pa.c1[q] - pb.c1[q]) * wa.c1[q] +
                           (pa.c2[q] - pb.c2[q]) * wa.c2[q];
      const double jump2 = (pb.c1[q] - pa.c1[q]) * wb.c1[q] +
                           (pb.c2[q] - pa.c2[q]) * wb.c2[q];
      if (tan_ < 0.0) {
        parts.upwind_abs += fq.weights[q] * std::abs(zan) * jump1;
        parts.upwind_signed += fq.weights[q] * zan * jump1;
      }
      if (-tan_ < 0.0) {
        parts.upwind_abs += fq.weights[q] * std::abs(zan) * jump2;
        parts.upwind_signed += fq.weights[q] * (-zan) * jump2;
      }
    }
  }
  return parts;
}

}  // namespace

double apply_convection(const FieldVec& theta, const FieldVec& z,
                        const FieldVec& phi, const FieldVec& w) {
  const ConvParts parts = convection_parts(theta, z, phi, w);
  return parts.centered + parts.upwind_abs;
}

double convection_centered_part(const FieldVec& z, const FieldVec& phi,
                                const FieldVec& w) {
  return convection_parts(z, z, phi, w).centered;
}

double convection_upwind_part(const FieldVec& theta, const FieldVec& z,
                              const FieldVec& phi, const FieldVec& w) {
  return convection_parts(theta, z, phi, w).upwind_signed;
}

FieldVec lift_R(const FieldVec& w, const DgSpace& pressure) {
  const DgSpace& vel = *w.space;
  if (vel.mesh != pressure.mesh || vel.n_components != 2 || !pressure.scalar())
    throw std::invalid_argument("lift_R: velocity field and scalar space");
  const TriMesh& mesh = *vel.mesh;
  const QuadRule frule = edge_rule(vel.degree + pressure.degree + 2);
  FieldVec out = zero_field(pressure);

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const int nq = static_cast<int>(fq.weights.size());
    const SideTab va = tabulate_side(vel, f.k1, fq, f.normal, false);
    const VecTrace wa = vec_trace(w, f.k1, va.vals);
    VecX jwn(nq);
    if (f.interior()) {
      const SideTab vb = tabulate_side(vel, f.k2, fq, f.normal, false);
      const VecTrace wb = vec_trace(w, f.k2, vb.vals);
      for (int q = 0; q < nq; ++q)
        jwn[q] = f.normal.x() * (wa.c1[q] - wb.c1[q]) +
                 f.normal.y() * (wa.c2[q] - wb.c2[q]);
    } else {
      for (int q = 0; q < nq; ++q)
        jwn[q] = f.normal.x() * wa.c1[q] + f.normal.y() * wa.c2[q];
    }

    const double avg = f.interior() ? 0.5 : 1.0;
    const SideTab pa = tabulate_side(pressure, f.k1, fq, f.normal, false);
    out.coef.segment(pressure.dof(f.k1, 0, 0), pressure.nb) +=
        avg * (pa.vals * fq.weights.cwiseProduct(jwn));
    if (f.interior()) {
      const SideTab pb = tabulate_side(pressure, f.k2, fq, f.normal, false);
      out.coef.segment(pressure.dof(f.k2, 0, 0), pressure.nb) +=
          avg * (pb.vals * fq.weights.cwiseProduct(jwn));
    }
  }
  return out;
}

FieldVec lift_G(const FieldVec& beta, const DgSpace& velocity) {
  const DgSpace& pre = *beta.space;
  if (pre.mesh != velocity.mesh || !pre.scalar() ||
      velocity.n_components != 2)
    throw std::invalid_argument("lift_G: scalar field and velocity space");
  const TriMesh& mesh = *pre.mesh;
  const QuadRule frule = edge_rule(velocity.degree + pre.degree + 2);
  FieldVec out = zero_field(velocity);

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    if (!f.interior()) continue;
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const SideTab pa = tabulate_side(pre, f.k1, fq, f.normal, false);
    const SideTab pb = tabulate_side(pre, f.k2, fq, f.normal, false);
    const VecX jump = (field_rows(beta, f.k1, 0, pa.vals) -
                       field_rows(beta, f.k2, 0, pb.vals))
                          .transpose();
    const VecX wj = fq.weights.cwiseProduct(jump);

    const int elems[2] = {f.k1, f.k2};
    for (int s = 0; s < 2; ++s) {
      const SideTab vt = tabulate_side(velocity, elems[s], fq, f.normal, false);
      const VecX contrib = 0.5 * (vt.vals * wj);
      for (int c = 0; c < 2; ++c)
        out.coef.segment(velocity.dof(elems[s], c, 0), velocity.nb) +=
            f.normal[c] * contrib;
    }
  }
  return out;
}

namespace {

double broken_gradient_energy(const FieldVec& f) {
  const DgSpace& sp = *f.space;
  const QuadRule vrule = triangle_rule(2 * sp.degree + 2);
  double acc = 0.0;
  for (int e = 0; e < sp.mesh->n_elements(); ++e) {
    auto [gx, gy] = basis_gradients(sp.element_bases[e], sp.mesh->geom[e],
                                    vrule.points);
    const VecX w = sp.mesh->geom[e].det_jac * vrule.weights;
    for (int c = 0; c < sp.n_components; ++c) {
      const Eigen::RowVectorXd fx = field_rows(f, e, c, gx);
      const Eigen::RowVectorXd fy = field_rows(f, e, c, gy);
      acc += ((fx.array().square() + fy.array().square()).matrix()).dot(w);
    }
  }
  return acc;
}

double jump_energy(const FieldVec& f, const FormParams& params,
                   bool interior_only, bool use_sigma_tilde) {
  const DgSpace& sp = *f.space;
  const QuadRule frule = edge_rule(2 * sp.degree + 2);
  double acc = 0.0;
  for (int fid = 0; fid < sp.mesh->n_faces(); ++fid) {
    const Face& face = sp.mesh->faces[fid];
    if (interior_only && !face.interior()) continue;
    const FaceQuad fq = face_quad(*sp.mesh, fid, frule);
    const SideTab a = tabulate_side(sp, face.k1, fq, face.normal, false);
    const double sigma =
        use_sigma_tilde ? params.sigma_tilde : params.sigma(face.interior());
    for (int c = 0; c < sp.n_components; ++c) {
      Eigen::RowVectorXd jump = field_rows(f, face.k1, c, a.vals);
      if (face.interior()) {
        const SideTab b = tabulate_side(sp, face.k2, fq, face.normal, false);
        jump -= field_rows(f, face.k2, c, b.vals);
      }
      acc += (sigma / face.h()) *
             (jump.array().square().matrix()).dot(fq.weights);
    }
  }
  return acc;
}

}  // namespace

double dg_norm(const FieldVec& w, const FormParams& params) {
  return std::sqrt(broken_gradient_energy(w) +
                   jump_energy(w, params, false, false));
}

double dg_seminorm(const FieldVec& g, const FormParams& params) {
  if (!g.space->scalar())
    throw std::invalid_argument("dg_seminorm: scalar fields only");
  return std::sqrt(broken_gradient_energy(g) +
                   jump_energy(g, params, true, true));
}

double b_value_divgrad_form(const FieldVec& w, const FieldVec& g) {
  const DgSpace& vel = *w.space;
  const DgSpace& pre = *g.space;
  if (vel.mesh != pre.mesh || vel.n_components != 2 || !pre.scalar())
    throw std::invalid_argument("b_value_divgrad_form: space mismatch");
  const TriMesh& mesh = *vel.mesh;
  const QuadRule vrule = triangle_rule(vel.degree + pre.degree + 2);
  const QuadRule frule = edge_rule(vel.degree + pre.degree + 2);

  double acc = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const MatX vvals = basis_values(vel.element_bases[e], vrule.points);
    auto [pgx, pgy] = basis_gradients(pre.element_bases[e], mesh.geom[e],
                                      vrule.points);
    const Eigen::RowVectorXd w1 = field_rows(w, e, 0, vvals);
    const Eigen::RowVectorXd w2 = field_rows(w, e, 1, vvals);
    const Eigen::RowVectorXd gx = field_rows(g, e, 0, pgx);
    const Eigen::RowVectorXd gy = field_rows(g, e, 0, pgy);
    const VecX wq = mesh.geom[e].det_jac * vrule.weights;
    acc -= (w1.cwiseProduct(gx) + w2.cwiseProduct(gy)).dot(wq);
  }

  for (int fid = 0; fid < mesh.n_faces(); ++fid) {
    const Face& f = mesh.faces[fid];
    if (!f.interior()) continue;
    const FaceQuad fq = face_quad(mesh, fid, frule);
    const SideTab va = tabulate_side(vel, f.k1, fq, f.normal, false);
    const SideTab vb = tabulate_side(vel, f.k2, fq, f.normal, false);
    const SideTab qa = tabulate_side(pre, f.k1, fq, f.normal, false);
    const SideTab qb = tabulate_side(pre, f.k2, fq, f.normal, false);
    const VecTrace wa = vec_trace(w, f.k1, va.vals);
    const VecTrace wb = vec_trace(w, f.k2, vb.vals);
    const Eigen::RowVectorXd ga = field_rows(g, f.k1, 0, qa.vals);
    const Eigen::RowVectorXd gb = field_rows(g, f.k2, 0, qb.vals);
    for (int q = 0; q < fq.weights.size(); ++q) {
      const double wn = 0.5 * (f.normal.x() * (wa.c1[q] + wb.c1[q]) +
                               f.normal.y() * (wa.c2[q] + wb.c2[q]));
      acc += fq.weights[q] * wn * (ga[q] - gb[q]);
    }
  }
  return acc;
}

void export_matrix_coo(const SpMat& m, std::ostream& out) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace oldg
