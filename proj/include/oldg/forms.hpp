#pragma once

#include <iosfwd>
#include <string>

#include "oldg/dg_space.hpp"
#include "oldg/types.hpp"

namespace oldg {

/// Penalty and symmetry parameters of the interior-penalty forms.
/// epsilon = -1 gives the symmetric (SIPG) diffusion form; omega is its
/// coercivity constant (1 for epsilon = 1, 1/2 otherwise).
struct FormParams {
  double sigma_int = 6.0;
  double sigma_bnd = 12.0;
  double sigma_tilde = 10.0;
  int epsilon = -1;

  double omega() const { return epsilon == 1 ? 1.0 : 0.5; }
  double sigma(bool interior_face) const {
    return interior_face ? sigma_int : sigma_bnd;
  }
  void validate() const;  // throws std::invalid_argument
};

/// Defaults used in the experiments: sigma 6/12 for degree 1, 8/16 for
/// degree 2, extended as 2(r+2) interior and double that on the boundary.
FormParams default_form_params(int velocity_degree);

struct AssembledForm {
  SpMat matrix;
  std::string name;
};

/// Interior-penalty discretization of the vector Laplacian on the velocity
/// space, with jump/average conventions extended to boundary faces.
/// Entries are form(trial_j, test_i) at (i, j).
AssembledForm assemble_diffusion(const DgSpace& velocity,
                                 const FormParams& params);

/// Velocity-pressure coupling b(w, g): rows are pressure dofs, columns are
/// velocity dofs, B(i, j) = b(phi_j, psi_i).
AssembledForm assemble_pressure_coupling(const DgSpace& velocity,
                                         const DgSpace& pressure);

/// Interior-penalty form on the pressure space (interior faces only);
/// symmetric, with constants in its null space.
AssembledForm assemble_pressure_poisson(const DgSpace& pressure,
                                        const FormParams& params);

/// Convection matrix for the transport field z: entries A_c(z; z, phi_j, phi_i)
/// with pointwise upwind classification on faces.
AssembledForm assemble_convection(const DgSpace& velocity, const FieldVec& z);

/// Full quadruple-argument convection form A_c(theta; z, phi, w).
double apply_convection(const FieldVec& theta, const FieldVec& z,
                        const FieldVec& phi, const FieldVec& w);

/// Centered part C(z, phi, w): volume transport + Temam term + face-jump term.
double convection_centered_part(const FieldVec& z, const FieldVec& phi,
                                const FieldVec& w);

/// Signed upwind part U(theta; z, phi, w) over inflow boundaries.
double convection_upwind_part(const FieldVec& theta, const FieldVec& z,
                              const FieldVec& phi, const FieldVec& w);

/// R_h([w]) in the pressure space: (R_h([w]), g) = sum_F int_F {g} [w].n_F.
FieldVec lift_R(const FieldVec& w, const DgSpace& pressure);

/// G_h([beta]) in the velocity space over interior faces only.
FieldVec lift_G(const FieldVec& beta, const DgSpace& velocity);

/// Broken-gradient energy plus penalty-weighted jumps (all faces).
double dg_norm(const FieldVec& w, const FormParams& params);

/// Scalar energy semi-norm: broken gradient plus interior jumps only.
double dg_seminorm(const FieldVec& g, const FormParams& params);

/// b(w, g) evaluated through the grad-and-average route
/// -(w, grad_h g) + sum of interior-face terms {w}.n_F [g].
double b_value_divgrad_form(const FieldVec& w, const FieldVec& g);

/// Coordinate text format: one "row col value" line per stored entry.
void export_matrix_coo(const SpMat& m, std::ostream& out);

}  // namespace oldg
