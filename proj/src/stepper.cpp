#include "oldg/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace oldg {

double SchemeParams::delta_bound() const {
  constexpr double d = 2.0;
  const double omega = forms.omega();
  const double cap = omega / (8.0 * d);
  if (kernel.gamma == 0.0) return cap;
  return std::min(cap, omega * mu * mu /
                           (16.0 * kernel.gamma * kernel.gamma * d));
}

int SchemeParams::n_steps() const {
  const double ratio = T / tau;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("SchemeParams: T/tau must be a positive integer");
  return n;
}

void SchemeParams::validate() const {
  if (mu <= 0.0) throw std::invalid_argument("SchemeParams: mu must be > 0");
  kernel.validate();
  forms.validate();
  if (tau <= 0.0 || T <= 0.0)
    throw std::invalid_argument("SchemeParams: tau and T must be > 0");
  n_steps();
  const double dval = delta_value();
  if (dval <= 0.0)
    throw std::invalid_argument("SchemeParams: delta must be > 0");
  const double bound = delta_bound();
  if (dval > bound + 1e-14 && !allow_delta_violation) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "SchemeParams: delta=%g violates the admissibility bound "
                  "delta <= min(omega/16, omega*mu^2/(32*gamma^2)) = %g",
                  dval, bound);
    throw std::invalid_argument(msg);
  }
}

Stepper::Stepper(const DgSpace& velocity, const DgSpace& pressure,
                 const SchemeParams& params)
    : vel_(velocity), pre_(pressure), params_(params) {
  params_.validate();
  if (velocity.mesh != pressure.mesh)
    throw std::invalid_argument("Stepper: spaces live on different meshes");
  if (velocity.n_components != 2 || !pressure.scalar())
    throw std::invalid_argument("Stepper: needs vector velocity, scalar pressure");
  if (pressure.degree != velocity.degree - 1)
    throw std::invalid_argument(
        "Stepper: pressure degree must be velocity degree - 1");

  a_eps_ = assemble_diffusion(vel_, params_.forms);
  b_ = assemble_pressure_coupling(vel_, pre_);
  a_sip_ = assemble_pressure_poisson(pre_, params_.forms);

  SpMat identity(vel_.n_dofs_total, vel_.n_dofs_total);
  identity.setIdentity();
  const double tau = params_.tau;
  constant_part_ =
      identity + (tau * params_.mu + tau * tau * params_.kernel.gamma) *
                     a_eps_.matrix;
  constant_part_.makeCompressed();

  zero_mean_ = std::make_unique<ZeroMeanSolver>(a_sip_.matrix,
                                                pre_.one_coefficients);
  momentum_ = std::make_unique<MomentumSolver>(
      constant_part_, params_.forms.epsilon == -1, params_.strategy,
      params_.solver_tol);
  decay_ = std::exp(-params_.kernel.eta * tau);
}

SchemeState Stepper::initialize(const VectorFn& u0) const {
  SchemeState st;
  st.n = 0;
  st.u = l2_project(vel_, u0);
  st.p = zero_field(pre_);
  st.v = zero_field(pre_);
  st.acc = make_accumulator(vel_, params_.tau, params_.kernel);
  return st;
}

FieldVec Stepper::momentum_solve(const SchemeState& state,
                                 const FieldVec& f_proj, SolveReport* report) {
  const double tau = params_.tau;
  const AssembledForm conv = assemble_convection(vel_, state.u);
  SpMat a = constant_part_ + tau * conv.matrix;
  a.makeCompressed();

  VecX rhs = state.u.coef + tau * (b_.matrix.transpose() * state.p.coef) +
             tau * f_proj.coef;
  rhs -= tau * decay_ * (a_eps_.matrix * state.acc.q.coef);

  auto [x, rep] = momentum_->solve(a, rhs, state.u.coef);
  if (report) *report = rep;
  return {&vel_, std::move(x)};
}

FieldVec Stepper::projection_solve(const FieldVec& u_tilde,
                                   SolveReport* report) const {
  const VecX rhs = -(1.0 / params_.tau) * (b_.matrix * u_tilde.coef);
  auto [x, rep] = zero_mean_->solve(rhs, params_.solver_tol);
  if (report) *report = rep;
  return {&pre_, std::move(x)};
}

FieldVec Stepper::pressure_update(const SchemeState& state,
                                  const FieldVec& u_tilde,
                                  const FieldVec& v) const {
  // Requires the accumulator to already hold step n, so that state.acc.q is
  // the complete memory sum including the intermediate velocity u_tilde.
  const double delta = params_.delta_value();
  VecX coef = state.p.coef + v.coef;
  coef -= delta * params_.mu * (b_.matrix * u_tilde.coef);
  coef -= delta * (b_.matrix * state.acc.q.coef);
  return {&pre_, std::move(coef)};
}

FieldVec Stepper::velocity_correct(const FieldVec& u_tilde,
                                   const FieldVec& v) const {
  return {&vel_,
          u_tilde.coef + params_.tau * (b_.matrix.transpose() * v.coef)};
}

void Stepper::step(SchemeState& state, const TimeVectorFn& f,
                   StepDiagnostics* diag) {
  const double t_next = (state.n + 1) * params_.tau;
  const FieldVec f_proj =
      l2_project(vel_, [&](const Vec2& x) { return f(x, t_next); });

  StepDiagnostics local;
  FieldVec u_tilde = momentum_solve(state, f_proj, &local.momentum);
  push(state.acc, u_tilde);
  const FieldVec v = projection_solve(u_tilde, &local.projection);
  FieldVec p_new = pressure_update(state, u_tilde, v);
  FieldVec u_new = velocity_correct(u_tilde, v);

  state.n += 1;
  state.u = std::move(u_new);
  state.p = std::move(p_new);
  state.v = v;

  if (diag) {
    local.step = state.n;
    local.time = t_next;
    local.u_l2 = state.u.coef.norm();  // orthonormal basis: L2 norm
    local.u_tilde_dg = dg_norm(u_tilde, params_.forms);
    local.p_mean = mean_value(state.p);
    *diag = local;
  }
}

SchemeState Stepper::run(const VectorFn& u0, const TimeVectorFn& f,
                         std::ostream* diagnostics_csv,
                         std::vector<StepDiagnostics>* history) {
  SchemeState state = initialize(u0);
  const int n = params_.n_steps();
  if (diagnostics_csv) write_diagnostics_header(*diagnostics_csv);
  for (int k = 0; k < n; ++k) {
    StepDiagnostics diag;
    try {
      step(state, f, &diag);
    } catch (SolverError& err) {
      throw SolverError("step " + std::to_string(k + 1) + ": " + err.what());
    }
    if (diagnostics_csv) write_diagnostics_row(*diagnostics_csv, diag);
    if (history) history->push_back(diag);
  }
  return state;
}

void write_diagnostics_header(std::ostream& out) {
  out << "step,time,u_l2,u_tilde_dg,p_mean,mom_residual,mom_iterations\n";
}

void write_diagnostics_row(std::ostream& out, const StepDiagnostics& d) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.12g,%.16e,%.16e,%.3e,%.3e,%d\n", d.step,
                d.time, d.u_l2, d.u_tilde_dg, d.p_mean, d.momentum.residual,
                d.momentum.iterations);
  out << buf;
}

}  // namespace oldg
