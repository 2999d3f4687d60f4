#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "oldg/dg_space.hpp"
#include "oldg/forms.hpp"
#include "oldg/linear_solver.hpp"
#include "oldg/memory_kernel.hpp"
#include "oldg/types.hpp"

namespace oldg {

using TimeVectorFn = std::function<Vec2(const Vec2&, double)>;

/// All physical and discretization parameters of one run. delta defaults
/// to the admissibility bound min(omega/(8d), omega mu^2 / (16 gamma^2 d))
/// with d = 2; construction rejects larger values unless overridden.
struct SchemeParams {
  double mu = 1.0;
  KernelParams kernel{0.1, 0.1};
  double delta = -1.0;  // negative: use delta_bound()
  double tau = 0.0;
  double T = 0.0;
  FormParams forms;
  double solver_tol = 1e-10;
  bool allow_delta_violation = false;
  MomentumSolver::Strategy strategy = MomentumSolver::Strategy::Auto;

  double delta_bound() const;
  double delta_value() const { return delta < 0.0 ? delta_bound() : delta; }
  int n_steps() const;
  void validate() const;
};

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double u_l2 = 0.0;
  double u_tilde_dg = 0.0;
  double p_mean = 0.0;
  SolveReport momentum;
  SolveReport projection;
};

struct SchemeState {
  int n = 0;
  FieldVec u;  // corrected velocity u^n
  FieldVec p;  // pressure p^n (zero mean)
  FieldVec v;  // last potential v^n
  MemoryAccumulator acc;  // history of intermediate velocities
};

/// One full pressure-correction step: momentum solve for the intermediate
/// velocity, accumulator push, potential solve, pressure update, velocity
/// correction. Operators that do not change between steps are assembled
/// and factored once at construction.
class Stepper {
 public:
  Stepper(const DgSpace& velocity, const DgSpace& pressure,
          const SchemeParams& params);

  SchemeState initialize(const VectorFn& u0) const;

  /// Advances state from step n to n + 1 with forcing f evaluated at t_{n+1}.
  void step(SchemeState& state, const TimeVectorFn& f,
            StepDiagnostics* diag = nullptr);

  /// Runs N = T/tau steps; optional CSV stream receives one diagnostics row
  /// per step (step,time,u_l2,u_tilde_dg,p_mean,mom_residual,mom_iterations).
  SchemeState run(const VectorFn& u0, const TimeVectorFn& f,
                  std::ostream* diagnostics_csv = nullptr,
                  std::vector<StepDiagnostics>* history = nullptr);

  // Individual stages, exposed for verification.
  FieldVec momentum_solve(const SchemeState& state, const FieldVec& f_proj,
                          SolveReport* report = nullptr);
  FieldVec projection_solve(const FieldVec& u_tilde,
                            SolveReport* report = nullptr) const;
  FieldVec pressure_update(const SchemeState& state, const FieldVec& u_tilde,
                           const FieldVec& v) const;
  FieldVec velocity_correct(const FieldVec& u_tilde, const FieldVec& v) const;

  const SpMat& a_eps() const { return a_eps_.matrix; }
  const SpMat& coupling() const { return b_.matrix; }
  const SpMat& a_sip() const { return a_sip_.matrix; }
  const SchemeParams& params() const { return params_; }
  const DgSpace& velocity_space() const { return vel_; }
  const DgSpace& pressure_space() const { return pre_; }

 private:
  const DgSpace& vel_;
  const DgSpace& pre_;
  SchemeParams params_;
  AssembledForm a_eps_;
  AssembledForm b_;
  AssembledForm a_sip_;
  SpMat constant_part_;  // I + (tau mu + tau^2 gamma) A_eps
  std::unique_ptr<ZeroMeanSolver> zero_mean_;
  std::unique_ptr<MomentumSolver> momentum_;
  double decay_ = 1.0;  // exp(-eta tau)
};

void write_diagnostics_header(std::ostream& out);
void write_diagnostics_row(std::ostream& out, const StepDiagnostics& d);

}  // namespace oldg
