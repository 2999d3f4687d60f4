#pragma once

#include "oldg/dg_space.hpp"
#include "oldg/forms.hpp"
#include "oldg/memory_kernel.hpp"
#include "oldg/types.hpp"

namespace oldg {

/// Manufactured exact solution on the unit square: a divergence-free
/// velocity from the stream function a(x) a(y) (t+1) with a(s) = s^3 (s-1)^2
/// (zero trace on the boundary) and the zero-mean pressure
/// sin(pi x) cos(pi y) (t+1). All derivatives are closed-form.
struct ExactSolution {
  Vec2 velocity(const Vec2& x, double t) const;
  Mat2 velocity_gradient(const Vec2& x, double t) const;  // (i,j) = du_i/dx_j
  Vec2 velocity_laplacian(const Vec2& x, double t) const;
  Vec2 velocity_time_derivative(const Vec2& x, double t) const;
  Vec2 convection(const Vec2& x, double t) const;  // (u . grad) u
  double pressure(const Vec2& x, double t) const;
  Vec2 pressure_gradient(const Vec2& x, double t) const;
};

/// Forcing that makes the exact solution solve the model: u_t - mu lap(u)
/// + (u.grad)u - I(t) lap_spatial(u) + grad p, where the memory factor I(t)
/// is the closed-form kernel integral (the solution is separable in time).
Vec2 mms_forcing(const ExactSolution& exact, double mu, const KernelParams& k,
                 const Vec2& x, double t);

struct ErrorNorms {
  double u_l2 = 0.0;
  double u_dg = 0.0;
  double p_l2 = 0.0;
};

/// Errors against the exact solution at time t, by quadrature of exactness
/// 2r + 4. The dG error combines the broken gradient of (u_h - u) with the
/// penalty-weighted jumps of u_h (the exact velocity has no jumps).
ErrorNorms error_norms(const FieldVec& u, const FieldVec& p,
                       const ExactSolution& exact, double t,
                       const FormParams& params);

}  // namespace oldg
