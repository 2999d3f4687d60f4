#pragma once

#include "oldg/dg_space.hpp"
#include "oldg/types.hpp"

namespace oldg {

/// Exponential memory kernel beta(t) = gamma * exp(-eta * t).
struct KernelParams {
  double gamma = 0.1;
  double eta = 0.1;
  void validate() const;  // gamma, eta > 0 (gamma == 0 switches memory off)
};

double beta(const KernelParams& k, double t);  // throws for t < 0

/// Closed form of int_0^t beta(t - s) (s + 1) ds, used by the manufactured
/// forcing where the solution is separable with time factor (t + 1).
double kernel_poly1_integral(const KernelParams& k, double t);

/// Right-rectangle-rule accumulator q^n = tau * sum_{j<=n} beta(t_n - t_j) u^j,
/// updated in O(1) per step through the kernel's semigroup property.
struct MemoryAccumulator {
  FieldVec q;
  int n = 0;
  double tau = 0.0;
  KernelParams kernel;
};

MemoryAccumulator make_accumulator(const DgSpace& velocity, double tau,
                                   const KernelParams& kernel);

/// Appends step n = acc.n + 1: q <- exp(-eta tau) q + tau beta(0) u_new.
void push(MemoryAccumulator& acc, const FieldVec& u_new);

/// Splitting of tau * A_eps(q^n, .) when the step-n field is still unknown:
/// a matrix shift tau^2 beta(0) on A_eps plus the known history moved to the
/// right-hand side.
struct HistorySplit {
  VecX rhs;                  // tau * A_eps * (exp(-eta tau) q^{n-1})
  double matrix_coefficient; // tau^2 * beta(0)
};

HistorySplit history_rhs_and_matrix_shift(const MemoryAccumulator& acc,
                                          const SpMat& a_eps, double tau);

}  // namespace oldg
