#include "oldg/memory_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace oldg {

void KernelParams::validate() const {
  if (gamma < 0.0 || eta <= 0.0)
    throw std::invalid_argument("KernelParams: need gamma >= 0 and eta > 0");
}

double beta(const KernelParams& k, double t) {
  if (t < 0.0) throw std::invalid_argument("beta: t must be >= 0");
  return k.gamma * std::exp(-k.eta * t);
}

double kernel_poly1_integral(const KernelParams& k, double t) {
  if (t < 0.0)
    throw std::invalid_argument("kernel_poly1_integral: t must be >= 0");
  const double e = std::exp(-k.eta * t);
  return k.gamma * ((t + 1.0) / k.eta - e / k.eta - (1.0 - e) / (k.eta * k.eta));
}

MemoryAccumulator make_accumulator(const DgSpace& velocity, double tau,
                                   const KernelParams& kernel) {
  kernel.validate();
  if (tau <= 0.0) throw std::invalid_argument("make_accumulator: tau > 0");
  MemoryAccumulator acc;
  acc.q = zero_field(velocity);
  acc.tau = tau;
  acc.kernel = kernel;
  return acc;
}

void push(MemoryAccumulator& acc, const FieldVec& u_new) {
  if (u_new.space != acc.q.space)
    throw std::invalid_argument("push: field not on the accumulator space");
  const double decay = std::exp(-acc.kernel.eta * acc.tau);
  acc.q.coef = decay * acc.q.coef + acc.tau * acc.kernel.gamma * u_new.coef;
  acc.n += 1;
}

HistorySplit history_rhs_and_matrix_shift(const MemoryAccumulator& acc,
                                          const SpMat& a_eps, double tau) {
  const double decay = std::exp(-acc.kernel.eta * tau);
  HistorySplit split;
  split.rhs = tau * decay * (a_eps * acc.q.coef);
  split.matrix_coefficient = tau * tau * acc.kernel.gamma;
  return split;
}

}  // namespace oldg
