#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "oldg/types.hpp"

namespace oldg {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  bool direct = true;
  int iterations = 0;
  double residual = 0.0;  // ||Ax - b||_2 / max(||b||_2, 1)
  double seconds = 0.0;
};

/// Sparse LU solve of a general square system; throws SolverError on a
/// singular factorization or a residual above tol.
std::pair<VecX, SolveReport> solve_general(const SpMat& a, const VecX& b,
                                           double tol = 1e-10);

/// Solves A x = rhs on the orthogonal complement of constants with the
/// zero-mean constraint m(x) = 0, through the augmented saddle system
/// [[A, m], [m^T, 0]]. A must be symmetric with constants in its null
/// space; rhs must be compatible (|m . rhs| <= 1e-6 ||rhs||).
class ZeroMeanSolver {
 public:
  ZeroMeanSolver(const SpMat& a, const VecX& mean_coefficients);
  std::pair<VecX, SolveReport> solve(const VecX& rhs, double tol = 1e-10) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  VecX m_;
  int n_ = 0;
};

/// Momentum-system solver. Direct: fresh sparse LU per step with the
/// symbolic analysis reused (the sparsity pattern is step-independent).
/// FrozenFactor: the time-constant part is factored once and used as the
/// preconditioner of BiCGSTAB on the full matrix, which converges in a few
/// iterations because the convection perturbation is O(tau). Auto switches
/// to FrozenFactor above 30k dofs.
class MomentumSolver {
 public:
  enum class Strategy { Direct, FrozenFactor, Auto };

  /// constant_part = mass + (tau mu + tau^2 gamma) A_eps; spd indicates the
  /// symmetric case (epsilon = -1), enabling a Cholesky-type factorization.
  MomentumSolver(const SpMat& constant_part, bool spd, Strategy strategy,
                 double tol);

  std::pair<VecX, SolveReport> solve(const SpMat& a, const VecX& b,
                                     const VecX& guess);

  bool frozen() const { return frozen_; }

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  bool frozen_ = false;
  double tol_ = 1e-10;
};

}  // namespace oldg
