#include "oldg/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace oldg {

namespace {

double relative_residual(const SpMat& a, const VecX& x, const VecX& b) {
  return (a * x - b).norm() / std::max(b.norm(), 1.0);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::pair<VecX, SolveReport> solve_general(const SpMat& a, const VecX& b,
                                           double tol) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve_general: dimension mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw SolverError("solve_general: factorization failed (" +
                      lu.lastErrorMessage() + ")");
  VecX x = lu.solve(b);
  SolveReport rep;
  rep.direct = true;
  rep.residual = relative_residual(a, x, b);
  rep.seconds = seconds_since(t0);
  if (!std::isfinite(rep.residual) || rep.residual > tol)
    throw SolverError("solve_general: residual " + std::to_string(rep.residual) +
                      " above tolerance (near-singular system?)");
  return {std::move(x), rep};
}

struct ZeroMeanSolver::Impl {
  Eigen::SparseLU<SpMat> lu;
  SpMat aug;
};

ZeroMeanSolver::ZeroMeanSolver(const SpMat& a, const VecX& mean_coefficients)
    : m_(mean_coefficients), n_(static_cast<int>(a.rows())) {
  if (a.rows() != a.cols() || a.rows() != m_.size())
    throw std::invalid_argument("ZeroMeanSolver: dimension mismatch");
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(a.nonZeros()) + 2 * n_);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  for (int i = 0; i < n_; ++i) {
    trips.emplace_back(i, n_, m_[i]);
    trips.emplace_back(n_, i, m_[i]);
  }
  auto impl = std::make_shared<Impl>();
  impl->aug.resize(n_ + 1, n_ + 1);
  impl->aug.setFromTriplets(trips.begin(), trips.end());
  impl->aug.makeCompressed();
  impl->lu.compute(impl->aug);
  if (impl->lu.info() != Eigen::Success)
    throw SolverError("ZeroMeanSolver: factorization of the augmented system "
                      "failed (" + impl->lu.lastErrorMessage() + ")");
  impl_ = std::move(impl);
}

std::pair<VecX, SolveReport> ZeroMeanSolver::solve(const VecX& rhs,
                                                   double tol) const {
  if (rhs.size() != n_)
    throw std::invalid_argument("ZeroMeanSolver::solve: rhs size");
  const double constant_part = std::abs(m_.dot(rhs));
  if (constant_part > 1e-6 * rhs.norm())
    throw SolverError(
        "ZeroMeanSolver: incompatible rhs, projection onto constants " +
        std::to_string(constant_part) + " exceeds 1e-6 * ||rhs||");

  const auto t0 = std::chrono::steady_clock::now();
  VecX aug_rhs(n_ + 1);
  aug_rhs.head(n_) = rhs;
  aug_rhs[n_] = 0.0;
  const VecX sol = impl_->lu.solve(aug_rhs);
  VecX x = sol.head(n_);

  SolveReport rep;
  rep.direct = true;
  rep.residual = (impl_->aug * sol - aug_rhs).norm() /
                 std::max(aug_rhs.norm(), 1.0);
  rep.seconds = seconds_since(t0);
  if (!std::isfinite(rep.residual) || rep.residual > tol)
    throw SolverError("ZeroMeanSolver: residual " +
                      std::to_string(rep.residual) + " above tolerance");
  if (std::abs(m_.dot(x)) > 1e-10)
    throw SolverError("ZeroMeanSolver: mean constraint violated");
  return {std::move(x), rep};
}

namespace {

// Applies a prefactored operator inside Eigen's iterative solvers.
struct FrozenPreconditioner {
  std::function<VecX(const VecX&)> apply;

  FrozenPreconditioner() = default;
  template <class M>
  explicit FrozenPreconditioner(const M&) {}
  template <class M>
  FrozenPreconditioner& analyzePattern(const M&) { return *this; }
  template <class M>
  FrozenPreconditioner& factorize(const M&) { return *this; }
  template <class M>
  FrozenPreconditioner& compute(const M&) { return *this; }
  template <class Rhs>
  VecX solve(const Rhs& b) const { return apply(b); }
  Eigen::ComputationInfo info() const { return Eigen::Success; }
};

}  // namespace

struct MomentumSolver::Impl {
  std::optional<Eigen::SimplicialLDLT<SpMat>> ldlt;
  std::optional<Eigen::SparseLU<SpMat>> lu;
  Eigen::BiCGSTAB<SpMat, FrozenPreconditioner> bicg;
  Eigen::SparseLU<SpMat> direct;
  bool direct_analyzed = false;
};

MomentumSolver::MomentumSolver(const SpMat& constant_part, bool spd,
                               Strategy strategy, double tol)
    : impl_(std::make_shared<Impl>()), tol_(tol) {
  if (strategy == Strategy::Auto)
    strategy = constant_part.rows() > 30000 ? Strategy::FrozenFactor
                                            : Strategy::Direct;
  frozen_ = strategy == Strategy::FrozenFactor;
  if (!frozen_) return;

  if (spd) {
    impl_->ldlt.emplace();
    impl_->ldlt->compute(constant_part);
    if (impl_->ldlt->info() != Eigen::Success)
      throw SolverError("MomentumSolver: LDLT of the constant part failed");
    auto* f = &*impl_->ldlt;
    impl_->bicg.preconditioner().apply = [f](const VecX& b) {
      return VecX(f->solve(b));
    };
  } else {
    impl_->lu.emplace();
    impl_->lu->compute(constant_part);
    if (impl_->lu->info() != Eigen::Success)
      throw SolverError("MomentumSolver: LU of the constant part failed");
    auto* f = &*impl_->lu;
    impl_->bicg.preconditioner().apply = [f](const VecX& b) {
      return VecX(f->solve(b));
    };
  }
  impl_->bicg.setMaxIterations(500);
}

std::pair<VecX, SolveReport> MomentumSolver::solve(const SpMat& a,
                                                   const VecX& b,
                                                   const VecX& guess) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  VecX x;
  if (!frozen_) {
    if (!impl_->direct_analyzed) {
      impl_->direct.analyzePattern(a);
      impl_->direct_analyzed = true;
    }
    impl_->direct.factorize(a);
    if (impl_->direct.info() != Eigen::Success)
      throw SolverError("MomentumSolver: factorization failed (" +
                        impl_->direct.lastErrorMessage() + ")");
    x = impl_->direct.solve(b);
    rep.direct = true;
  } else {
    impl_->bicg.setTolerance(std::min(tol_ * 1e-2, 1e-12));
    impl_->bicg.compute(a);
    x = impl_->bicg.solveWithGuess(b, guess);
    rep.direct = false;
    rep.iterations = static_cast<int>(impl_->bicg.iterations());
    if (impl_->bicg.info() != Eigen::Success &&
        relative_residual(a, x, b) > tol_)
      throw SolverError("MomentumSolver: BiCGSTAB did not converge within " +
                        std::to_string(impl_->bicg.maxIterations()) +
                        " iterations");
  }
  rep.residual = relative_residual(a, x, b);
  rep.seconds = seconds_since(t0);
  if (!std::isfinite(rep.residual) || rep.residual > tol_)
    throw SolverError("MomentumSolver: residual " +
                      std::to_string(rep.residual) + " above tolerance");
  return {std::move(x), rep};
}

}  // namespace oldg
