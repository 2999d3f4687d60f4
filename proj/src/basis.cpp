#include "oldg/basis.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

#include "oldg/quadrature.hpp"

namespace oldg {

namespace {

inline double powi(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

PolyBasis make_poly_basis(int degree) {
  if (degree < 0) throw std::invalid_argument("make_poly_basis: degree < 0");
  PolyBasis b;
  b.degree = degree;
  b.n_funcs = (degree + 1) * (degree + 2) / 2;
  b.powers.reserve(b.n_funcs);
  for (int total = 0; total <= degree; ++total)
    for (int a = total; a >= 0; --a) b.powers.push_back({a, total - a});
  return b;
}

MatX PolyBasis::eval(const MatX& ref_points) const {
  const int nq = static_cast<int>(ref_points.rows());
  MatX vals(n_funcs, nq);
  for (int q = 0; q < nq; ++q) {
    const double x = ref_points(q, 0), y = ref_points(q, 1);
    for (int i = 0; i < n_funcs; ++i)
      vals(i, q) = powi(x, powers[i][0]) * powi(y, powers[i][1]);
  }
  return vals;
}

std::pair<MatX, MatX> PolyBasis::eval_grad(const MatX& ref_points) const {
  const int nq = static_cast<int>(ref_points.rows());
  MatX gx(n_funcs, nq), gy(n_funcs, nq);
  for (int q = 0; q < nq; ++q) {
    const double x = ref_points(q, 0), y = ref_points(q, 1);
    for (int i = 0; i < n_funcs; ++i) {
      const int a = powers[i][0], b = powers[i][1];
      gx(i, q) = (a == 0) ? 0.0 : a * powi(x, a - 1) * powi(y, b);
      gy(i, q) = (b == 0) ? 0.0 : b * powi(x, a) * powi(y, b - 1);
    }
  }
  return {std::move(gx), std::move(gy)};
}

ElementBasis orthonormalize_on_element(const PolyBasis& basis,
                                       const ElementGeometry& geom) {
  if (geom.area < 1e-14)
    throw std::invalid_argument(
        "orthonormalize_on_element: near-degenerate element");

  const QuadRule rule = triangle_rule(2 * basis.degree);
  const MatX m = basis.eval(rule.points);
  const MatX mw = m * rule.weights.asDiagonal();
  MatX gram = geom.det_jac * (mw * m.transpose());
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::LLT<MatX> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "orthonormalize_on_element: Gram matrix not positive definite");

  ElementBasis eb;
  eb.seed = &basis;
  eb.transform =
      llt.matrixL().solve(MatX::Identity(basis.n_funcs, basis.n_funcs));
  return eb;
}

MatX basis_values(const ElementBasis& eb, const MatX& ref_points) {
  return eb.transform * eb.seed->eval(ref_points);
}

std::pair<MatX, MatX> basis_gradients(const ElementBasis& eb,
                                      const ElementGeometry& geom,
                                      const MatX& ref_points) {
  auto [grx, gry] = eb.seed->eval_grad(ref_points);
  // physical grad = J^{-T} * reference grad
  const Mat2& ji = geom.jac_inv;
  MatX gx = eb.transform * (ji(0, 0) * grx + ji(1, 0) * gry);
  MatX gy = eb.transform * (ji(0, 1) * grx + ji(1, 1) * gry);
  return {std::move(gx), std::move(gy)};
}

}  // namespace oldg
