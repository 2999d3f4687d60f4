#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oldg/basis.hpp"
#include "oldg/mesh.hpp"
#include "oldg/quadrature.hpp"
#include "oracles.hpp"

using namespace oldg;

namespace {

double integrate_tri(const QuadRule& rule, int a, int b) {
  double acc = 0.0;
  for (int q = 0; q < rule.n_points(); ++q)
    acc += rule.weights[q] * std::pow(rule.points(q, 0), a) *
           std::pow(rule.points(q, 1), b);
  return acc;
}

}  // namespace

TEST_CASE("triangle rules: weight sums, centroid rule, monomial exactness") {
  const QuadRule centroid = triangle_rule(1);
  CHECK(centroid.n_points() == 1);
  CHECK(centroid.weights[0] == doctest::Approx(0.5));
  CHECK(centroid.points(0, 0) == doctest::Approx(1.0 / 3.0));

  for (int d = 0; d <= 10; ++d) {
    const QuadRule rule = triangle_rule(d);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(std::abs(rule.weights.sum() - 0.5) <= 1e-14);
    CHECK(rule.exactness >= d);
    for (int a = 0; a + 0 <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const double exact = oracles::ref_triangle_monomial(a, b);
        CHECK(std::abs(integrate_tri(rule, a, b) - exact) <= 1e-12 * std::abs(exact) + 1e-15);
      }
  }

  // closed forms computed by hand
  CHECK(integrate_tri(triangle_rule(2), 1, 1) == doctest::Approx(1.0 / 24).epsilon(1e-12));
  CHECK(integrate_tri(triangle_rule(4), 2, 2) == doctest::Approx(1.0 / 180).epsilon(1e-12));

  CHECK_THROWS(triangle_rule(-1));
  CHECK_THROWS(triangle_rule(99));
}

TEST_CASE("edge rules: midpoint, closed-form moments") {
  const QuadRule mid = edge_rule(1);
  CHECK(mid.n_points() == 1);
  CHECK(mid.points(0, 0) == doctest::Approx(0.5));
  CHECK(mid.weights[0] == doctest::Approx(1.0));

  for (int d = 0; d <= 12; ++d) {
    const QuadRule rule = edge_rule(d);
    CHECK(rule.weights.minCoeff() > 0.0);
    CHECK(std::abs(rule.weights.sum() - 1.0) <= 1e-14);
    for (int k = 0; k <= d; ++k) {
      double acc = 0.0;
      for (int q = 0; q < rule.n_points(); ++q)
        acc += rule.weights[q] * std::pow(rule.points(q, 0), k);
      CHECK(std::abs(acc - 1.0 / (k + 1)) <= 1e-13);
    }
  }

  // s^3 and s^5 moments
  {
    const QuadRule r3 = edge_rule(3);
    double acc = 0.0;
    for (int q = 0; q < r3.n_points(); ++q)
      acc += r3.weights[q] * std::pow(r3.points(q, 0), 3);
    CHECK(acc == doctest::Approx(0.25).epsilon(1e-13));
    const QuadRule r5 = edge_rule(5);
    acc = 0.0;
    for (int q = 0; q < r5.n_points(); ++q)
      acc += r5.weights[q] * std::pow(r5.points(q, 0), 5);
    CHECK(acc == doctest::Approx(1.0 / 6).epsilon(1e-13));
  }
  CHECK_THROWS(edge_rule(99));
}

TEST_CASE("monomial basis spans P_r") {
  for (int r : {0, 1, 2, 3}) {
    const PolyBasis basis = make_poly_basis(r);
    CHECK(basis.n_funcs == (r + 1) * (r + 2) / 2);
    // every monomial of total degree <= r appears exactly once
    for (int a = 0; a <= r; ++a)
      for (int b = 0; a + b <= r; ++b) {
        int found = 0;
        for (const auto& p : basis.powers)
          if (p[0] == a && p[1] == b) ++found;
        CHECK(found == 1);
      }
  }
}

TEST_CASE("basis gradients match central finite differences") {
  const PolyBasis basis = make_poly_basis(3);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(0.05, 0.4);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const double x = dist(rng), y = dist(rng);
    MatX pts(5, 2);
    pts << x, y, x + h, y, x - h, y, x, y + h, x, y - h;
    const MatX v = basis.eval(pts);
    auto [gx, gy] = basis.eval_grad(pts);
    for (int i = 0; i < basis.n_funcs; ++i) {
      CHECK(std::abs((v(i, 1) - v(i, 2)) / (2 * h) - gx(i, 0)) <= 1e-6);
      CHECK(std::abs((v(i, 3) - v(i, 4)) / (2 * h) - gy(i, 0)) <= 1e-6);
    }
  }
}

TEST_CASE("orthonormalization on physical elements") {
  const TriMesh mesh = build_uniform_mesh(3);

  for (int r : {0, 1, 2}) {
    const PolyBasis seed = make_poly_basis(r);
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const ElementBasis eb = orthonormalize_on_element(seed, mesh.geom[e]);

      // Gram matrix = identity, checked with an exactness-2r rule
      const QuadRule rule = triangle_rule(2 * r);
      const MatX vals = basis_values(eb, rule.points);
      const MatX gram = mesh.geom[e].det_jac *
                        (vals * rule.weights.asDiagonal() * vals.transpose());
      CHECK((gram - MatX::Identity(seed.n_funcs, seed.n_funcs))
                .cwiseAbs()
                .maxCoeff() <= 1e-10);
    }
  }

  // degree 0: single function of constant value 1/sqrt(area)
  const PolyBasis p0 = make_poly_basis(0);
  const ElementBasis eb0 = orthonormalize_on_element(p0, mesh.geom[0]);
  MatX pt(1, 2);
  pt << 0.3, 0.3;
  CHECK(basis_values(eb0, pt)(0, 0) ==
        doctest::Approx(1.0 / std::sqrt(mesh.geom[0].area)).epsilon(1e-12));

  // near-degenerate element rejected
  ElementGeometry bad = mesh.geom[0];
  bad.area = 1e-15;
  CHECK_THROWS(orthonormalize_on_element(p0, bad));
}

TEST_CASE("degree-r polynomial reproduced through the orthonormal basis") {
  const TriMesh mesh = build_uniform_mesh(2);
  const PolyBasis seed = make_poly_basis(2);
  auto f = [](const Vec2& x) {
    return 1.0 + 2.0 * x.x() - x.y() + 0.5 * x.x() * x.y() + x.y() * x.y();
  };

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementBasis eb = orthonormalize_on_element(seed, mesh.geom[e]);
    const QuadRule rule = triangle_rule(2 * 2);
    const MatX vals = basis_values(eb, rule.points);
    VecX coef = VecX::Zero(seed.n_funcs);
    for (int q = 0; q < rule.n_points(); ++q) {
      const Vec2 x = mesh.geom[e].to_physical(rule.points.row(q).transpose());
      coef += mesh.geom[e].det_jac * rule.weights[q] * f(x) * vals.col(q);
    }
    // evaluate the projection at random interior points
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.05, 0.4);
    for (int t = 0; t < 5; ++t) {
      MatX p(1, 2);
      p << dist(rng), dist(rng);
      const double val = basis_values(eb, p).col(0).dot(coef);
      const Vec2 x = mesh.geom[e].to_physical(p.row(0).transpose());
      CHECK(std::abs(val - f(x)) <= 1e-10);
    }
  }
}

TEST_CASE("affine mapping: integral of |grad(x+y)|^2 over each element") {
  const TriMesh mesh = build_uniform_mesh(3);
  const PolyBasis seed = make_poly_basis(1);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementBasis eb = orthonormalize_on_element(seed, mesh.geom[e]);
    const QuadRule rule = triangle_rule(2);
    // coefficients of x + y in the orthonormal basis
    const MatX vals = basis_values(eb, rule.points);
    VecX coef = VecX::Zero(seed.n_funcs);
    for (int q = 0; q < rule.n_points(); ++q) {
      const Vec2 x = mesh.geom[e].to_physical(rule.points.row(q).transpose());
      coef += mesh.geom[e].det_jac * rule.weights[q] * (x.x() + x.y()) *
              vals.col(q);
    }
    auto [gx, gy] = basis_gradients(eb, mesh.geom[e], rule.points);
    double energy = 0.0;
    for (int q = 0; q < rule.n_points(); ++q) {
      const double dx = coef.dot(gx.col(q));
      const double dy = coef.dot(gy.col(q));
      energy += mesh.geom[e].det_jac * rule.weights[q] * (dx * dx + dy * dy);
    }
    CHECK(energy == doctest::Approx(2.0 * mesh.geom[e].area).epsilon(1e-10));
  }
}
