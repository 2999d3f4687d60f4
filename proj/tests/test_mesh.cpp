#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oldg/mesh.hpp"

using namespace oldg;

TEST_CASE("smallest mesh: counts by hand") {
  const TriMesh mesh = build_uniform_mesh(1);
  CHECK(mesh.n_elements() == 2);
  CHECK(mesh.n_faces() == 5);
  int boundary = 0, interior = 0;
  for (const auto& f : mesh.faces) (f.interior() ? interior : boundary)++;
  CHECK(boundary == 4);
  CHECK(interior == 1);
  double area = 0.0;
  for (const auto& g : mesh.geom) area += g.area;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2x2 criss-cross counts") {
  const TriMesh mesh = build_uniform_mesh(2);
  CHECK(mesh.n_elements() == 8);
  CHECK(mesh.n_faces() == 16);
  int boundary = 0, interior = 0;
  for (const auto& f : mesh.faces) (f.interior() ? interior : boundary)++;
  CHECK(boundary == 8);
  CHECK(interior == 8);
}

TEST_CASE("n=4 face measures: axis-aligned 0.25, diagonal 0.25*sqrt(2)") {
  const TriMesh mesh = build_uniform_mesh(4);
  for (const auto& f : mesh.faces) {
    const Vec2 d =
        mesh.vertices[f.vertex_ids[1]] - mesh.vertices[f.vertex_ids[0]];
    const bool axis = d.x() == 0.0 || d.y() == 0.0;
    const double expected = axis ? 0.25 : 0.25 * std::sqrt(2.0);
    CHECK(f.measure == doctest::Approx(expected).epsilon(1e-14));
    CHECK(f.h() == doctest::Approx(f.measure));  // h_F = |F| in 2d
  }
  CHECK(mesh.h_max == doctest::Approx(std::sqrt(2.0) / 4));
}

TEST_CASE("mesh structural invariants") {
  for (int n : {1, 2, 3, 5}) {
    const TriMesh mesh = build_uniform_mesh(n);

    for (const auto& g : mesh.geom) CHECK(g.det_jac > 0.0);

    double area = 0.0;
    for (const auto& g : mesh.geom) area += g.area;
    CHECK(std::abs(area - 1.0) <= 1e-12);

    double perimeter = 0.0;
    for (const auto& f : mesh.faces) {
      CHECK(std::abs(f.normal.norm() - 1.0) <= 1e-14);
      if (!f.interior()) perimeter += f.measure;
      // each interior face has exactly two adjacent elements
      if (f.interior())
        CHECK(f.k2 > f.k1);
      else
        CHECK(f.k2 == -1);
    }
    CHECK(std::abs(perimeter - 4.0) <= 1e-12);

    // local edge copies reference the same face, and normals are oriented
    // away from k1
    for (int e = 0; e < mesh.n_elements(); ++e) {
      Vec2 weighted_sum = Vec2::Zero();
      for (int k = 0; k < 3; ++k) {
        const int fid = mesh.element_faces[e][k];
        REQUIRE(fid >= 0);
        const Face& f = mesh.faces[fid];
        CHECK((f.k1 == e || f.k2 == e));
        const int a = mesh.elements[e][k], b = mesh.elements[e][(k + 1) % 3];
        const std::set<int> local{a, b};
        const std::set<int> stored{f.vertex_ids[0], f.vertex_ids[1]};
        CHECK(local == stored);
        const double sign = (f.k1 == e) ? 1.0 : -1.0;
        weighted_sum += sign * f.measure * f.normal;
      }
      // divergence theorem on constants
      CHECK(weighted_sum.norm() <= 1e-12);
    }
  }
}

TEST_CASE("face_trace_pair conventions") {
  const TriMesh mesh = build_uniform_mesh(1);
  int interior_id = -1;
  for (int i = 0; i < mesh.n_faces(); ++i)
    if (mesh.faces[i].interior()) interior_id = i;
  REQUIRE(interior_id >= 0);

  const TracePair tp = face_trace_pair(mesh, interior_id);
  CHECK(tp.k1 == 0);
  CHECK(tp.k2 == 1);

  for (int i = 0; i < mesh.n_faces(); ++i) {
    const TracePair p = face_trace_pair(mesh, i);
    const Face& f = mesh.faces[i];
    if (!f.interior()) {
      CHECK(p.k2 == -1);
      // outward: for the unit square the boundary normal is axis-aligned
      CHECK(std::abs(std::abs(p.normal.x()) + std::abs(p.normal.y()) - 1.0) <=
            1e-14);
    }
    // normal stored once on the face, never per element
    CHECK(p.normal == f.normal);
  }

  CHECK_THROWS(face_trace_pair(mesh, -1));
  CHECK_THROWS(face_trace_pair(mesh, mesh.n_faces()));
}

TEST_CASE("invalid construction and dump format") {
  CHECK_THROWS(build_uniform_mesh(0));

  const TriMesh mesh = build_uniform_mesh(1);
  std::ostringstream os;
  dump_mesh(mesh, os);
  std::istringstream is(os.str());
  std::string tag;
  int count = 0;
  is >> tag >> count;
  CHECK(tag == "vertices");
  CHECK(count == 4);
}
