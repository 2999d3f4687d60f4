#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "oldg/types.hpp"

namespace oldg {

enum class FaceKind { Interior, Boundary };

/// One mesh edge. For interior faces the unit normal points from element
/// k1 into element k2 (k1 < k2); for boundary faces it is the outward
/// normal of the domain and k2 == -1. h_F equals the edge length in 2d.
struct Face {
  std::array<int, 2> vertex_ids;  // ascending
  FaceKind kind = FaceKind::Boundary;
  int k1 = -1;
  int k2 = -1;
  Vec2 normal = Vec2::Zero();
  double measure = 0.0;

  double h() const { return measure; }
  bool interior() const { return kind == FaceKind::Interior; }
};

/// Affine map x = v0 + jac * xhat from the reference triangle
/// {xhat >= 0, yhat >= 0, xhat + yhat <= 1} onto a physical element.
struct ElementGeometry {
  Vec2 v0;
  Mat2 jac;
  Mat2 jac_inv;
  double det_jac = 0.0;  // = 2 * area, positive for ccw elements
  double area = 0.0;
  Vec2 centroid;
  double diameter = 0.0;

  Vec2 to_physical(const Vec2& ref) const { return v0 + jac * ref; }
  Vec2 to_reference(const Vec2& x) const { return jac_inv * (x - v0); }
};

/// Conforming triangular mesh of the unit square. Immutable after
/// construction; safe for concurrent reads.
struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> elements;  // ccw vertex ids
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> element_faces;  // face id per local edge
  std::vector<ElementGeometry> geom;
  double h_max = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  Vec2 face_point(int face_id, double s) const;  // s in [0,1] along the edge
};

/// Splits the unit square into n x n cells, each cut into two right
/// triangles along the same diagonal. h_max = sqrt(2)/n.
TriMesh build_uniform_mesh(int n_cells_per_side);

struct TracePair {
  int k1;
  int k2;  // -1 for boundary faces (exterior trace is zero there)
  Vec2 normal;
};

/// Adjacent elements of a face together with the stored normal; throws on
/// an invalid face id.
TracePair face_trace_pair(const TriMesh& mesh, int face_id);

/// Plain-text node/element/face listing, one record per line.
void dump_mesh(const TriMesh& mesh, std::ostream& out);

}  // namespace oldg
