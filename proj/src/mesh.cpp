#include "oldg/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace oldg {

namespace {

ElementGeometry make_geometry(const Vec2& a, const Vec2& b, const Vec2& c) {
  ElementGeometry g;
  g.v0 = a;
  g.jac.col(0) = b - a;
  g.jac.col(1) = c - a;
  g.det_jac = g.jac.determinant();
  if (g.det_jac <= 0.0)
    throw std::runtime_error("mesh: element with non-positive signed area");
  g.jac_inv = g.jac.inverse();
  g.area = 0.5 * g.det_jac;
  g.centroid = (a + b + c) / 3.0;
  g.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  return g;
}

}  // namespace

Vec2 TriMesh::face_point(int face_id, double s) const {
  const Face& f = faces.at(static_cast<size_t>(face_id));
  const Vec2& pa = vertices[f.vertex_ids[0]];
  const Vec2& pb = vertices[f.vertex_ids[1]];
  return pa + s * (pb - pa);
}

TriMesh build_uniform_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");

  TriMesh mesh;
  const double h = 1.0 / n;
  mesh.vertices.reserve(static_cast<size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(i * h, j * h);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  // Both triangles of a cell share the diagonal v00 -> v11.
  mesh.elements.reserve(static_cast<size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.elements.push_back({v00, v10, v11});
      mesh.elements.push_back({v00, v11, v01});
    }
  }

  mesh.geom.reserve(mesh.elements.size());
  mesh.h_max = 0.0;
  for (const auto& e : mesh.elements) {
    mesh.geom.push_back(make_geometry(mesh.vertices[e[0]], mesh.vertices[e[1]],
                                      mesh.vertices[e[2]]));
    mesh.h_max = std::max(mesh.h_max, mesh.geom.back().diameter);
  }

  // Face ids follow the lexicographic order of the sorted vertex pair so the
  // numbering is independent of the element construction order.
  std::map<std::array<int, 2>, std::vector<std::pair<int, int>>> edge_map;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    for (int k = 0; k < 3; ++k) {
      int a = el[k], b = el[(k + 1) % 3];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      edge_map[key].push_back({e, k});
    }
  }

  mesh.faces.reserve(edge_map.size());
  mesh.element_faces.assign(mesh.elements.size(), {-1, -1, -1});
  for (const auto& [key, adj] : edge_map) {
    Face f;
    f.vertex_ids = key;
    const Vec2& pa = mesh.vertices[key[0]];
    const Vec2& pb = mesh.vertices[key[1]];
    f.measure = (pb - pa).norm();

    if (adj.size() == 1) {
      f.kind = FaceKind::Boundary;
      f.k1 = adj[0].first;
    } else if (adj.size() == 2) {
      f.kind = FaceKind::Interior;
      f.k1 = std::min(adj[0].first, adj[1].first);
      f.k2 = std::max(adj[0].first, adj[1].first);
    } else {
      throw std::runtime_error("mesh: face shared by more than two elements");
    }

    // Unit normal, oriented outward from k1 (domain-outward on the boundary).
    Vec2 t = (pb - pa) / f.measure;
    Vec2 nrm(t.y(), -t.x());
    Vec2 mid = 0.5 * (pa + pb);
    if (nrm.dot(mid - mesh.geom[f.k1].centroid) < 0.0) nrm = -nrm;
    f.normal = nrm;

    const int fid = static_cast<int>(mesh.faces.size());
    for (const auto& [elem, local_edge] : adj)
      mesh.element_faces[elem][local_edge] = fid;
    mesh.faces.push_back(f);
  }

  double total_area = 0.0;
  for (const auto& g : mesh.geom) total_area += g.area;
  if (std::abs(total_area - 1.0) > 1e-12)
    throw std::runtime_error("mesh: element areas do not tile the unit square");

  return mesh;
}

TracePair face_trace_pair(const TriMesh& mesh, int face_id) {
  if (face_id < 0 || face_id >= mesh.n_faces())
    throw std::out_of_range("face_trace_pair: invalid face id");
  const Face& f = mesh.faces[face_id];
  return {f.k1, f.k2, f.normal};
}

void dump_mesh(const TriMesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.n_vertices() << "\n";
  for (int i = 0; i < mesh.n_vertices(); ++i)
    out << i << " " << mesh.vertices[i].x() << " " << mesh.vertices[i].y()
        << "\n";
  out << "elements " << mesh.n_elements() << "\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    out << e << " " << el[0] << " " << el[1] << " " << el[2] << "\n";
  }
  out << "faces " << mesh.n_faces() << "\n";
  for (int i = 0; i < mesh.n_faces(); ++i) {
    const Face& f = mesh.faces[i];
    out << i << " " << (f.interior() ? "i" : "b") << " " << f.vertex_ids[0]
        << " " << f.vertex_ids[1] << " " << f.k1 << " " << f.k2 << " "
        << f.normal.x() << " " << f.normal.y() << " " << f.measure << "\n";
  }
}

}  // namespace oldg
