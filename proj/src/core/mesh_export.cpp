#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "vfmesh/mesher.hpp"

namespace vfmesh {

namespace {

class VertexPool {
 public:
  VertexPool(const Grid& g, int refine) : grid_(g), refine_(refine) {}

  std::uint32_t get(int i, int j, int k = 0) {
    const std::uint64_t key = (static_cast<std::uint64_t>(k) << 42) | (static_cast<std::uint64_t>(j) << 21) |
                              static_cast<std::uint64_t>(i);
    const auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const double h = grid_.cell_size / refine_;
    const auto id = static_cast<std::uint32_t>(vertices.size());
    vertices.push_back(grid_.to_world(Vec3{i * h, j * h, grid_.dimension == 3 ? k * h : 0.0}));
    ids_.emplace(key, id);
    return id;
  }

  std::vector<Vec3> vertices;

 private:
  const Grid& grid_;
  int refine_;
  std::unordered_map<std::uint64_t, std::uint32_t> ids_;
};

}  // namespace

MeshGeometry mesh_geometry(const CubicalMesh& mesh) {
  MeshGeometry geo;
  geo.dimension = mesh.dimension();
  const Grid& g = mesh.grid();
  const int r = mesh.refine();
  VertexPool pool(g, r);
  const auto labels = mesh.label_components();

  if (geo.dimension == 3) {
    for (int k = 0; k < g.extents[2]; ++k)
      for (int j = 0; j < g.extents[1]; ++j)
        for (int i = 0; i < g.extents[0]; ++i) {
          const std::size_t c = g.cell_id(i, j, k);
          if (!mesh.occupancy()[c]) continue;
          MeshElement el;
          el.parent = static_cast<std::uint32_t>(c);
          el.component = labels[c];
          // VTK_HEXAHEDRON corner order.
          static const int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                            {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
          for (int q = 0; q < 8; ++q) el.corners[q] = pool.get(i + kCorner[q][0], j + kCorner[q][1], k + kCorner[q][2]);
          geo.elements.push_back(el);
        }
    geo.vertices = std::move(pool.vertices);
    return geo;
  }

  std::vector<char> split(g.cell_count(), 0);
  for (int j = 0; j < g.extents[1]; ++j)
    for (int i = 0; i < g.extents[0]; ++i) {
      const std::size_t c = g.cell_id(i, j);
      int count = 0;
      for (int v = 0; v < r; ++v)
        for (int u = 0; u < r; ++u) count += mesh.filled(r * i + u, r * j + v);
      const bool whole = count == r * r && mesh.retained()[c];
      if (whole) {
        MeshElement el;
        el.parent = static_cast<std::uint32_t>(c);
        el.component = labels[mesh.fine_id(r * i, r * j)];
        el.corners[0] = pool.get(r * i, r * j);
        el.corners[1] = pool.get(r * i + r, r * j);
        el.corners[2] = pool.get(r * i + r, r * j + r);
        el.corners[3] = pool.get(r * i, r * j + r);
        geo.elements.push_back(el);
        continue;
      }
      if (count == 0) continue;
      split[c] = 1;
      for (int v = 0; v < r; ++v)
        for (int u = 0; u < r; ++u) {
          const int fi = r * i + u, fj = r * j + v;
          if (!mesh.filled(fi, fj)) continue;
          MeshElement el;
          el.parent = static_cast<std::uint32_t>(c);
          el.child = v * r + u;
          el.template_child = true;
          el.component = labels[mesh.fine_id(fi, fj)];
          el.corners[0] = pool.get(fi, fj);
          el.corners[1] = pool.get(fi + 1, fj);
          el.corners[2] = pool.get(fi + 1, fj + 1);
          el.corners[3] = pool.get(fi, fj + 1);
          geo.elements.push_back(el);
        }
    }
  // A whole cell next to a split one shares an edge that the children subdivide.
  for (const auto& el : geo.elements) {
    if (el.template_child) continue;
    const int i = static_cast<int>(el.parent % g.extents[0]), j = static_cast<int>(el.parent / g.extents[0]);
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int q = 0; q < 4; ++q)
      if (g.in_cells(i + di[q], j + dj[q]) && split[g.cell_id(i + di[q], j + dj[q])]) geo.hanging_nodes = true;
  }
  geo.vertices = std::move(pool.vertices);
  return geo;
}

void write_mesh(std::ostream& out, const MeshGeometry& geo, MeshFormat format) {
  char buf[128];
  const int nc = geo.dimension == 3 ? 8 : 4;
  if (format == MeshFormat::obj) {
    out << "# vfmesh " << (geo.hanging_nodes ? "hanging_nodes=1" : "hanging_nodes=0") << '\n';
    for (const Vec3& v : geo.vertices) {
      std::snprintf(buf, sizeof(buf), "v %.12g %.12g %.12g\n", v.x, v.y, v.z);
      out << buf;
    }
    static const int kHexFaces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                        {2, 3, 7, 6}, {0, 4, 7, 3}, {1, 2, 6, 5}};
    for (const auto& el : geo.elements) {
      if (nc == 4) {
        out << "f " << el.corners[0] + 1 << ' ' << el.corners[1] + 1 << ' ' << el.corners[2] + 1 << ' '
            << el.corners[3] + 1 << '\n';
        continue;
      }
      for (const auto& f : kHexFaces)
        out << "f " << el.corners[f[0]] + 1 << ' ' << el.corners[f[1]] + 1 << ' ' << el.corners[f[2]] + 1 << ' '
            << el.corners[f[3]] + 1 << '\n';
    }
    return;
  }
  out << "# vtk DataFile Version 3.0\n";
  out << "vfmesh " << (geo.hanging_nodes ? "hanging_nodes=1" : "hanging_nodes=0") << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << geo.vertices.size() << " double\n";
  for (const Vec3& v : geo.vertices) {
    std::snprintf(buf, sizeof(buf), "%.12g %.12g %.12g\n", v.x, v.y, v.z);
    out << buf;
  }
  const std::size_t m = geo.elements.size();
  out << "CELLS " << m << ' ' << m * (nc + 1) << '\n';
  for (const auto& el : geo.elements) {
    out << nc;
    for (int q = 0; q < nc; ++q) out << ' ' << el.corners[q];
    out << '\n';
  }
  out << "CELL_TYPES " << m << '\n';
  for (std::size_t e = 0; e < m; ++e) out << (nc == 8 ? 12 : 9) << '\n';
  out << "CELL_DATA " << m << '\n';
  out << "SCALARS provenance int 1\nLOOKUP_TABLE default\n";
  for (const auto& el : geo.elements) out << (el.template_child ? 1 : 0) << '\n';
  out << "SCALARS component int 1\nLOOKUP_TABLE default\n";
  for (const auto& el : geo.elements) out << el.component << '\n';
}

}  // namespace vfmesh
