#include "vfmesh/mesher.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

namespace vfmesh {

std::string_view to_string(Resolution r) {
  switch (r) {
    case Resolution::connect: return "connect";
    case Resolution::separate: return "separate";
    case Resolution::unresolved: return "unresolved";
  }
  return "?";
}

std::string_view to_string(ConflictPolicy p) {
  switch (p) {
    case ConflictPolicy::connect: return "connect";
    case ConflictPolicy::separate: return "separate";
    case ConflictPolicy::majority: return "majority";
  }
  return "?";
}

ConflictPolicy parse_conflict_policy(std::string_view name) {
  if (name == "connect") return ConflictPolicy::connect;
  if (name == "separate") return ConflictPolicy::separate;
  if (name == "majority") return ConflictPolicy::majority;
  fail(ErrorKind::bad_input, "unknown conflict policy '" + std::string(name) + "'");
}

MeshFormat parse_mesh_format(std::string_view name) {
  if (name == "obj") return MeshFormat::obj;
  if (name == "vtk" || name == "vtk-legacy") return MeshFormat::vtk;
  fail(ErrorKind::bad_input, "unknown mesh format '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// 3D block taxonomy

namespace {

// Adjacent (sharing at least an edge) within a 2x2x2 block: differ in 1 or 2 bits.
bool block_adjacent(int p, int q) {
  const int d = p ^ q;
  return d != 0 && d != 7;
}

int block_components(std::uint8_t set) {
  int seen = 0, count = 0;
  for (int p = 0; p < 8; ++p) {
    if (!((set >> p) & 1) || ((seen >> p) & 1)) continue;
    ++count;
    int stack[8], top = 0;
    stack[top++] = p;
    seen |= 1 << p;
    while (top) {
      const int u = stack[--top];
      for (int q = 0; q < 8; ++q)
        if (((set >> q) & 1) && !((seen >> q) & 1) && block_adjacent(u, q)) {
          seen |= 1 << q;
          stack[top++] = q;
        }
    }
  }
  return count;
}

std::uint8_t apply_symmetry(std::uint8_t pattern, const std::array<int, 3>& perm, int flips) {
  std::uint8_t out = 0;
  for (int p = 0; p < 8; ++p) {
    if (!((pattern >> p) & 1)) continue;
    const int bits[3] = {p & 1, (p >> 1) & 1, (p >> 2) & 1};
    int q = 0;
    for (int a = 0; a < 3; ++a) q |= (bits[perm[a]] ^ ((flips >> a) & 1)) << a;
    out |= static_cast<std::uint8_t>(1 << q);
  }
  return out;
}

struct BlockTable {
  std::array<BlockCase, 256> cases;

  BlockTable() {
    // Representatives ordered by filled count; character p is cell p of the block.
    static const char* kReps[11] = {"00011000", "00000110", "00011001", "00010110", "00011110", "00111100",
                                    "01101001", "00111101", "01101011", "01101111", "01111110"};
    std::map<std::uint8_t, int> id_of;
    for (int c = 0; c < 11; ++c) {
      std::uint8_t m = 0;
      for (int p = 0; p < 8; ++p)
        if (kReps[c][p] == '1') m |= static_cast<std::uint8_t>(1 << p);
      id_of[canonical_block(m)] = c + 1;
    }
    for (int m = 0; m < 256; ++m) {
      BlockCase bc;
      for (int a = 0; a < 3; ++a) {
        const int b = 1 << ((a + 1) % 3), c = 1 << ((a + 2) % 3);
        for (int side = 0; side < 2; ++side) {
          const int base = side << a;
          const int ring[4] = {base, base | b, base | b | c, base | c};
          const bool f[4] = {((m >> ring[0]) & 1) != 0, ((m >> ring[1]) & 1) != 0, ((m >> ring[2]) & 1) != 0,
                             ((m >> ring[3]) & 1) != 0};
          if ((f[0] && f[2] && !f[1] && !f[3]) || (f[1] && f[3] && !f[0] && !f[2])) ++bc.pinched_half_edges;
        }
      }
      const auto filled = static_cast<std::uint8_t>(m);
      bc.vertex_pinch = block_components(filled) > 1 || block_components(static_cast<std::uint8_t>(~filled)) > 1;
      if (bc.pinched_half_edges > 0 || bc.vertex_pinch) {
        const auto it = id_of.find(canonical_block(filled));
        bc.case_id = it == id_of.end() ? -1 : it->second;
      }
      cases[m] = bc;
    }
  }
};

const BlockTable& block_table() {
  static const BlockTable table;
  return table;
}

}  // namespace

std::uint8_t canonical_block(std::uint8_t pattern) {
  std::array<int, 3> perm{0, 1, 2};
  std::uint8_t best = pattern;
  do {
    for (int flips = 0; flips < 8; ++flips) best = std::min(best, apply_symmetry(pattern, perm, flips));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

BlockCase classify_block(std::uint8_t pattern) { return block_table().cases[pattern]; }

// ---------------------------------------------------------------------------
// CubicalMesh

CubicalMesh::CubicalMesh(Grid grid, std::vector<std::uint8_t> retained)
    : grid_(std::move(grid)), retained_(std::move(retained)) {
  if (retained_.size() != grid_.cell_count()) fail(ErrorKind::internal, "retained mask does not match the grid");
  fine_ = retained_;
}

std::size_t CubicalMesh::retained_count() const {
  return static_cast<std::size_t>(std::count(retained_.begin(), retained_.end(), 1));
}

void CubicalMesh::refine_to_ninths() {
  if (refine_ == 3) return;
  if (grid_.dimension != 2) fail(ErrorKind::internal, "cell split templates are 2D only");
  const Index3 n = grid_.extents;
  std::vector<std::uint8_t> fine(static_cast<std::size_t>(9) * n[0] * n[1], 0);
  const int w = 3 * n[0];
  for (int j = 0; j < 3 * n[1]; ++j)
    for (int i = 0; i < w; ++i) fine[static_cast<std::size_t>(j) * w + i] = fine_[grid_.cell_id(i / 3, j / 3)];
  fine_.swap(fine);
  refine_ = 3;
}

void CubicalMesh::set_fine(int i, int j, bool v) { fine_[fine_id(i, j)] = v ? 1 : 0; }

std::vector<int> CubicalMesh::label_components(int* count) const {
  const Index3 e = fine_extents();
  std::vector<int> label(fine_.size(), -1);
  std::vector<std::size_t> stack;
  int next = 0;
  const std::size_t sx = 1, sy = static_cast<std::size_t>(e[0]), sz = static_cast<std::size_t>(e[0]) * e[1];
  for (std::size_t start = 0; start < fine_.size(); ++start) {
    if (!fine_[start] || label[start] >= 0) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      const std::size_t row = u / sy;
      const int i = static_cast<int>(u - row * sy);
      const int j = static_cast<int>(e[2] == 1 ? row : row % e[1]);
      const int k = e[2] == 1 ? 0 : static_cast<int>(u / sz);
      auto visit = [&](std::size_t v) {
        if (fine_[v] && label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
      };
      if (i > 0) visit(u - sx);
      if (i + 1 < e[0]) visit(u + sx);
      if (j > 0) visit(u - sy);
      if (j + 1 < e[1]) visit(u + sy);
      if (k > 0) visit(u - sz);
      if (k + 1 < e[2]) visit(u + sz);
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

std::vector<int> CubicalMesh::component_cell_counts(const std::vector<int>& labels, int count) const {
  std::vector<int> sizes(count, 0);
  if (refine_ == 1) {
    for (int l : labels)
      if (l >= 0) ++sizes[l];
    return sizes;
  }
  const Index3 e = fine_extents();
  std::vector<int> seen;
  for (int cj = 0; cj < grid_.extents[1]; ++cj)
    for (int ci = 0; ci < grid_.extents[0]; ++ci) {
      seen.clear();
      for (int v = 0; v < 3; ++v)
        for (int u = 0; u < 3; ++u) {
          const int l = labels[static_cast<std::size_t>(3 * cj + v) * e[0] + 3 * ci + u];
          if (l >= 0 && std::find(seen.begin(), seen.end(), l) == seen.end()) seen.push_back(l);
        }
      for (int l : seen) ++sizes[l];
    }
  return sizes;
}

int CubicalMesh::component_count() const {
  int n = 0;
  label_components(&n);
  return n;
}

CubicalMesh extract_mesh(const VolumeFractionField& field, double t) {
  const auto& vf = field.values(full_mask(field.dimension()));
  std::vector<std::uint8_t> keep(vf.size());
  for (std::size_t c = 0; c < vf.size(); ++c) keep[c] = vf[c] >= t ? 1 : 0;
  return CubicalMesh(field.grid(), std::move(keep));
}

// ---------------------------------------------------------------------------
// Detection and classification

std::vector<Pinch> detect_pinches(const CubicalMesh& mesh) {
  std::vector<Pinch> out;
  const Index3 e = mesh.fine_extents();
  auto id = [&](int i, int j, int k) { return static_cast<std::uint32_t>(mesh.fine_id(i, j, k)); };
  if (mesh.dimension() == 2) {
    for (int j = 1; j < e[1]; ++j)
      for (int i = 1; i < e[0]; ++i) {
        const bool a = mesh.filled(i - 1, j - 1), b = mesh.filled(i, j - 1), c = mesh.filled(i, j),
                   d = mesh.filled(i - 1, j);
        if (!((a && c && !b && !d) || (b && d && !a && !c))) continue;
        Pinch p;
        p.location = {0u, {i, j, 0}};
        p.case_id = 1;
        p.neighborhood = {id(i - 1, j - 1, 0), id(i, j - 1, 0), id(i, j, 0), id(i - 1, j, 0)};
        if (a) p.cells = {p.neighborhood[0], p.neighborhood[2]};
        else p.cells = {p.neighborhood[1], p.neighborhood[3]};
        out.push_back(std::move(p));
      }
    return out;
  }

  auto block_pattern = [&](const Index3& v) {
    std::uint8_t m = 0;
    for (int p = 0; p < 8; ++p)
      if (mesh.filled(v[0] - 1 + (p & 1), v[1] - 1 + ((p >> 1) & 1), v[2] - 1 + ((p >> 2) & 1)))
        m |= static_cast<std::uint8_t>(1 << p);
    return m;
  };
  // Edge pinches: each interior lattice edge once, tagged with the case of
  // the block at its lower endpoint.
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    Index3 lo{1, 1, 1}, hi = e;
    lo[a] = 0;
    for (int x2 = lo[2]; x2 < hi[2]; ++x2)
      for (int x1 = lo[1]; x1 < hi[1]; ++x1)
        for (int x0 = lo[0]; x0 < hi[0]; ++x0) {
          const Index3 idx{x0, x1, x2};
          std::array<Index3, 4> ring;
          bool f[4];
          const int db[4] = {-1, 0, 0, -1}, dc[4] = {-1, -1, 0, 0};
          for (int q = 0; q < 4; ++q) {
            ring[q] = idx;
            ring[q][b] += db[q];
            ring[q][c] += dc[q];
            f[q] = mesh.filled(ring[q][0], ring[q][1], ring[q][2]);
          }
          if (!((f[0] && f[2] && !f[1] && !f[3]) || (f[1] && f[3] && !f[0] && !f[2]))) continue;
          Pinch p;
          p.location = {1u << a, idx};
          p.case_id = classify_block(block_pattern(idx)).case_id;
          for (int q = 0; q < 4; ++q) {
            const std::uint32_t cid = id(ring[q][0], ring[q][1], ring[q][2]);
            p.neighborhood.push_back(cid);
            if (f[q]) p.cells.push_back(cid);
          }
          out.push_back(std::move(p));
        }
  }
  for (int z = 1; z < e[2]; ++z)
    for (int y = 1; y < e[1]; ++y)
      for (int x = 1; x < e[0]; ++x) {
        const Index3 v{x, y, z};
        const std::uint8_t m = block_pattern(v);
        const BlockCase bc = classify_block(m);
        if (!bc.vertex_pinch) continue;
        Pinch p;
        p.location = {0u, v};
        p.case_id = bc.case_id;
        for (int q = 0; q < 8; ++q) {
          const std::uint32_t cid = id(x - 1 + (q & 1), y - 1 + ((q >> 1) & 1), z - 1 + ((q >> 2) & 1));
          p.neighborhood.push_back(cid);
          if ((m >> q) & 1) p.cells.push_back(cid);
        }
        out.push_back(std::move(p));
      }
  return out;
}

Resolution classify_pinch(const Pinch& pinch, const VolumeFractionField& field, double t) {
  return field.value(pinch.location) >= t ? Resolution::connect : Resolution::separate;
}

void classify_pinches(std::vector<Pinch>& pinches, const VolumeFractionField& field, double t) {
  for (auto& p : pinches) {
    p.subcell_vf = field.value(p.location);
    p.classified = classify_pinch(p, field, t);
    p.resolution = p.classified;
  }
}

int resolve_adjacent_conflicts(std::vector<Pinch>& pinches, ConflictPolicy policy) {
  const std::size_t n = pinches.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::uint32_t, std::size_t> first_owner;
  for (std::size_t k = 0; k < n; ++k)
    for (std::uint32_t c : pinches[k].neighborhood) {
      auto [it, inserted] = first_owner.emplace(c, k);
      if (!inserted) parent[find(k)] = find(it->second);
    }
  std::vector<int> connects(n, 0), separates(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = find(k);
    if (pinches[k].classified == Resolution::connect) ++connects[r];
    else ++separates[r];
  }
  int overrides = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = find(k);
    Resolution res = pinches[k].classified;
    if (connects[r] > 0 && separates[r] > 0) {
      switch (policy) {
        case ConflictPolicy::connect: res = Resolution::connect; break;
        case ConflictPolicy::separate: res = Resolution::separate; break;
        case ConflictPolicy::majority:
          res = connects[r] > separates[r] ? Resolution::connect : Resolution::separate;
          break;
      }
    }
    pinches[k].resolution = res;
    overrides += res != pinches[k].classified;
  }
  return overrides;
}

// ---------------------------------------------------------------------------
// 2D templates on the 3x3 split

void apply_pinch_templates_2d(CubicalMesh& mesh, const std::vector<Pinch>& pinches) {
  mesh.refine_to_ninths();
  const auto& retained = mesh.retained();
  const Grid& g = mesh.grid();
  for (const auto& p : pinches) {
    if (p.resolution == Resolution::unresolved) continue;
    const int i = p.location.index[0], j = p.location.index[1];
    // Cells around vertex (i, j) and the ninth of each that touches it.
    const int ci[4] = {i - 1, i, i, i - 1}, cj[4] = {j - 1, j - 1, j, j};
    const int u[4] = {2, 0, 0, 2}, v[4] = {2, 2, 0, 0};
    for (int q = 0; q < 4; ++q) {
      const bool kept = retained[g.cell_id(ci[q], cj[q])] != 0;
      if (p.resolution == Resolution::separate && kept) mesh.set_fine(3 * ci[q] + u[q], 3 * cj[q] + v[q], false);
      if (p.resolution == Resolution::connect && !kept) mesh.set_fine(3 * ci[q] + u[q], 3 * cj[q] + v[q], true);
    }
  }
}

void separate_exterior_faces_2d(CubicalMesh& mesh, const VolumeFractionField& field, double t) {
  mesh.refine_to_ninths();
  const Grid& g = mesh.grid();
  const auto& retained = mesh.retained();
  const int nx = g.extents[0], ny = g.extents[1];
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      if (!retained[g.cell_id(i - 1, j)] || !retained[g.cell_id(i, j)]) continue;
      if (field.value({2u, {i, j, 0}}) >= t) continue;
      for (int v = 0; v < 3; ++v) {
        mesh.set_fine(3 * i - 1, 3 * j + v, false);
        mesh.set_fine(3 * i, 3 * j + v, false);
      }
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!retained[g.cell_id(i, j - 1)] || !retained[g.cell_id(i, j)]) continue;
      if (field.value({1u, {i, j, 0}}) >= t) continue;
      for (int u = 0; u < 3; ++u) {
        mesh.set_fine(3 * i + u, 3 * j - 1, false);
        mesh.set_fine(3 * i + u, 3 * j, false);
      }
    }
}

// ---------------------------------------------------------------------------
// Archipelagos

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Neighbour across one face of a background cell, with the subcell (edge in
// 2D, face in 3D) that separates them.
struct Step {
  int cell;
  Subcell wall;
  int dir;  // 0..2d-1: -x, +x, -y, +y, -z, +z
};

std::vector<Step> face_steps(const Grid& g, int cell) {
  const int d = g.dimension;
  const int i = cell % g.extents[0];
  const int j = (cell / g.extents[0]) % g.extents[1];
  const int k = cell / (g.extents[0] * g.extents[1]);
  const Index3 idx{i, j, k};
  const unsigned full = full_mask(d);
  std::vector<Step> out;
  for (int a = 0; a < d; ++a)
    for (int side = 0; side < 2; ++side) {
      Index3 n = idx;
      n[a] += side ? 1 : -1;
      if (!g.in_cells(n[0], n[1], n[2])) continue;
      Index3 w = idx;
      w[a] += side;
      out.push_back({static_cast<int>(g.cell_id(n[0], n[1], n[2])), Subcell{full & ~(1u << a), w}, 2 * a + side});
    }
  return out;
}

// Ninth offsets (u, v) touching the middle of a cell side, indexed like Step::dir.
constexpr int kSideU[4] = {0, 2, 1, 1};
constexpr int kSideV[4] = {1, 1, 0, 2};

}  // namespace

int join_archipelago(CubicalMesh& mesh, const VolumeFractionField& field, double t) {
  const Grid& g = mesh.grid();
  const int d = g.dimension;
  if (d == 2) mesh.refine_to_ninths();
  const int r = mesh.refine();
  const auto& retained = mesh.retained();
  const int ncells = static_cast<int>(g.cell_count());

  int ncomp = 0;
  const std::vector<int> labels = mesh.label_components(&ncomp);
  if (ncomp < 2) return 0;
  // Component of each retained cell, read at its centre (never removed by templates).
  std::vector<int> comp_of(ncells, -1);
  for (int c = 0; c < ncells; ++c) {
    if (!retained[c]) continue;
    const int i = c % g.extents[0], j = (c / g.extents[0]) % g.extents[1], k = c / (g.extents[0] * g.extents[1]);
    const int off = r / 2;
    comp_of[c] = labels[mesh.fine_id(r * i + off, r * j + off, d == 3 ? r * k + off : 0)];
  }

  DisjointSets sets(ncomp);
  std::vector<char> done(ncomp, 0);
  std::vector<int> from(ncells), from_dir(ncells);
  std::vector<int> seen(ncells, -1);
  int stamp = 0, bridges = 0;
  std::deque<int> queue;
  for (int c0 = 0; c0 < ncomp; ++c0) {
    if (sets.find(c0) != c0 || done[c0]) continue;
    for (;;) {
      const int root = sets.find(c0);
      ++stamp;
      queue.clear();
      for (int c = 0; c < ncells; ++c)
        if (comp_of[c] >= 0 && sets.find(comp_of[c]) == root) {
          seen[c] = stamp;
          from[c] = -1;
          queue.push_back(c);
        }
      int hit = -1;
      while (!queue.empty() && hit < 0) {
        const int u = queue.front();
        queue.pop_front();
        for (const Step& s : face_steps(g, u)) {
          if (seen[s.cell] == stamp || field.value(s.wall) < t) continue;
          if (retained[s.cell]) {
            if (sets.find(comp_of[s.cell]) == root) continue;
            from[s.cell] = u;
            from_dir[s.cell] = s.dir;
            hit = s.cell;
            break;
          }
          seen[s.cell] = stamp;
          from[s.cell] = u;
          from_dir[s.cell] = s.dir;
          queue.push_back(s.cell);
        }
      }
      if (hit < 0) break;
      ++bridges;
      sets.unite(root, comp_of[hit]);
      if (d != 2) continue;
      // Fill centre plus entry and exit side ninths of every empty cell on the path.
      for (int cur = hit; !retained[from[cur]];) {
        const int cell = from[cur];
        const int exit_dir = from_dir[cur];
        const int entry_dir = from_dir[cell] ^ 1;
        const int ci = cell % g.extents[0], cj = cell / g.extents[0];
        mesh.set_fine(3 * ci + 1, 3 * cj + 1, true);
        mesh.set_fine(3 * ci + kSideU[exit_dir], 3 * cj + kSideV[exit_dir], true);
        mesh.set_fine(3 * ci + kSideU[entry_dir], 3 * cj + kSideV[entry_dir], true);
        // A filled corner touching the centre only diagonally would pinch.
        for (int q = 0; q < 4; ++q) {
          const int cu = (q & 1) ? 2 : 0, cv = (q & 2) ? 2 : 0;
          if (!mesh.filled(3 * ci + cu, 3 * cj + cv)) continue;
          if (!mesh.filled(3 * ci + 1, 3 * cj + cv) && !mesh.filled(3 * ci + cu, 3 * cj + 1))
            mesh.set_fine(3 * ci + 1, 3 * cj + cv, true);
        }
        cur = cell;
      }
    }
    done[sets.find(c0)] = 1;
  }
  return bridges;
}

int remove_islands(CubicalMesh& mesh, int min_cells) {
  if (min_cells <= 1) return 0;
  int n = 0;
  const auto labels = mesh.label_components(&n);
  const auto sizes = mesh.component_cell_counts(labels, n);
  int removed = 0;
  for (int s : sizes) removed += s < min_cells;
  if (!removed) return 0;
  for (std::size_t f = 0; f < labels.size(); ++f)
    if (labels[f] >= 0 && sizes[labels[f]] < min_cells) mesh.set_filled(f, false);
  return removed;
}

MeshResult run_mesher(const VolumeFractionField& field, const MeshOptions& opt) {
  MeshResult res;
  res.mesh = extract_mesh(field, opt.vf_threshold);
  int n = 0;
  auto labels = res.mesh.label_components(&n);
  res.components_before = res.mesh.component_cell_counts(labels, n);

  res.pinches = detect_pinches(res.mesh);
  classify_pinches(res.pinches, field, opt.vf_threshold);
  if (opt.antialias) {
    res.conflict_overrides = resolve_adjacent_conflicts(res.pinches, opt.policy);
    if (field.dimension() == 2) {
      apply_pinch_templates_2d(res.mesh, res.pinches);
      if (opt.separate_faces) separate_exterior_faces_2d(res.mesh, field, opt.vf_threshold);
    }
    if (opt.join) res.bridges = join_archipelago(res.mesh, field, opt.vf_threshold);
  } else {
    for (auto& p : res.pinches) p.resolution = Resolution::unresolved;
  }
  res.warned_min_cells = opt.min_cells <= 0;
  res.islands_removed = remove_islands(res.mesh, opt.min_cells);

  labels = res.mesh.label_components(&n);
  res.components_after = res.mesh.component_cell_counts(labels, n);
  res.residual_pinches = detect_pinches(res.mesh).size();
  return res;
}

IntroducedOverride resolution_override(const std::vector<Pinch>& pinches) {
  std::map<std::pair<unsigned, Index3>, Resolution> table;
  for (const auto& p : pinches)
    if (p.resolution != Resolution::unresolved) table[{p.location.mask, p.location.index}] = p.resolution;
  return [table = std::move(table)](const Subcell& sc, double v) {
    const auto it = table.find({sc.mask, sc.index});
    if (it == table.end()) return v;
    return it->second == Resolution::connect ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  };
}

}  // namespace vfmesh
