#include "vfmesh/persistence.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <unordered_map>

namespace vfmesh {

namespace {

using u32 = std::uint32_t;

double clamp_to(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

template <std::size_t N>
std::array<u32, N> sorted(std::array<u32, N> a) {
  std::sort(a.begin(), a.end());
  return a;
}

// Cells around a primal entity, in cyclic order for edges (2D vertices are
// edges of the dual picture in the same sense). Empty if any is missing.
std::vector<u32> surrounding_cells(const Index3& ext, int dim, const Subcell& sc) {
  auto cid = [&](int i, int j, int k) {
    return static_cast<u32>((static_cast<std::size_t>(k) * ext[1] + j) * ext[0] + i);
  };
  auto inside = [&](int i, int j, int k) {
    return i >= 0 && j >= 0 && k >= 0 && i < ext[0] && j < ext[1] && k < ext[2];
  };
  std::vector<u32> out;
  const Index3& x = sc.index;
  if (dim == 2) {
    // Primal vertex: counter-clockwise cells.
    const int di[4] = {-1, 0, 0, -1}, dj[4] = {-1, -1, 0, 0};
    for (int q = 0; q < 4; ++q) {
      if (!inside(x[0] + di[q], x[1] + dj[q], 0)) return {};
      out.push_back(cid(x[0] + di[q], x[1] + dj[q], 0));
    }
    return out;
  }
  if (sc.mask == 0) {
    for (int dz = -1; dz <= 0; ++dz)
      for (int dy = -1; dy <= 0; ++dy)
        for (int dx = -1; dx <= 0; ++dx) {
          if (!inside(x[0] + dx, x[1] + dy, x[2] + dz)) return {};
          out.push_back(cid(x[0] + dx, x[1] + dy, x[2] + dz));
        }
    return out;
  }
  // Primal edge along axis a: the four hexes around it, cyclically.
  int a = 0;
  while (!((sc.mask >> a) & 1u)) ++a;
  const int b = (a + 1) % 3, c = (a + 2) % 3;
  const int db[4] = {-1, 0, 0, -1}, dc[4] = {-1, -1, 0, 0};
  for (int q = 0; q < 4; ++q) {
    Index3 h = x;
    h[b] += db[q];
    h[c] += dc[q];
    if (!inside(h[0], h[1], h[2])) return {};
    out.push_back(cid(h[0], h[1], h[2]));
  }
  return out;
}

double window_clamp(const std::vector<double>& vf, const std::vector<u32>& cells, double v) {
  double lo = INFINITY, hi = -INFINITY;
  for (u32 c : cells) {
    lo = std::min(lo, vf[c]);
    hi = std::max(hi, vf[c]);
  }
  return clamp_to(v, lo, hi);
}

void add_face_dual_edges(const Index3& ext, FiltrationComplex& cx) {
  for (int k = 0; k < ext[2]; ++k)
    for (int j = 0; j < ext[1]; ++j)
      for (int i = 0; i < ext[0]; ++i) {
        const u32 c = static_cast<u32>((static_cast<std::size_t>(k) * ext[1] + j) * ext[0] + i);
        if (i + 1 < ext[0]) cx.edges.push_back({c, c + 1});
        if (j + 1 < ext[1]) cx.edges.push_back({c, c + static_cast<u32>(ext[0])});
        if (k + 1 < ext[2]) cx.edges.push_back({c, c + static_cast<u32>(ext[0] * ext[1])});
      }
}

}  // namespace

std::vector<std::uint32_t> FiltrationComplex::introduced_neighbors(std::size_t k) const {
  return surrounding_cells(extents, dimension, introduced.at(k));
}

FiltrationComplex dualize_2d(const VolumeFractionField& field, const IntroducedOverride& adjust) {
  if (field.dimension() != 2) fail(ErrorKind::bad_input, "dualize_2d needs a 2D field");
  FiltrationComplex cx;
  cx.dimension = 2;
  cx.extents = field.grid().extents;
  const Index3 ext = cx.extents;
  cx.vertex_vf = field.values(full_mask(2));
  cx.cell_vertices = cx.vertex_vf.size();
  add_face_dual_edges(ext, cx);

  // One introduced vertex per interior primal vertex; its dual quad becomes
  // four triangles fanned around it.
  for (int j = 1; j < ext[1]; ++j)
    for (int i = 1; i < ext[0]; ++i) {
      const Subcell sc{0u, {i, j, 0}};
      const auto cells = surrounding_cells(ext, 2, sc);
      double v = window_clamp(cx.vertex_vf, cells, field.value(sc));
      if (adjust) v = window_clamp(cx.vertex_vf, cells, adjust(sc, v));
      const u32 vid = static_cast<u32>(cx.vertex_vf.size());
      cx.vertex_vf.push_back(v);
      cx.introduced.push_back(sc);
      for (int q = 0; q < 4; ++q) {
        cx.edges.push_back(sorted<2>({cells[q], vid}));
        cx.triangles.push_back(sorted<3>({cells[q], cells[(q + 1) % 4], vid}));
      }
    }
  return cx;
}

FiltrationComplex dualize_3d(const VolumeFractionField& field, const IntroducedOverride& adjust) {
  if (field.dimension() != 3) fail(ErrorKind::bad_input, "dualize_3d needs a 3D field");
  FiltrationComplex cx;
  cx.dimension = 3;
  cx.extents = field.grid().extents;
  const Index3 ext = cx.extents;
  cx.vertex_vf = field.values(7u);
  cx.cell_vertices = cx.vertex_vf.size();
  add_face_dual_edges(ext, cx);

  // Introduced vertices on interior primal edges (dual faces).
  std::array<std::vector<std::int64_t>, 3> edge_vertex;
  for (int a = 0; a < 3; ++a) {
    const unsigned mask = 1u << a;
    const Index3 e = field.extents(mask);
    edge_vertex[a].assign(static_cast<std::size_t>(e[0]) * e[1] * e[2], -1);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i) {
          const Subcell sc{mask, {i, j, k}};
          const auto cells = surrounding_cells(ext, 3, sc);
          if (cells.empty()) continue;
          double v = window_clamp(cx.vertex_vf, cells, field.value(sc));
          if (adjust) v = window_clamp(cx.vertex_vf, cells, adjust(sc, v));
          const u32 vid = static_cast<u32>(cx.vertex_vf.size());
          cx.vertex_vf.push_back(v);
          cx.introduced.push_back(sc);
          edge_vertex[a][(static_cast<std::size_t>(k) * e[1] + j) * e[0] + i] = vid;
          for (int q = 0; q < 4; ++q) {
            cx.edges.push_back(sorted<2>({cells[q], vid}));
            cx.triangles.push_back(sorted<3>({cells[q], cells[(q + 1) % 4], vid}));
          }
        }
  }

  // Introduced vertices on interior primal vertices (dual volumes); each dual
  // cube is coned from its centre over the 24 triangles of its subdivided faces.
  auto edge_id = [&](int a, const Index3& idx) {
    const Index3 e = field.extents(1u << a);
    return edge_vertex[a][(static_cast<std::size_t>(idx[2]) * e[1] + idx[1]) * e[0] + idx[0]];
  };
  for (int k = 1; k < ext[2]; ++k)
    for (int j = 1; j < ext[1]; ++j)
      for (int i = 1; i < ext[0]; ++i) {
        const Subcell sc{0u, {i, j, k}};
        const auto hexes = surrounding_cells(ext, 3, sc);
        double v = window_clamp(cx.vertex_vf, hexes, field.value(sc));
        if (adjust) v = window_clamp(cx.vertex_vf, hexes, adjust(sc, v));
        const u32 vid = static_cast<u32>(cx.vertex_vf.size());
        cx.vertex_vf.push_back(v);
        cx.introduced.push_back(sc);
        for (u32 h : hexes) cx.edges.push_back(sorted<2>({h, vid}));
        // Dual edges of the cube: hex pairs inside the 2x2x2 block differing in one bit.
        for (int p = 0; p < 8; ++p)
          for (int bit = 1; bit < 8; bit <<= 1)
            if (!(p & bit)) cx.triangles.push_back(sorted<3>({hexes[p], hexes[p | bit], vid}));
        for (int a = 0; a < 3; ++a)
          for (int side = -1; side <= 0; ++side) {
            Index3 eidx{i, j, k};
            eidx[a] += side;
            const std::int64_t ev = edge_id(a, eidx);
            if (ev < 0) fail(ErrorKind::internal, "missing interior edge vertex");
            const u32 e = static_cast<u32>(ev);
            cx.edges.push_back(sorted<2>({e, vid}));
            const auto ring = surrounding_cells(ext, 3, Subcell{1u << a, eidx});
            for (int q = 0; q < 4; ++q) {
              cx.triangles.push_back(sorted<3>({ring[q], e, vid}));
              cx.tets.push_back(sorted<4>({ring[q], ring[(q + 1) % 4], e, vid}));
            }
          }
      }
  return cx;
}

FiltrationComplex dualize(const VolumeFractionField& field, const IntroducedOverride& adjust) {
  return field.dimension() == 2 ? dualize_2d(field, adjust) : dualize_3d(field, adjust);
}

std::vector<FilteredSimplex> lower_star_filtration(const FiltrationComplex& cx) {
  std::vector<FilteredSimplex> out;
  out.reserve(cx.simplex_count());
  const auto& vf = cx.vertex_vf;
  for (std::size_t v = 0; v < vf.size(); ++v) out.push_back({vf[v], 0, {static_cast<u32>(v), 0, 0, 0}});
  for (const auto& e : cx.edges) out.push_back({std::min(vf[e[0]], vf[e[1]]), 1, {e[0], e[1], 0, 0}});
  for (const auto& t : cx.triangles)
    out.push_back({std::min({vf[t[0]], vf[t[1]], vf[t[2]]}), 2, {t[0], t[1], t[2], 0}});
  for (const auto& t : cx.tets)
    out.push_back({std::min({vf[t[0]], vf[t[1]], vf[t[2]], vf[t[3]]}), 3, t});
  std::sort(out.begin(), out.end(), [](const FilteredSimplex& a, const FilteredSimplex& b) {
    if (a.vf != b.vf) return a.vf > b.vf;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.v < b.v;
  });
  return out;
}

namespace {

struct TriKeyHash {
  std::size_t operator()(const std::array<u32, 3>& k) const noexcept {
    std::uint64_t h = k[0];
    h = h * 0x9E3779B97F4A7C15ull ^ k[1];
    h = h * 0x9E3779B97F4A7C15ull ^ k[2];
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

void xor_into(std::vector<u32>& col, const std::vector<u32>& other, std::vector<u32>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(scratch));
  col.swap(scratch);
}

}  // namespace

PersistenceDiagram reduce(const std::vector<FilteredSimplex>& order, int ambient_dim) {
  const std::size_t n = order.size();
  std::vector<u32> vertex_pos;
  std::unordered_map<std::uint64_t, u32> edge_pos;
  std::unordered_map<std::array<u32, 3>, u32, TriKeyHash> tri_pos;
  int top = 0;
  for (const auto& s : order) top = std::max(top, s.dim);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& s = order[p];
    if (s.dim == 0) {
      if (vertex_pos.size() <= s.v[0]) vertex_pos.resize(s.v[0] + 1, 0);
      vertex_pos[s.v[0]] = static_cast<u32>(p);
    } else if (s.dim == 1) {
      edge_pos.emplace((static_cast<std::uint64_t>(s.v[0]) << 32) | s.v[1], static_cast<u32>(p));
    } else if (s.dim == 2 && top >= 3) {
      tri_pos.emplace(std::array<u32, 3>{s.v[0], s.v[1], s.v[2]}, static_cast<u32>(p));
    }
  }
  auto boundary = [&](const FilteredSimplex& s) {
    std::vector<u32> col;
    if (s.dim == 1) {
      col = {vertex_pos[s.v[0]], vertex_pos[s.v[1]]};
    } else if (s.dim == 2) {
      auto e = [&](u32 a, u32 b) { return edge_pos.at((static_cast<std::uint64_t>(a) << 32) | b); };
      col = {e(s.v[0], s.v[1]), e(s.v[0], s.v[2]), e(s.v[1], s.v[2])};
    } else if (s.dim == 3) {
      auto t = [&](u32 a, u32 b, u32 c) { return tri_pos.at({a, b, c}); };
      col = {t(s.v[1], s.v[2], s.v[3]), t(s.v[0], s.v[2], s.v[3]), t(s.v[0], s.v[1], s.v[3]),
             t(s.v[0], s.v[1], s.v[2])};
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  // Reduce the highest dimension first so positive columns found as pivots
  // can be skipped ("clearing") when their own dimension comes up.
  constexpr u32 kNone = ~u32{0};
  std::vector<u32> owner(n, kNone);  // pivot row -> column that owns it
  std::vector<char> negative(n, 0), is_pivot(n, 0);
  std::vector<std::vector<u32>> reduced(n);
  std::vector<u32> scratch;
  PersistenceDiagram dgm;
  dgm.dimension = ambient_dim;
  for (int dim = top; dim >= 1; --dim) {
    for (std::size_t j = 0; j < n; ++j) {
      if (order[j].dim != dim || is_pivot[j]) continue;
      std::vector<u32> col = boundary(order[j]);
      while (!col.empty() && owner[col.back()] != kNone) xor_into(col, reduced[owner[col.back()]], scratch);
      if (col.empty()) continue;
      const u32 low = col.back();
      owner[low] = static_cast<u32>(j);
      is_pivot[low] = 1;
      negative[j] = 1;
      dgm.pairs.push_back({order[low].dim, order[low].vf, order[j].vf});
      reduced[j] = std::move(col);
    }
    for (std::size_t j = 0; j < n; ++j)
      if (order[j].dim == dim) std::vector<u32>().swap(reduced[j]);
  }
  for (std::size_t p = 0; p < n; ++p)
    if (!negative[p] && !is_pivot[p]) dgm.pairs.push_back({order[p].dim, order[p].vf, -INFINITY});

  std::sort(dgm.pairs.begin(), dgm.pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth_vf != b.birth_vf) return a.birth_vf > b.birth_vf;
    return a.death_vf > b.death_vf;
  });
  return dgm;
}

PersistenceDiagram compute_diagram(const FiltrationComplex& complex) {
  return reduce(lower_star_filtration(complex), complex.dimension);
}

Betti betti_at(const PersistenceDiagram& dgm, double t) {
  Betti b{0, 0, 0};
  for (const auto& p : dgm.pairs)
    if (p.dim < 3 && p.birth_vf >= t && p.death_vf < t) ++b[p.dim];
  return b;
}

long euler_at(const FiltrationComplex& cx, double t) {
  const auto& vf = cx.vertex_vf;
  long chi = 0;
  for (double v : vf) chi += v >= t;
  for (const auto& e : cx.edges) chi -= std::min(vf[e[0]], vf[e[1]]) >= t;
  for (const auto& f : cx.triangles) chi += std::min({vf[f[0]], vf[f[1]], vf[f[2]]}) >= t;
  for (const auto& f : cx.tets) chi -= std::min({vf[f[0]], vf[f[1]], vf[f[2]], vf[f[3]]}) >= t;
  return chi;
}

std::vector<BettiStep> betti_curve(const PersistenceDiagram& dgm) {
  // alive(t) = #{birth >= t} - #{death >= t}, since death <= birth in vf.
  std::array<std::vector<double>, 3> births, deaths;
  std::vector<double> values;
  for (const auto& p : dgm.pairs) {
    if (p.dim > 2 || p.birth_vf == p.death_vf) continue;
    births[p.dim].push_back(p.birth_vf);
    values.push_back(p.birth_vf);
    if (!p.essential()) {
      deaths[p.dim].push_back(p.death_vf);
      values.push_back(p.death_vf);
    }
  }
  for (int d = 0; d < 3; ++d) {
    std::sort(births[d].begin(), births[d].end());
    std::sort(deaths[d].begin(), deaths[d].end());
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty() || values.back() > 0.0) values.push_back(0.0);

  auto at_least = [](const std::vector<double>& v, double t) {
    return static_cast<int>(v.end() - std::lower_bound(v.begin(), v.end(), t));
  };
  std::vector<BettiStep> curve;
  curve.reserve(values.size());
  for (double t : values) {
    BettiStep s{t, {}};
    for (int d = 0; d < 3; ++d) s.betti[d] = at_least(births[d], t) - at_least(deaths[d], t);
    curve.push_back(s);
  }
  return curve;
}

namespace {

std::string fmt_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& dgm) {
  out << "dim,birth,death\n";
  for (const auto& p : dgm.pairs) out << p.dim << ',' << fmt_number(p.birth()) << ',' << fmt_number(p.death()) << '\n';
}

void write_betti_curve_csv(std::ostream& out, const PersistenceDiagram& dgm) {
  out << (dgm.dimension == 3 ? "vf,B0,B1,B2\n" : "vf,B0,B1\n");
  for (const auto& s : betti_curve(dgm)) {
    out << fmt_number(s.vf) << ',' << s.betti[0] << ',' << s.betti[1];
    if (dgm.dimension == 3) out << ',' << s.betti[2];
    out << '\n';
  }
}

void write_diagram_svg(std::ostream& out, const PersistenceDiagram& dgm, int size) {
  // Zero-persistence pairs sit on the diagonal and are not drawn.
  static const char* kColor[3] = {"#1f77b4", "#d62728", "#2ca02c"};
  double fmax = 1.0;
  for (const auto& p : dgm.pairs) {
    fmax = std::max(fmax, p.birth());
    if (!p.essential()) fmax = std::max(fmax, p.death());
  }
  const double margin = 40.0;
  const double plot = size - 2 * margin;
  const double inf_y = margin - 12.0;
  auto px = [&](double f) { return margin + plot * f / fmax; };
  auto py = [&](double f) { return size - margin - plot * f / fmax; };
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  std::snprintf(buf, sizeof(buf),
                "<line class=\"diagonal\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888\"/>\n", px(0),
                py(0), px(fmax), py(fmax));
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<line class=\"infinity\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#ccc\" "
                "stroke-dasharray=\"4 3\"/>\n",
                px(0), inf_y, px(fmax), inf_y);
  out << buf;
  out << "<text x=\"" << size / 2 << "\" y=\"" << size - 8 << "\" text-anchor=\"middle\">birth (1 - vf)</text>\n";
  for (const auto& p : dgm.pairs) {
    if (p.dim > 2 || p.birth_vf == p.death_vf) continue;
    const double y = p.essential() ? inf_y : py(p.death());
    std::snprintf(buf, sizeof(buf), "<circle class=\"dim%d\" cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>\n", p.dim,
                  px(p.birth()), y, kColor[p.dim]);
    out << buf;
  }
  out << "</svg>\n";
}

}  // namespace vfmesh
