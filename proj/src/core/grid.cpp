#include "vfmesh/grid.hpp"

#include <atomic>
#include <cstdio>
#include <ostream>

#include "vfmesh/parallel.hpp"

namespace vfmesh {

void check_samples_per_axis(int s) {
  if (s < 2 || s % 2 != 0)
    fail(ErrorKind::bad_input, "samples per axis must be an even integer >= 2 (got " + std::to_string(s) + ")");
}

unsigned full_mask(int grid_dim) { return grid_dim == 3 ? 7u : 3u; }

int subcell_dimension(int grid_dim, unsigned mask) {
  int k = 0;
  for (int a = 0; a < grid_dim; ++a) k += (mask >> a) & 1u;
  return k;
}

Grid build_grid(const GeometrySoup& soup, const GridOptions& opt) {
  if (!(opt.cell_size > 0.0)) fail(ErrorKind::bad_input, "cell size must be positive");
  if (opt.padding < 0) fail(ErrorKind::bad_input, "padding must be non-negative");
  if (soup.size() == 0) fail(ErrorKind::bad_input, "cannot build a grid around empty geometry");

  Grid g;
  g.dimension = soup.dimension();
  g.cell_size = opt.cell_size;
  g.rotation = g.dimension == 2 ? Mat3::rotation_z(opt.rotation) : Mat3::axis_angle(opt.axis, opt.rotation);

  // Bounding box in the rotated frame, then snap the lattice to the offset.
  const Mat3 inv = g.rotation.transposed();
  BBox local;
  auto add = [&](const Vec3& p) { local.expand(inv * p); };
  for (const auto& s : soup.segments()) {
    add(s.a);
    add(s.b);
  }
  for (const auto& t : soup.triangles()) {
    add(t.v0);
    add(t.v1);
    add(t.v2);
  }

  const double l = opt.cell_size;
  Vec3 lo;
  double total = 1.0;
  for (int a = 0; a < 3; ++a) {
    if (a >= g.dimension) {
      g.extents[a] = 1;
      continue;
    }
    const double shift = opt.offset[a] - l * std::floor(opt.offset[a] / l);
    lo[a] = local.lo[a] - shift - opt.padding * l;
    const double span = (local.hi[a] - lo[a]) / l;
    const double n = std::max(1.0, std::ceil(span - 1e-9)) + opt.padding;
    total *= n;
    if (total > static_cast<double>(opt.max_cells))
      fail(ErrorKind::bad_input, "grid would exceed the cell cap of " + std::to_string(opt.max_cells) + " cells");
    g.extents[a] = static_cast<int>(n);
  }
  g.origin = g.rotation * lo;
  return g;
}

std::vector<Vec3> sample_points(const Grid& grid, const Subcell& sc, int s) {
  check_samples_per_axis(s);
  const double h = grid.cell_size / s;
  const int half = s / 2;
  std::array<int, 3> m_lo{0, 0, 0}, m_hi{1, 1, 1};
  for (int a = 0; a < grid.dimension; ++a) {
    const int i = sc.index[a];
    const int total = grid.extents[a] * s;
    if ((sc.mask >> a) & 1u) {
      m_lo[a] = i * s;
      m_hi[a] = (i + 1) * s;
    } else {
      m_lo[a] = i * s - half;
      m_hi[a] = i * s + half;
    }
    m_lo[a] = std::max(m_lo[a], 0);
    m_hi[a] = std::min(m_hi[a], total);
  }
  std::vector<Vec3> pts;
  for (int mz = m_lo[2]; mz < m_hi[2]; ++mz)
    for (int my = m_lo[1]; my < m_hi[1]; ++my)
      for (int mx = m_lo[0]; mx < m_hi[0]; ++mx) {
        const double z = grid.dimension == 3 ? (mz + 0.5) * h : 0.0;
        pts.push_back(grid.to_world(Vec3{(mx + 0.5) * h, (my + 0.5) * h, z}));
      }
  return pts;
}

VolumeFractionField::VolumeFractionField(Grid grid, int s) : grid_(std::move(grid)), s_(s) {
  check_samples_per_axis(s);
  const unsigned masks = 1u << grid_.dimension;
  for (unsigned m = 0; m < masks; ++m) {
    const Index3 e = extents(m);
    values_[m].assign(static_cast<std::size_t>(e[0]) * e[1] * e[2], 0.0);
  }
}

Index3 VolumeFractionField::extents(unsigned mask) const {
  Index3 e{1, 1, 1};
  for (int a = 0; a < grid_.dimension; ++a) e[a] = grid_.extents[a] + (((mask >> a) & 1u) ? 0 : 1);
  return e;
}

bool VolumeFractionField::contains(const Subcell& sc) const {
  if (sc.mask >= (1u << grid_.dimension)) return false;
  const Index3 e = extents(sc.mask);
  for (int a = 0; a < 3; ++a)
    if (sc.index[a] < 0 || sc.index[a] >= e[a]) return false;
  return true;
}

std::size_t VolumeFractionField::flat(const Subcell& sc) const {
  const Index3 e = extents(sc.mask);
  return (static_cast<std::size_t>(sc.index[2]) * e[1] + sc.index[1]) * e[0] + sc.index[0];
}

double VolumeFractionField::max_cell_value() const {
  const auto& v = values_[full_mask(grid_.dimension)];
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

VolumeFractionField VolumeFractionField::from_blocks(const Grid& grid, int s, const std::vector<double>& block_sums) {
  VolumeFractionField f(grid, s);
  const int d = grid.dimension;
  Index3 nb{1, 1, 1};
  for (int a = 0; a < d; ++a) nb[a] = 2 * grid.extents[a];
  if (block_sums.size() != static_cast<std::size_t>(nb[0]) * nb[1] * nb[2])
    fail(ErrorKind::internal, "block sum array has the wrong size");
  double per_block = 1.0;
  for (int a = 0; a < d; ++a) per_block *= s / 2;

  const unsigned masks = 1u << d;
  for (unsigned mask = 0; mask < masks; ++mask) {
    const Index3 e = f.extents(mask);
    auto& out = f.values_[mask];
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i) {
          const Index3 idx{i, j, k};
          Index3 lo{0, 0, 0}, hi{1, 1, 1};
          for (int a = 0; a < d; ++a) {
            lo[a] = ((mask >> a) & 1u) ? 2 * idx[a] : 2 * idx[a] - 1;
            hi[a] = lo[a] + 2;
            lo[a] = std::max(lo[a], 0);
            hi[a] = std::min(hi[a], nb[a]);
          }
          double sum = 0.0;
          int count = 0;
          for (int bz = lo[2]; bz < hi[2]; ++bz)
            for (int by = lo[1]; by < hi[1]; ++by)
              for (int bx = lo[0]; bx < hi[0]; ++bx) {
                sum += block_sums[(static_cast<std::size_t>(bz) * nb[1] + by) * nb[0] + bx];
                ++count;
              }
          out[(static_cast<std::size_t>(k) * e[1] + j) * e[0] + i] = sum / (count * per_block);
        }
  }
  return f;
}

namespace {

// Block sums of `eval` over the global lattice, one task per block so the
// summation order (and therefore the result) does not depend on threading.
template <typename Eval>
std::vector<double> sample_blocks(const Grid& grid, int s, Eval&& eval) {
  const int d = grid.dimension;
  const int half = s / 2;
  const double h = grid.cell_size / s;
  Index3 nb{1, 1, 1};
  for (int a = 0; a < d; ++a) nb[a] = 2 * grid.extents[a];
  const std::size_t nblocks = static_cast<std::size_t>(nb[0]) * nb[1] * nb[2];
  std::vector<double> sums(nblocks, 0.0);
  const int hz = d == 3 ? half : 1;
  parallel_for(
      nblocks,
      [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
        const int bx = static_cast<int>(b % nb[0]);
        const int by = static_cast<int>((b / nb[0]) % nb[1]);
        const int bz = static_cast<int>(b / (static_cast<std::size_t>(nb[0]) * nb[1]));
        double acc = 0.0;
        for (int z = 0; z < hz; ++z)
          for (int y = 0; y < half; ++y)
            for (int x = 0; x < half; ++x) {
              const double lz = d == 3 ? (bz * half + z + 0.5) * h : 0.0;
              const Vec3 local{(bx * half + x + 0.5) * h, (by * half + y + 0.5) * h, lz};
              acc += eval(grid.to_world(local));
            }
        sums[b] = acc;
        }
      },
      16);
  return sums;
}

}  // namespace

VolumeFractionField compute_field(const GeometrySoup& soup, const Grid& grid, int s) {
  check_samples_per_axis(s);
  if (soup.dimension() != grid.dimension) fail(ErrorKind::bad_input, "geometry and grid dimensions differ");
  std::atomic<std::size_t> on_boundary{0};
  auto blocks = sample_blocks(grid, s, [&](const Vec3& p) {
    const WindingSample w = winding_number(p, soup);
    if (w.on_boundary) on_boundary.fetch_add(1, std::memory_order_relaxed);
    return w.value;
  });
  auto field = VolumeFractionField::from_blocks(grid, s, blocks);
  field.set_on_boundary_samples(on_boundary.load());
  return field;
}

VolumeFractionField compute_field(const std::function<double(const Vec3&)>& source, const Grid& grid, int s) {
  check_samples_per_axis(s);
  return VolumeFractionField::from_blocks(grid, s, sample_blocks(grid, s, source));
}

void write_field_csv(std::ostream& out, const VolumeFractionField& field) {
  const int d = field.dimension();
  out << (d == 3 ? "kind,i,j,k,axis,value\n" : "kind,i,j,axis,value\n");
  static const char* kAxis = "xyz";
  // Cells first, then faces, edges, vertices.
  std::vector<unsigned> order;
  for (int dim = d; dim >= 0; --dim)
    for (unsigned m = 0; m < (1u << d); ++m)
      if (subcell_dimension(d, m) == dim) order.push_back(m);
  char buf[64];
  for (unsigned mask : order) {
    const int dim = subcell_dimension(d, mask);
    const char* kind = dim == d ? "cell" : dim == 0 ? "vertex" : dim == 1 ? "edge" : "face";
    std::string axis = "-";
    if (dim == 1) {
      for (int a = 0; a < d; ++a)
        if ((mask >> a) & 1u) axis = std::string(1, kAxis[a]);
    } else if (dim == 2 && d == 3) {
      for (int a = 0; a < d; ++a)
        if (!((mask >> a) & 1u)) axis = std::string(1, kAxis[a]);
    }
    const Index3 e = field.extents(mask);
    for (int k = 0; k < e[2]; ++k)
      for (int j = 0; j < e[1]; ++j)
        for (int i = 0; i < e[0]; ++i) {
          std::snprintf(buf, sizeof(buf), "%.17g", field.value({mask, {i, j, k}}));
          out << kind << ',' << i << ',' << j << ',';
          if (d == 3) out << k << ',';
          out << axis << ',' << buf << '\n';
        }
  }
}

}  // namespace vfmesh
