#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vfmesh/common.hpp"
#include "vfmesh/geometry.hpp"

namespace vfmesh {

using Index3 = std::array<int, 3>;

/// Uniform lattice of d-cubes with edge length `cell_size`. A point with
/// lattice coordinates q (in units of length) maps to origin + rotation * q.
struct Grid {
  int dimension = 2;
  double cell_size = 1.0;
  Vec3 origin;
  Mat3 rotation;
  Index3 extents{1, 1, 1};  ///< cells per axis; the z extent is 1 in 2D

  std::size_t cell_count() const {
    return static_cast<std::size_t>(extents[0]) * extents[1] * extents[2];
  }
  Vec3 to_world(const Vec3& local) const { return origin + rotation * local; }
  Vec3 to_local(const Vec3& world) const { return rotation.transposed() * (world - origin); }
  /// World position of lattice vertex (i, j, k).
  Vec3 vertex_position(int i, int j, int k = 0) const {
    return to_world(Vec3{i * cell_size, j * cell_size, k * cell_size});
  }
  Vec3 cell_center(int i, int j, int k = 0) const {
    const double z = dimension == 3 ? (k + 0.5) * cell_size : 0.0;
    return to_world(Vec3{(i + 0.5) * cell_size, (j + 0.5) * cell_size, z});
  }
  bool in_cells(int i, int j, int k = 0) const {
    return i >= 0 && j >= 0 && k >= 0 && i < extents[0] && j < extents[1] && k < extents[2];
  }
  std::size_t cell_id(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * extents[1] + j) * extents[0] + i;
  }
};

struct GridOptions {
  double cell_size = 1.0;
  double rotation = 0.0;  ///< radians; about +z in 2D, about `axis` in 3D
  Vec3 axis{0.0, 0.0, 1.0};
  Vec3 offset;            ///< lattice shift in the rotated frame (model units)
  int padding = 0;
  std::size_t max_cells = 10'000'000;
};

/// Grid covering the soup's bounding box as seen in the rotated frame.
Grid build_grid(const GeometrySoup& soup, const GridOptions& opt);

/// A lattice entity. Bit a of `mask` set means the entity spans cell index[a]
/// along axis a; clear means it sits on lattice plane index[a]. Mask 0 is a
/// vertex, all bits set is a cell; in 2D the z bit is ignored.
struct Subcell {
  unsigned mask = 0;
  Index3 index{0, 0, 0};
};

/// Entity dimension (0 vertex, 1 edge, 2 face, 3 cell) of a mask.
int subcell_dimension(int grid_dim, unsigned mask);
unsigned full_mask(int grid_dim);

/// Global sample lattice points lying in the fictitious cell centred on `sc`.
std::vector<Vec3> sample_points(const Grid& grid, const Subcell& sc, int s);

/// Mean winding number per cell and per lower-dimensional subcell.
class VolumeFractionField {
 public:
  VolumeFractionField() = default;
  /// Zero-filled field for `grid`; values are usually set via from_blocks or set().
  VolumeFractionField(Grid grid, int s);

  /// Assemble every subcell value from per-block sample sums. Blocks are the
  /// s/2-wide quadrant sub-arrays of each cell, 2n per axis, x fastest.
  static VolumeFractionField from_blocks(const Grid& grid, int s, const std::vector<double>& block_sums);

  const Grid& grid() const { return grid_; }
  int dimension() const { return grid_.dimension; }
  int samples_per_axis() const { return s_; }
  std::size_t on_boundary_samples() const { return on_boundary_; }
  void set_on_boundary_samples(std::size_t n) { on_boundary_ = n; }

  /// Index extents for entities of this mask: n per spanned axis, n+1 otherwise.
  Index3 extents(unsigned mask) const;
  bool contains(const Subcell& sc) const;
  double value(const Subcell& sc) const { return values_[sc.mask][flat(sc)]; }
  void set(const Subcell& sc, double v) { values_[sc.mask][flat(sc)] = v; }

  double cell(int i, int j, int k = 0) const { return value({full_mask(grid_.dimension), {i, j, k}}); }
  double vertex(int i, int j, int k = 0) const { return value({0u, {i, j, k}}); }

  const std::vector<double>& values(unsigned mask) const { return values_[mask]; }
  std::vector<double>& values(unsigned mask) { return values_[mask]; }
  double max_cell_value() const;

 private:
  std::size_t flat(const Subcell& sc) const;

  Grid grid_;
  int s_ = 2;
  std::size_t on_boundary_ = 0;
  std::array<std::vector<double>, 8> values_;
};

void check_samples_per_axis(int s);

/// Sample the winding number of `soup` on the global lattice and average.
VolumeFractionField compute_field(const GeometrySoup& soup, const Grid& grid, int s);

/// Same sampling with an arbitrary scalar source (world position -> value).
VolumeFractionField compute_field(const std::function<double(const Vec3&)>& source, const Grid& grid, int s);

/// CSV rows `kind,i,j[,k],axis,value` for every entity, cells first.
void write_field_csv(std::ostream& out, const VolumeFractionField& field);

}  // namespace vfmesh
