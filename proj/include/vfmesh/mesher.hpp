#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vfmesh/grid.hpp"
#include "vfmesh/persistence.hpp"

namespace vfmesh {

enum class Resolution { connect, separate, unresolved };
enum class ConflictPolicy { connect, separate, majority };
enum class MeshFormat { obj, vtk };

std::string_view to_string(Resolution r);
std::string_view to_string(ConflictPolicy p);
ConflictPolicy parse_conflict_policy(std::string_view name);
MeshFormat parse_mesh_format(std::string_view name);

/// Non-manifold configuration at a lattice vertex (2D, or 3D vertex pinch)
/// or along a lattice edge (3D).
struct Pinch {
  Subcell location;
  int case_id = 0;                   ///< 1 in 2D; 1..11 in 3D
  std::vector<std::uint32_t> cells;  ///< occupied cells touching the pinch
  std::vector<std::uint32_t> neighborhood;  ///< all in-grid cells of the 2^d block
  double subcell_vf = 0.0;
  Resolution classified = Resolution::unresolved;
  Resolution resolution = Resolution::unresolved;
};

/// 3D pinch taxonomy over one 2x2x2 block. Bit p of a pattern is cell
/// (p&1, p>>1&1, p>>2&1) of the block.
struct BlockCase {
  int case_id = 0;              ///< 0 if the block is manifold
  int pinched_half_edges = 0;   ///< of the six lattice edges leaving the centre
  bool vertex_pinch = false;
};
BlockCase classify_block(std::uint8_t pattern);
/// Canonical representative (smallest pattern value) under the 48 cube symmetries.
std::uint8_t canonical_block(std::uint8_t pattern);

/// Occupancy on a lattice that is `refine` times finer than the background
/// grid (1 for a plain extraction, 3 once 2D templates are applied).
class CubicalMesh {
 public:
  CubicalMesh() = default;
  CubicalMesh(Grid grid, std::vector<std::uint8_t> retained);

  const Grid& grid() const { return grid_; }
  int dimension() const { return grid_.dimension; }
  int refine() const { return refine_; }
  Index3 fine_extents() const { return {grid_.extents[0] * refine_, grid_.extents[1] * refine_, grid_.dimension == 3 ? grid_.extents[2] * refine_ : 1}; }
  std::size_t fine_id(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * grid_.extents[1] * refine_ + j) * (static_cast<std::size_t>(grid_.extents[0]) * refine_) + i;
  }
  bool filled(int i, int j, int k = 0) const {
    const Index3 e = fine_extents();
    if (i < 0 || j < 0 || k < 0 || i >= e[0] || j >= e[1] || k >= e[2]) return false;
    return fine_[fine_id(i, j, k)] != 0;
  }
  const std::vector<std::uint8_t>& occupancy() const { return fine_; }
  /// Cells retained by thresholding, before any repair (per background cell).
  const std::vector<std::uint8_t>& retained() const { return retained_; }
  std::size_t retained_count() const;

  /// Switch to the 3x3 refined representation (2D only); idempotent.
  void refine_to_ninths();
  void set_fine(int i, int j, bool v);
  void set_filled(std::size_t fine_id, bool v) { fine_[fine_id] = v; }

  /// Face-adjacency component label per fine cell (-1 if empty); labels are
  /// numbered in scan order.
  std::vector<int> label_components(int* count = nullptr) const;
  /// Number of distinct background cells touched by each component.
  std::vector<int> component_cell_counts(const std::vector<int>& labels, int count) const;
  int component_count() const;

 private:
  Grid grid_;
  int refine_ = 1;
  std::vector<std::uint8_t> retained_;
  std::vector<std::uint8_t> fine_;
};

CubicalMesh extract_mesh(const VolumeFractionField& field, double vf_threshold);

/// Every pinch of the mesh's current occupancy, each location exactly once.
/// For refined meshes locations are in refined-lattice coordinates.
std::vector<Pinch> detect_pinches(const CubicalMesh& mesh);

Resolution classify_pinch(const Pinch& pinch, const VolumeFractionField& field, double vf_threshold);
void classify_pinches(std::vector<Pinch>& pinches, const VolumeFractionField& field, double vf_threshold);

/// Group pinches whose 2^d blocks share a cell and make each group agree.
/// Returns the number of pinches whose resolution differs from their classification.
int resolve_adjacent_conflicts(std::vector<Pinch>& pinches, ConflictPolicy policy);

/// Apply connect/separate templates on the 3x3 split of each affected cell:
/// separate removes the corner ninth at the pinch from occupied cells,
/// connect adds it to the empty ones.
void apply_pinch_templates_2d(CubicalMesh& mesh, const std::vector<Pinch>& pinches);
/// Pull apart face-adjacent retained cells whose shared edge is exterior.
void separate_exterior_faces_2d(CubicalMesh& mesh, const VolumeFractionField& field, double vf_threshold);

/// Bridge components through empty cells across interior edges. Returns the
/// number of bridges added (2D). In 3D the mesh is unchanged and the return
/// value counts bridges that would be built.
int join_archipelago(CubicalMesh& mesh, const VolumeFractionField& field, double vf_threshold);

/// Delete components touching fewer than `min_cells` background cells.
/// Returns the number of components removed.
int remove_islands(CubicalMesh& mesh, int min_cells);

struct MeshOptions {
  double vf_threshold = 0.5;
  bool antialias = true;
  bool join = true;                   ///< archipelago bridging (antialias only)
  bool separate_faces = false;        ///< split retained neighbours across exterior edges
  int min_cells = 1;
  ConflictPolicy policy = ConflictPolicy::separate;
};

struct MeshResult {
  CubicalMesh mesh;
  std::vector<Pinch> pinches;           ///< detected on the thresholded grid
  std::vector<int> components_before;   ///< cell counts per component
  std::vector<int> components_after;
  int conflict_overrides = 0;
  int bridges = 0;
  int islands_removed = 0;
  std::size_t residual_pinches = 0;     ///< pinches left after repair (2D: always 0)
  bool warned_min_cells = false;
};

MeshResult run_mesher(const VolumeFractionField& field, const MeshOptions& opt);

/// Introduced-vertex override reproducing pinch resolutions in the dual complex.
IntroducedOverride resolution_override(const std::vector<Pinch>& pinches);

/// Polygonal view of the mesh: whole background cells plus template children.
struct MeshElement {
  std::uint32_t parent = 0;  ///< background cell id
  int child = -1;            ///< ninth index 0..8, -1 for a whole cell
  bool template_child = false;
  int component = -1;
  std::array<std::uint32_t, 8> corners{};  ///< 4 (quad) or 8 (hex) vertex ids
};

struct MeshGeometry {
  int dimension = 2;
  std::vector<Vec3> vertices;
  std::vector<MeshElement> elements;
  bool hanging_nodes = false;
};

MeshGeometry mesh_geometry(const CubicalMesh& mesh);
void write_mesh(std::ostream& out, const MeshGeometry& geo, MeshFormat format);

}  // namespace vfmesh
