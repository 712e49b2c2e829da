#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vfmesh/grid.hpp"

namespace vfmesh {

/// Dual simplicial complex of a volume-fraction field. Vertex values are
/// stored as volume fractions; the filtration value is f = 1 - vf, so a
/// simplex with larger vf enters earlier.
struct FiltrationComplex {
  int dimension = 2;
  Index3 extents{1, 1, 1};        ///< primal grid extents
  std::size_t cell_vertices = 0;  ///< vertices [0, cell_vertices) are grid cells, by cell id
  std::vector<double> vertex_vf;
  std::vector<Subcell> introduced;  ///< primal entity of each introduced vertex
  std::vector<std::array<std::uint32_t, 2>> edges;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<std::array<std::uint32_t, 4>> tets;

  std::size_t vertex_count() const { return vertex_vf.size(); }
  std::size_t simplex_count() const { return vertex_vf.size() + edges.size() + triangles.size() + tets.size(); }
  /// Cell vertices surrounding introduced vertex `k` (its clamp window).
  std::vector<std::uint32_t> introduced_neighbors(std::size_t k) const;
};

/// Hook to replace an introduced vertex value: receives the primal entity and
/// the clamped value. The result is clamped to the same window again.
using IntroducedOverride = std::function<double(const Subcell&, double clamped)>;

FiltrationComplex dualize_2d(const VolumeFractionField& field, const IntroducedOverride& adjust = {});
FiltrationComplex dualize_3d(const VolumeFractionField& field, const IntroducedOverride& adjust = {});
FiltrationComplex dualize(const VolumeFractionField& field, const IntroducedOverride& adjust = {});

struct FilteredSimplex {
  double vf = 0.0;  ///< entry value = min vf over the vertices
  int dim = 0;
  std::array<std::uint32_t, 4> v{};  ///< sorted vertex ids, unused slots zero
};

/// Simplices ordered by f ascending (vf descending), then dimension, then vertex ids.
std::vector<FilteredSimplex> lower_star_filtration(const FiltrationComplex& complex);

struct PersistencePair {
  int dim = 0;
  double birth_vf = 0.0;
  double death_vf = 0.0;  ///< -infinity for essential classes
  bool essential() const { return std::isinf(death_vf); }
  double birth() const { return 1.0 - birth_vf; }
  double death() const { return essential() ? INFINITY : 1.0 - death_vf; }
};

struct PersistenceDiagram {
  int dimension = 2;  ///< ambient dimension; Betti numbers run over 0..dimension-1
  std::vector<PersistencePair> pairs;
};

PersistenceDiagram reduce(const std::vector<FilteredSimplex>& order, int ambient_dim);
PersistenceDiagram compute_diagram(const FiltrationComplex& complex);

using Betti = std::array<int, 3>;

/// Classes alive when every simplex with vf >= threshold is present.
Betti betti_at(const PersistenceDiagram& diagram, double vf_threshold);
/// Euler characteristic of the subcomplex {simplices with vf >= threshold}.
long euler_at(const FiltrationComplex& complex, double vf_threshold);

struct BettiStep {
  double vf = 0.0;
  Betti betti{};
};

/// Betti numbers at each distinct pair endpoint, vf descending. Between two
/// consecutive rows the counts equal those of the upper row.
std::vector<BettiStep> betti_curve(const PersistenceDiagram& diagram);

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
void write_diagram_svg(std::ostream& out, const PersistenceDiagram& diagram, int size_px = 480);
void write_betti_curve_csv(std::ostream& out, const PersistenceDiagram& diagram);

}  // namespace vfmesh
