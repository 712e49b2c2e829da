#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vfmesh/geometry.hpp"
#include "vfmesh/grid.hpp"
#include "vfmesh/mesher.hpp"

namespace vfmesh {

/// Circumradius of a grid cell, r = sqrt(2) * ell / 2.
double cell_radius(double ell);

/// Closed-form areas of C ∩ {x >= L/2} for the cell C of size ell centred at
/// the origin with one vertex at angle theta. No domain checks.
double a1_closed_form(double theta, double L, double ell);
double a2_closed_form(double theta, double L, double ell);

/// Checked versions: A1 on the parallelogram regime L/2 <= -r cos(theta),
/// theta in [5pi/4, 3pi/2); A2 on the triangle regime, theta in (5pi/4, 3pi/2].
double area_A1(double theta, double L, double ell);
double area_A2(double theta, double L, double ell);

/// Gap between the half-planes x <= -L/2 and x >= L/2 (boundaries count as material).
bool gap_material(const Vec3& p, double L);
/// The same gap as two closed CCW rectangles extending `extent` from the gap.
GeometrySoup gap_soup(double L, double extent);

/// Background grid of `window` x `window` cells around the gap centre, rotated
/// by theta - 5pi/4 and shifted by `offset` (in cells).
Grid gap_grid(double ell, double theta, double offset_x, double offset_y, int window);

/// Exact sample count of the gap indicator on the global lattice, one row of
/// samples at a time. Identical to compute_field(gap_material, grid, s).
VolumeFractionField gap_field(const Grid& grid, int s, double L);

enum class GapOutcome { open, closed };

/// Closed iff some component holds a cell lying wholly on each side of the gap.
GapOutcome classify_gap(const Grid& grid, const MeshResult& result, double L);

/// Mesher settings of the sweep: with anti-aliasing this is pinch templates
/// plus face separation; joining is off because it bridges gaps on purpose.
MeshOptions sweep_mesh_options(bool antialias);

struct SweepOptions {
  double ell = 1.0;
  double L_min = 0.25;  ///< in units of ell
  double L_max = 1.25;
  int L_count = 128;
  int theta_count = 64;  ///< over [5pi/4, 3pi/2], endpoints included
  int offset_count = 64;
  int s = 64;
  int window = 8;
  std::uint64_t seed = 1;
  bool with_antialiasing = true;
  bool without_antialiasing = true;
};

struct SweepSample {
  double L_over_ell = 0.0;
  double theta = 0.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  bool antialiased = false;
  int components = 0;
  GapOutcome outcome = GapOutcome::open;
};

struct BandRow {
  double L_over_ell = 0.0;
  int open = 0;
  int closed = 0;
  bool ambiguous() const { return open > 0 && closed > 0; }
};

struct BandSummary {
  bool antialiased = false;
  std::vector<BandRow> rows;
  double first_open = NAN;       ///< smallest L/ell with an open outcome
  double last_closed = NAN;      ///< largest L/ell with a closed outcome
  double ambiguous_min = NAN;    ///< smallest ambiguous L/ell
  double ambiguous_max = NAN;
};

struct RegimeReport {
  SweepOptions options;
  double step = 0.0;  ///< L spacing, in units of ell
  std::vector<SweepSample> samples;
  std::vector<BandSummary> bands;
};

RegimeReport sweep_gap(const SweepOptions& opt, bool keep_samples = true);
void write_sweep_csv(std::ostream& out, const RegimeReport& report);
std::string band_summary_json(const RegimeReport& report);

/// Two blocks meeting at (corner_x, 0) with sides of slope -3 and 1.
GeometrySoup nonconvergence_soup(double corner_x);

struct NonconvergenceLevel {
  int level = 0;
  double ell = 1.0;
  int b0 = 0;              ///< components at threshold 1/2 before repair
  double corner_vf = 0.0;  ///< cell holding the corner, sampled at vf_samples
};

std::vector<NonconvergenceLevel> nonconvergence_case(double corner_x, int levels, int s = 16, int vf_samples = 32);
std::string nonconvergence_json(double corner_x, const std::vector<NonconvergenceLevel>& levels);

struct WedgeIsland {
  int cells = 0;
  double min_distance = 0.0;  ///< from the apex to the nearest / farthest cell centre, in cells
  double max_distance = 0.0;
};

struct WedgeReport {
  double alpha = 0.0;
  double ell = 1.0;
  int s = 4;
  int min_cells = 3;
  int components_before = 0;
  std::vector<WedgeIsland> islands;
  double band_lo = 0.0;  ///< 0.5 cot(alpha) - 2, in cells
  double band_hi = 0.0;  ///< cot(alpha) + 2
  bool islands_in_band = true;
  int components_after = 0;  ///< after anti-aliasing, joining and island removal
  int bridges = 0;
  int islands_removed = 0;
};

/// Thin wedge of opening angle alpha with a generic apex and orientation.
GeometrySoup wedge_soup(double alpha, double length);
WedgeReport wedge_case(double alpha, double ell = 1.0, int s = 4, int min_cells = 3);
std::string wedge_json(const WedgeReport& report);

}  // namespace vfmesh
