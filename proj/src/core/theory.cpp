#include "vfmesh/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "vfmesh/parallel.hpp"

namespace vfmesh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThetaLo = 1.25 * kPi;
constexpr double kThetaHi = 1.5 * kPi;
// Slack for evaluating exactly on a regime boundary.
constexpr double kRegimeTol = 1e-12;

void check_common(double theta, double L, double ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) fail(ErrorKind::bad_input, "cell size must be positive");
  if (!(L >= 0.0) || !std::isfinite(L)) fail(ErrorKind::bad_input, "gap width must be non-negative");
  if (!std::isfinite(theta)) fail(ErrorKind::bad_input, "theta must be finite");
}

nlohmann::json num_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

double cell_radius(double ell) { return std::numbers::sqrt2 * ell / 2.0; }

double a1_closed_form(double theta, double L, double ell) {
  const double r = cell_radius(ell);
  const double c = std::cos(theta), s = std::sin(theta);
  return r * (L + r * c + r * s) / (c + s);
}

double a2_closed_form(double theta, double L, double ell) {
  const double r = cell_radius(ell);
  const double t = L / 2.0 + r * std::sin(theta);
  return -t * t / std::cos(2.0 * theta);
}

double area_A1(double theta, double L, double ell) {
  check_common(theta, L, ell);
  if (theta < kThetaLo - kRegimeTol || theta >= kThetaHi)
    fail(ErrorKind::bad_input, "A1 needs theta in [5pi/4, 3pi/2)");
  if (L / 2.0 > -cell_radius(ell) * std::cos(theta) + kRegimeTol * ell)
    fail(ErrorKind::bad_input, "A1 needs L/2 <= -r cos(theta)");
  return a1_closed_form(theta, L, ell);
}

double area_A2(double theta, double L, double ell) {
  check_common(theta, L, ell);
  if (theta <= kThetaLo || theta > kThetaHi + kRegimeTol)
    fail(ErrorKind::bad_input, "A2 needs theta in (5pi/4, 3pi/2]");
  if (L / 2.0 < -cell_radius(ell) * std::cos(theta) - kRegimeTol * ell)
    fail(ErrorKind::bad_input, "A2 needs L/2 >= -r cos(theta)");
  // Past the cell's rightmost vertex the closed form squares a negative height.
  if (L / 2.0 >= -cell_radius(ell) * std::sin(theta)) return 0.0;
  return a2_closed_form(theta, L, ell);
}

bool gap_material(const Vec3& p, double L) { return p.x <= -L / 2.0 || p.x >= L / 2.0; }

GeometrySoup gap_soup(double L, double extent) {
  const double a = L / 2.0, b = a + extent;
  std::vector<Segment2> segs;
  auto rect = [&](double x0, double x1) {
    const Vec3 p[4] = {{x0, -extent}, {x1, -extent}, {x1, extent}, {x0, extent}};
    for (int q = 0; q < 4; ++q) segs.push_back({p[q], p[(q + 1) % 4]});
  };
  rect(-b, -a);
  rect(a, b);
  return GeometrySoup::from_segments(std::move(segs));
}

Grid gap_grid(double ell, double theta, double offset_x, double offset_y, int window) {
  Grid g;
  g.dimension = 2;
  g.cell_size = ell;
  g.rotation = Mat3::rotation_z(theta - kThetaLo);
  const double half = window / 2.0;
  g.origin = g.rotation * Vec3{(-half + offset_x) * ell, (-half + offset_y) * ell, 0.0};
  g.extents = {window, window, 1};
  return g;
}

namespace {

// World x of every sample of the lattice, one row at a time. For rotations
// in [0, pi/4] each row is non-decreasing, so the material of a row is a
// prefix plus a suffix found by binary search.
class GapRows {
 public:
  GapRows(const Grid& grid, int s) : grid_(grid), s_(s) {
    check_samples_per_axis(s);
    if (grid.dimension != 2) fail(ErrorKind::bad_input, "gap field is two-dimensional");
    nx_ = grid.extents[0] * s;
    ny_ = grid.extents[1] * s;
    const double h = grid.cell_size / s;
    x_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int my = 0; my < ny_; ++my) {
      double* row = &x_[static_cast<std::size_t>(my) * nx_];
      for (int mx = 0; mx < nx_; ++mx) row[mx] = grid.to_world(Vec3{(mx + 0.5) * h, (my + 0.5) * h, 0.0}).x;
      sorted_ = sorted_ && std::is_sorted(row, row + nx_);
    }
  }

  VolumeFractionField field(double L) const {
    const int half = s_ / 2, nbx = 2 * grid_.extents[0];
    std::vector<double> sums(static_cast<std::size_t>(nbx) * 2 * grid_.extents[1], 0.0);
    // Whole blocks of a row go through a difference array, partial ones directly.
    std::vector<int> diff(nbx + 1);
    int kl = 0, kr = 0;  // left material is row[0, kl), right is row[kr, nx)
    for (int by = 0; by < 2 * grid_.extents[1]; ++by) {
      double* out = &sums[static_cast<std::size_t>(by) * nbx];
      std::fill(diff.begin(), diff.end(), 0);
      for (int my = by * half; my < (by + 1) * half; ++my) {
        const double* row = &x_[static_cast<std::size_t>(my) * nx_];
        if (!sorted_) {
          for (int mx = 0; mx < nx_; ++mx) out[mx / half] += gap_material(Vec3{row[mx], 0.0, 0.0}, L);
          continue;
        }
        // Consecutive rows shift by at most a column, so walk from the last boundary.
        while (kl < nx_ && row[kl] <= -L / 2.0) ++kl;
        while (kl > 0 && row[kl - 1] > -L / 2.0) --kl;
        while (kr < nx_ && row[kr] < L / 2.0) ++kr;
        while (kr > 0 && row[kr - 1] >= L / 2.0) --kr;
        const int kr_eff = std::max(kl, kr);
        diff[0] += half;
        diff[kl / half] -= half;
        if (kl % half) out[kl / half] += kl % half;
        diff[(kr_eff + half - 1) / half] += half;
        diff[nbx] -= half;
        if (kr_eff % half) out[kr_eff / half] += half - kr_eff % half;
      }
      int run = 0;
      for (int bx = 0; bx < nbx; ++bx) out[bx] += run += diff[bx];
    }
    return VolumeFractionField::from_blocks(grid_, s_, sums);
  }

 private:
  const Grid& grid_;
  int s_;
  int nx_ = 0, ny_ = 0;
  bool sorted_ = true;
  std::vector<double> x_;
};

GapOutcome classify_labels(const Grid& grid, const CubicalMesh& mesh, const std::vector<int>& labels, double L) {
  const int r = mesh.refine();
  const double deep = L / 2.0 + cell_radius(grid.cell_size);
  std::vector<char> left;
  std::vector<int> right;
  for (int j = 0; j < grid.extents[1]; ++j)
    for (int i = 0; i < grid.extents[0]; ++i) {
      const double x = grid.cell_center(i, j).x;
      if (x > -deep && x < deep) continue;
      const int lab = labels[mesh.fine_id(r * i + r / 2, r * j + r / 2)];
      if (lab < 0) continue;
      if (x <= -deep) {
        if (static_cast<int>(left.size()) <= lab) left.resize(lab + 1, 0);
        left[lab] = 1;
      } else {
        right.push_back(lab);
      }
    }
  for (int lab : right)
    if (lab < static_cast<int>(left.size()) && left[lab]) return GapOutcome::closed;
  return GapOutcome::open;
}

// run_mesher with joining off and min_cells = 1, minus the bookkeeping the
// sweep does not need.
GapOutcome sweep_outcome(const Grid& grid, const VolumeFractionField& field, double L, bool antialias,
                         int* components) {
  CubicalMesh mesh = extract_mesh(field, 0.5);
  if (antialias) {
    auto pinches = detect_pinches(mesh);
    classify_pinches(pinches, field, 0.5);
    resolve_adjacent_conflicts(pinches, ConflictPolicy::separate);
    apply_pinch_templates_2d(mesh, pinches);
    separate_exterior_faces_2d(mesh, field, 0.5);
  }
  const auto labels = mesh.label_components(components);
  return classify_labels(grid, mesh, labels, L);
}

}  // namespace

VolumeFractionField gap_field(const Grid& grid, int s, double L) { return GapRows(grid, s).field(L); }

GapOutcome classify_gap(const Grid& grid, const MeshResult& result, double L) {
  return classify_labels(grid, result.mesh, result.mesh.label_components(), L);
}

MeshOptions sweep_mesh_options(bool antialias) {
  MeshOptions mo;
  mo.antialias = antialias;
  mo.separate_faces = true;
  mo.join = false;
  mo.min_cells = 1;
  return mo;
}

RegimeReport sweep_gap(const SweepOptions& opt, bool keep_samples) {
  if (opt.L_count < 2 || opt.theta_count < 2 || opt.offset_count < 1)
    fail(ErrorKind::bad_input, "sweep needs at least two L and theta values and one offset");
  if (!(opt.L_min > 0.0) || !(opt.L_max > opt.L_min)) fail(ErrorKind::bad_input, "sweep needs 0 < L_min < L_max");
  if (opt.window < 4) fail(ErrorKind::bad_input, "sweep window must be at least 4 cells");
  if (!opt.with_antialiasing && !opt.without_antialiasing) fail(ErrorKind::bad_input, "sweep has no mode enabled");
  check_samples_per_axis(opt.s);

  RegimeReport rep;
  rep.options = opt;
  rep.step = (opt.L_max - opt.L_min) / (opt.L_count - 1);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> offsets(opt.offset_count);
  for (auto& o : offsets) {
    o.first = unit(rng);
    o.second = unit(rng);
  }
  std::vector<bool> modes;
  if (opt.without_antialiasing) modes.push_back(false);
  if (opt.with_antialiasing) modes.push_back(true);
  const int nm = static_cast<int>(modes.size());

  const std::size_t pairs = static_cast<std::size_t>(opt.theta_count) * opt.offset_count;
  const std::size_t per_pair = static_cast<std::size_t>(opt.L_count) * nm;
  std::vector<SweepSample> all(pairs * per_pair);
  parallel_for(
      pairs,
      [&](std::size_t p0, std::size_t p1) {
        for (std::size_t p = p0; p < p1; ++p) {
          const int t = static_cast<int>(p / opt.offset_count);
          const auto [ox, oy] = offsets[p % opt.offset_count];
          const double theta = kThetaLo + (kThetaHi - kThetaLo) * t / (opt.theta_count - 1);
          const Grid grid = gap_grid(opt.ell, theta, ox, oy, opt.window);
          const GapRows rows(grid, opt.s);
          for (int k = 0; k < opt.L_count; ++k) {
            const double lr = opt.L_min + rep.step * k;
            const double L = lr * opt.ell;
            const VolumeFractionField field = rows.field(L);
            for (int m = 0; m < nm; ++m) {
              int comps = 0;
              const GapOutcome outcome = sweep_outcome(grid, field, L, modes[m], &comps);
              all[p * per_pair + static_cast<std::size_t>(k) * nm + m] = {lr, theta, ox, oy, modes[m], comps, outcome};
            }
          }
        }
      },
      1);

  for (int m = 0; m < nm; ++m) {
    BandSummary band;
    band.antialiased = modes[m];
    band.rows.resize(opt.L_count);
    for (int k = 0; k < opt.L_count; ++k) band.rows[k].L_over_ell = opt.L_min + rep.step * k;
    for (std::size_t p = 0; p < pairs; ++p)
      for (int k = 0; k < opt.L_count; ++k) {
        const auto& smp = all[p * per_pair + static_cast<std::size_t>(k) * nm + m];
        (smp.outcome == GapOutcome::open ? band.rows[k].open : band.rows[k].closed)++;
      }
    for (const auto& row : band.rows) {
      if (row.open > 0 && std::isnan(band.first_open)) band.first_open = row.L_over_ell;
      if (row.closed > 0) band.last_closed = row.L_over_ell;
      if (row.ambiguous()) {
        if (std::isnan(band.ambiguous_min)) band.ambiguous_min = row.L_over_ell;
        band.ambiguous_max = row.L_over_ell;
      }
    }
    rep.bands.push_back(std::move(band));
  }
  if (keep_samples) rep.samples = std::move(all);
  return rep;
}

void write_sweep_csv(std::ostream& out, const RegimeReport& report) {
  out << "L_over_ell,theta,offset_x,offset_y,antialiased,components,classification\n";
  char buf[160];
  for (const auto& s : report.samples) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%d,%d,%s\n", s.L_over_ell, s.theta, s.offset_x,
                  s.offset_y, s.antialiased ? 1 : 0, s.components,
                  s.outcome == GapOutcome::open ? "open" : "closed");
    out << buf;
  }
}

std::string band_summary_json(const RegimeReport& report) {
  const auto& o = report.options;
  nlohmann::json j;
  j["options"] = {{"ell", o.ell},         {"L_min", o.L_min},   {"L_max", o.L_max},
                  {"L_count", o.L_count}, {"theta_count", o.theta_count},
                  {"offset_count", o.offset_count}, {"samples_per_axis", o.s},
                  {"window", o.window},   {"seed", o.seed}};
  j["step"] = report.step;
  j["predicted"] = {{"no_antialiasing", {{"always_closed_below", std::numbers::sqrt2 - 1.0}, {"always_open_above", 1.0}}},
                    {"antialiasing", {{"unambiguous_from", std::numbers::sqrt2 / 2.0}, {"ambiguous_below", 0.5}}}};
  j["modes"] = nlohmann::json::array();
  for (const auto& b : report.bands) {
    nlohmann::json m;
    m["antialiased"] = b.antialiased;
    m["first_open"] = num_or_null(b.first_open);
    m["last_closed"] = num_or_null(b.last_closed);
    m["ambiguous_min"] = num_or_null(b.ambiguous_min);
    m["ambiguous_max"] = num_or_null(b.ambiguous_max);
    m["rows"] = nlohmann::json::array();
    for (const auto& r : b.rows)
      m["rows"].push_back({{"L_over_ell", r.L_over_ell},
                           {"open", r.open},
                           {"closed", r.closed},
                           {"classification", r.ambiguous() ? "ambiguous" : (r.open ? "open" : "closed")}});
    j["modes"].push_back(std::move(m));
  }
  return j.dump(2);
}

GeometrySoup nonconvergence_soup(double c) {
  std::vector<Segment2> segs;
  auto poly = [&](std::initializer_list<Vec3> pts) {
    const std::vector<Vec3> p(pts);
    for (std::size_t q = 0; q < p.size(); ++q) segs.push_back({p[q], p[(q + 1) % p.size()]});
  };
  poly({{c - 3, 0}, {c, 0}, {c - 2.0 / 3.0, 2}, {c - 3, 2}});
  poly({{c, 0}, {c + 3, 0}, {c + 3, 2}, {c + 2, 2}});
  return GeometrySoup::from_segments(std::move(segs));
}

std::vector<NonconvergenceLevel> nonconvergence_case(double corner_x, int levels, int s, int vf_samples) {
  if (levels < 1 || levels > 10) fail(ErrorKind::bad_input, "levels must be in [1, 10]");
  if (corner_x < -0.5 || corner_x > 1.5) fail(ErrorKind::bad_input, "corner must lie in [-0.5, 1.5]");
  check_samples_per_axis(s);
  check_samples_per_axis(vf_samples);
  const GeometrySoup soup = nonconvergence_soup(corner_x);
  std::vector<NonconvergenceLevel> out;
  for (int m = 0; m < levels; ++m) {
    NonconvergenceLevel lv;
    lv.level = m;
    lv.ell = std::ldexp(1.0, -m);
    Grid g;
    g.dimension = 2;
    g.cell_size = lv.ell;
    g.origin = {-4.0, -1.0, 0.0};
    g.extents = {9 << m, 4 << m, 1};
    const VolumeFractionField field = compute_field(soup, g, s);
    lv.b0 = extract_mesh(field, 0.5).component_count();
    const int i = static_cast<int>(std::floor((corner_x + 4.0) / lv.ell));
    const int j = 1 << m;  // first row above y = 0
    const auto pts = sample_points(g, Subcell{full_mask(2), {i, j, 0}}, vf_samples);
    double acc = 0.0;
    for (const Vec3& p : pts) acc += winding_number(p, soup).value;
    lv.corner_vf = acc / static_cast<double>(pts.size());
    out.push_back(lv);
  }
  return out;
}

std::string nonconvergence_json(double corner_x, const std::vector<NonconvergenceLevel>& levels) {
  nlohmann::json j;
  j["corner_x"] = corner_x;
  j["levels"] = nlohmann::json::array();
  for (const auto& lv : levels)
    j["levels"].push_back({{"level", lv.level}, {"ell", lv.ell}, {"B0", lv.b0}, {"corner_vf", lv.corner_vf}});
  return j.dump(2);
}

namespace {
const Vec3 kWedgeApex{0.3718, 0.2291, 0.0};
constexpr double kWedgeSide = 12.0 * kPi / 180.0;
}  // namespace

GeometrySoup wedge_soup(double alpha, double length) {
  const Vec3 a = kWedgeApex;
  const Vec3 p{a.x + length * std::cos(kWedgeSide), a.y + length * std::sin(kWedgeSide)};
  const Vec3 q{a.x + length * std::cos(kWedgeSide + alpha), a.y + length * std::sin(kWedgeSide + alpha)};
  return GeometrySoup::from_segments({{a, p}, {p, q}, {q, a}});
}

WedgeReport wedge_case(double alpha, double ell, int s, int min_cells) {
  if (!(alpha > 0.0) || !(alpha < kPi / 2.0)) fail(ErrorKind::bad_input, "wedge angle must be in (0, pi/2)");
  if (!(ell > 0.0)) fail(ErrorKind::bad_input, "cell size must be positive");
  check_samples_per_axis(s);
  WedgeReport rep;
  rep.alpha = alpha;
  rep.ell = ell;
  rep.s = s;
  rep.min_cells = min_cells;
  const double length = 30.0 * ell;
  const GeometrySoup soup = wedge_soup(alpha, length);
  const BBox box = soup.bbox();
  Grid g;
  g.dimension = 2;
  g.cell_size = ell;
  g.origin = {(std::floor(box.lo.x / ell) - 2) * ell, (std::floor(box.lo.y / ell) - 2) * ell, 0.0};
  g.extents = {static_cast<int>(std::ceil((box.hi.x - g.origin.x) / ell)) + 2,
               static_cast<int>(std::ceil((box.hi.y - g.origin.y) / ell)) + 2, 1};
  const VolumeFractionField field = compute_field(soup, g, s);

  const CubicalMesh plain = extract_mesh(field, 0.5);
  int n = 0;
  const auto labels = plain.label_components(&n);
  const auto sizes = plain.component_cell_counts(labels, n);
  rep.components_before = n;
  rep.band_lo = 0.5 / std::tan(alpha) - 2.0;
  rep.band_hi = 1.0 / std::tan(alpha) + 2.0;
  if (n > 1) {
    const int main = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<WedgeIsland> isl(n, WedgeIsland{0, INFINITY, 0.0});
    for (int j = 0; j < g.extents[1]; ++j)
      for (int i = 0; i < g.extents[0]; ++i) {
        const int lab = labels[plain.fine_id(i, j)];
        if (lab < 0 || lab == main) continue;
        const double d = norm(g.cell_center(i, j) - kWedgeApex) / ell;
        auto& w = isl[lab];
        ++w.cells;
        w.min_distance = std::min(w.min_distance, d);
        w.max_distance = std::max(w.max_distance, d);
      }
    for (int c = 0; c < n; ++c) {
      if (c == main) continue;
      rep.islands.push_back(isl[c]);
      if (isl[c].min_distance < rep.band_lo || isl[c].max_distance > rep.band_hi) rep.islands_in_band = false;
    }
  }

  MeshOptions mo;
  mo.antialias = true;
  mo.join = true;
  mo.min_cells = min_cells;
  const MeshResult res = run_mesher(field, mo);
  rep.components_after = static_cast<int>(res.components_after.size());
  rep.bridges = res.bridges;
  rep.islands_removed = res.islands_removed;
  return rep;
}

std::string wedge_json(const WedgeReport& r) {
  nlohmann::json j;
  j["alpha"] = r.alpha;
  j["ell"] = r.ell;
  j["samples_per_axis"] = r.s;
  j["min_cells"] = r.min_cells;
  j["components_before"] = r.components_before;
  j["band"] = {r.band_lo, r.band_hi};
  j["islands_in_band"] = r.islands_in_band;
  j["islands"] = nlohmann::json::array();
  for (const auto& w : r.islands)
    j["islands"].push_back({{"cells", w.cells}, {"min_distance", w.min_distance}, {"max_distance", w.max_distance}});
  j["components_after"] = r.components_after;
  j["bridges"] = r.bridges;
  j["islands_removed"] = r.islands_removed;
  return j.dump(2);
}

}  // namespace vfmesh
