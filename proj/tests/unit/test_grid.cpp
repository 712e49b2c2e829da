#include <gtest/gtest.h>

#include <sstream>

#include "oracles/gen.hpp"
#include "vfmesh/grid.hpp"
#include "vfmesh/theory.hpp"

using namespace vfmesh;

namespace {

GeometrySoup unit_square() {
  return GeometrySoup::from_segments({{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}});
}

double mean_winding(const std::vector<Vec3>& pts, const GeometrySoup& soup) {
  double acc = 0.0;
  for (const auto& p : pts) acc += winding_number(p, soup).value;
  return acc / static_cast<double>(pts.size());
}

}  // namespace

TEST(BuildGrid, Examples) {
  const auto sq = unit_square();
  GridOptions o;
  o.cell_size = 0.5;
  Grid g = build_grid(sq, o);
  EXPECT_EQ(g.extents, (Index3{2, 2, 1}));
  o.cell_size = 0.3;
  EXPECT_EQ(build_grid(sq, o).extents, (Index3{4, 4, 1}));
  o.cell_size = 0.5;
  o.padding = 1;
  g = build_grid(sq, o);
  EXPECT_EQ(g.extents, (Index3{4, 4, 1}));
  EXPECT_NEAR(g.origin.x, -0.5, 1e-12);
}

TEST(BuildGrid, PaddingAddsTwoPerAxis) {
  GridOptions o;
  o.cell_size = 0.25;
  const Index3 base = build_grid(unit_square(), o).extents;
  o.padding = 1;
  const Index3 pad = build_grid(unit_square(), o).extents;
  EXPECT_EQ(pad[0], base[0] + 2);
  EXPECT_EQ(pad[1], base[1] + 2);
}

TEST(BuildGrid, Errors) {
  GridOptions o;
  o.cell_size = 0.0;
  EXPECT_THROW(build_grid(unit_square(), o), Error);
  o.cell_size = 1e-4;
  o.max_cells = 1000;
  EXPECT_THROW(build_grid(unit_square(), o), Error);
  EXPECT_THROW(build_grid(GeometrySoup{}, GridOptions{}), Error);
}

TEST(BuildGrid, RotatedGridCoversGeometry) {
  gen::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto soup = gen::polygon_soup(gen::star_polygon(rng, {rng.uniform(-3, 3), rng.uniform(-3, 3)}, 9, 0.5, 2));
    GridOptions o;
    o.cell_size = rng.uniform(0.1, 0.7);
    o.rotation = rng.uniform(0, 6.28);
    o.offset = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Grid g = build_grid(soup, o);
    for (const auto& s : soup.segments()) {
      const Vec3 q = g.to_local(s.a);
      EXPECT_GE(q.x, -1e-9);
      EXPECT_GE(q.y, -1e-9);
      EXPECT_LE(q.x, g.extents[0] * g.cell_size + 1e-9);
      EXPECT_LE(q.y, g.extents[1] * g.cell_size + 1e-9);
    }
  }
}

TEST(SamplePoints, CountsAndPositions) {
  const Grid g = gen::grid2(3, 3);
  const auto cell = sample_points(g, {3u, {1, 1, 0}}, 2);
  ASSERT_EQ(cell.size(), 4u);
  EXPECT_NEAR(cell[0].x, 1.25, 1e-15);
  EXPECT_NEAR(cell[0].y, 1.25, 1e-15);
  EXPECT_NEAR(cell[3].x, 1.75, 1e-15);
  EXPECT_NEAR(cell[3].y, 1.75, 1e-15);

  // Interior vertex: the sample of each incident cell nearest the vertex.
  const auto vert = sample_points(g, {0u, {1, 1, 0}}, 2);
  ASSERT_EQ(vert.size(), 4u);
  for (const auto& p : vert) {
    EXPECT_NEAR(std::fabs(p.x - 1.0), 0.25, 1e-15);
    EXPECT_NEAR(std::fabs(p.y - 1.0), 0.25, 1e-15);
  }

  // Interior edge along x, s = 4: 8 samples from each side.
  const auto edge = sample_points(g, {1u, {1, 1, 0}}, 4);
  ASSERT_EQ(edge.size(), 16u);
  int below = 0;
  for (const auto& p : edge) below += p.y < 1.0;
  EXPECT_EQ(below, 8);

  // Boundary vertex keeps only in-domain samples.
  EXPECT_EQ(sample_points(g, {0u, {0, 0, 0}}, 4).size(), 4u);
  EXPECT_EQ(sample_points(gen::grid3(2, 2, 2), {0u, {1, 1, 1}}, 2).size(), 8u);
  EXPECT_THROW(sample_points(g, {3u, {0, 0, 0}}, 3), Error);
  EXPECT_THROW(sample_points(g, {3u, {0, 0, 0}}, 0), Error);
}

TEST(SamplePoints, NeverOnCellBoundary) {
  const Grid g = gen::grid2(2, 2, 0.5);
  for (int s : {2, 4, 6, 8})
    for (const auto& p : sample_points(g, {0u, {1, 1, 0}}, s)) {
      const double fx = p.x / 0.5 - std::floor(p.x / 0.5);
      const double fy = p.y / 0.5 - std::floor(p.y / 0.5);
      EXPECT_GT(std::min(fx, 1 - fx), 1e-9);
      EXPECT_GT(std::min(fy, 1 - fy), 1e-9);
    }
}

TEST(ComputeField, InteriorCellsAreOne) {
  const auto sq = unit_square();
  GridOptions o;
  o.cell_size = 0.25;
  o.padding = 1;
  const Grid g = build_grid(sq, o);
  const auto f = compute_field(sq, g, 4);
  for (int j = 0; j < g.extents[1]; ++j)
    for (int i = 0; i < g.extents[0]; ++i) {
      const bool inside = i >= 1 && j >= 1 && i <= 4 && j <= 4;
      EXPECT_NEAR(f.cell(i, j), inside ? 1.0 : 0.0, 1e-10) << i << "," << j;
    }
  EXPECT_EQ(f.on_boundary_samples(), 0u);
}

TEST(ComputeField, HalfSpaceThroughCentreIsHalf) {
  for (int s : {2, 4, 6, 10, 32}) {
    const Grid g = gen::grid2(3, 1);
    const auto f = compute_field([](const Vec3& p) { return p.x < 1.5 ? 1.0 : 0.0; }, g, s);
    EXPECT_EQ(f.cell(1, 0), 0.5) << s;
    EXPECT_EQ(f.cell(0, 0), 1.0);
    EXPECT_EQ(f.cell(2, 0), 0.0);
  }
}

TEST(ComputeField, RefinementConverges) {
  // Tilted half-space through a cell; the exact area is known.
  const double a = 0.3, b = 0.2;  // material where y < a x + b
  const double exact = a / 2 + b;
  const Grid g = gen::grid2(1, 1);
  auto at = [&](int s) {
    return compute_field([&](const Vec3& p) { return p.y < a * p.x + b ? 1.0 : 0.0; }, g, s).cell(0, 0);
  };
  double prev = std::fabs(at(8) - at(4));
  for (int s = 8; s <= 256; s *= 2) {
    const double d = std::fabs(at(2 * s) - at(s));
    EXPECT_LE(d, prev + 1e-12) << s;
    prev = d;
  }
  EXPECT_NEAR(at(512), exact, 1e-3);
}

TEST(ComputeField, SubcellConsistency) {
  gen::Rng rng(5);
  const auto soup = gen::polygon_soup(gen::star_polygon(rng, {1.5, 1.5}, 11, 0.6, 1.6));
  GridOptions o;
  o.cell_size = 0.4;
  o.rotation = 0.3;
  o.padding = 1;
  const Grid g = build_grid(soup, o);
  const int s = 6;
  const auto f = compute_field(soup, g, s);
  // Every entity equals the plain mean over its sample points.
  for (unsigned m = 0; m < 4; ++m) {
    const Index3 e = f.extents(m);
    for (int j = 0; j < e[1]; ++j)
      for (int i = 0; i < e[0]; ++i)
        EXPECT_NEAR(f.value({m, {i, j, 0}}), mean_winding(sample_points(g, {m, {i, j, 0}}, s), soup), 1e-12);
  }
  // Interior vertex = mean of the nearest quadrant means of its four cells.
  for (int j = 1; j < g.extents[1]; ++j)
    for (int i = 1; i < g.extents[0]; ++i) {
      double acc = 0.0;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          std::vector<Vec3> quad;
          for (const auto& p : sample_points(g, {3u, {i + di, j + dj, 0}}, s)) {
            const Vec3 q = g.to_local(p) / g.cell_size;
            if (std::fabs(q.x - i) < 0.5 && std::fabs(q.y - j) < 0.5) quad.push_back(p);
          }
          ASSERT_EQ(quad.size(), 9u);
          acc += mean_winding(quad, soup) / 4.0;
        }
      EXPECT_NEAR(f.vertex(i, j), acc, 1e-12);
    }
}

TEST(ComputeField, ThreeDimensionalCube) {
  std::vector<Triangle3> tris;
  const Vec3 c[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  const int q[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {2, 3, 7, 6}, {1, 2, 6, 5}, {0, 4, 7, 3}};
  for (const auto& f : q) {
    tris.push_back({c[f[0]], c[f[1]], c[f[2]]});
    tris.push_back({c[f[0]], c[f[2]], c[f[3]]});
  }
  const auto soup = GeometrySoup::from_triangles(tris);
  GridOptions o;
  o.cell_size = 0.5;
  o.padding = 1;
  const Grid g = build_grid(soup, o);
  EXPECT_EQ(g.extents, (Index3{4, 4, 4}));
  const auto f = compute_field(soup, g, 2);
  EXPECT_NEAR(f.cell(1, 1, 1), 1.0, 1e-10);
  EXPECT_NEAR(f.cell(0, 0, 0), 0.0, 1e-10);
  // Vertex on the cube corner sees one inside octant.
  EXPECT_NEAR(f.vertex(1, 1, 1), 0.125, 1e-10);
  EXPECT_NEAR(f.vertex(2, 2, 2), 1.0, 1e-10);
}

TEST(ComputeField, RigidMotionInvariance) {
  gen::Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const auto soup = gen::polygon_soup(gen::star_polygon(rng, {0, 0}, 10, 0.5, 1.5));
    GridOptions o;
    o.cell_size = 0.35;
    o.padding = 1;
    const Grid g = build_grid(soup, o);
    const Mat3 r = Mat3::rotation_z(rng.uniform(0, 6.28));
    const Vec3 tr{rng.uniform(-4, 4), rng.uniform(-4, 4)};
    Grid moved = g;
    moved.origin = r * g.origin + tr;
    moved.rotation = r * g.rotation;
    const auto a = compute_field(soup, g, 4);
    const auto b = compute_field(soup.transformed(r, tr), moved, 4);
    for (unsigned m = 0; m < 4; ++m)
      for (std::size_t k = 0; k < a.values(m).size(); ++k) EXPECT_NEAR(a.values(m)[k], b.values(m)[k], 1e-10);
  }
}

TEST(ComputeField, DimensionMismatchAndOddSamples) {
  const auto sq = unit_square();
  EXPECT_THROW(compute_field(sq, gen::grid3(1, 1, 1), 2), Error);
  EXPECT_THROW(compute_field(sq, gen::grid2(1, 1), 5), Error);
  EXPECT_THROW(VolumeFractionField(gen::grid2(1, 1), 1), Error);
}

TEST(GapField, MatchesGenericSampling) {
  gen::Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const double theta = rng.uniform(5 * M_PI / 4, 3 * M_PI / 2);
    const double L = rng.uniform(0.2, 1.3);
    const Grid g = gap_grid(1.0, theta, rng.uniform(), rng.uniform(), 8);
    const int s = 2 * rng.integer(1, 8);
    const auto fast = gap_field(g, s, L);
    const auto ref = compute_field([L](const Vec3& p) { return gap_material(p, L) ? 1.0 : 0.0; }, g, s);
    for (unsigned m = 0; m < 4; ++m) ASSERT_EQ(fast.values(m), ref.values(m)) << "mask " << m;
  }
}

TEST(GapField, AgreesWithRectangleSoup) {
  gen::Rng rng(8);
  for (int t = 0; t < 6; ++t) {
    const double theta = rng.uniform(5 * M_PI / 4, 3 * M_PI / 2);
    const double L = rng.uniform(0.3, 1.2);
    const Grid g = gap_grid(1.0, theta, rng.uniform(), rng.uniform(), 8);
    const auto fast = gap_field(g, 8, L);
    const auto soup = compute_field(gap_soup(L, 20.0), g, 8);
    for (unsigned m = 0; m < 4; ++m)
      for (std::size_t k = 0; k < fast.values(m).size(); ++k) EXPECT_NEAR(fast.values(m)[k], soup.values(m)[k], 1e-9);
  }
}

TEST(FieldCsv, UnitSquareLayout) {
  const auto sq = unit_square();
  GridOptions o;
  o.cell_size = 0.5;
  const auto f = compute_field(sq, build_grid(sq, o), 4);
  std::ostringstream out;
  write_field_csv(out, f);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,i,j,axis,value");
  int cells = 0, edges = 0, verts = 0;
  while (std::getline(in, line)) {
    if (line.rfind("cell,", 0) == 0) {
      ++cells;
      EXPECT_EQ(line.substr(line.rfind(',') + 1), "1");
    }
    edges += line.rfind("edge,", 0) == 0;
    verts += line.rfind("vertex,", 0) == 0;
  }
  EXPECT_EQ(cells, 4);
  EXPECT_EQ(edges, 12);
  EXPECT_EQ(verts, 9);
}
