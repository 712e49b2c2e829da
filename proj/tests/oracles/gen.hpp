#pragma once
// Small random generators for property tests. Seeds are fixed per test so
// failures reproduce.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "vfmesh/geometry.hpp"
#include "vfmesh/grid.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return uniform() < p; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Star-shaped simple polygon around `c`, counter-clockwise.
inline std::vector<vfmesh::Vec3> star_polygon(Rng& rng, vfmesh::Vec3 c, int n, double rmin, double rmax) {
  std::vector<double> ang(n);
  for (auto& a : ang) a = rng.uniform(0.0, 2.0 * M_PI);
  std::sort(ang.begin(), ang.end());
  ang.erase(std::unique(ang.begin(), ang.end(), [](double a, double b) { return b - a < 1e-3; }), ang.end());
  std::vector<vfmesh::Vec3> pts;
  for (double a : ang) {
    const double r = rng.uniform(rmin, rmax);
    pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a), 0.0});
  }
  return pts;
}

inline vfmesh::GeometrySoup polygon_soup(const std::vector<vfmesh::Vec3>& pts) {
  std::vector<vfmesh::Segment2> segs;
  for (std::size_t i = 0; i < pts.size(); ++i) segs.push_back({pts[i], pts[(i + 1) % pts.size()]});
  return vfmesh::GeometrySoup::from_segments(std::move(segs));
}

// Star-shaped closed surface: a latitude/longitude sphere with a random
// radius per vertex, outward oriented.
inline std::vector<vfmesh::Triangle3> star_polyhedron(Rng& rng, int nlat, int nlon, double rmin, double rmax) {
  auto dir = [](double th, double ph) {
    return vfmesh::Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  std::vector<std::vector<vfmesh::Vec3>> v(nlat + 1, std::vector<vfmesh::Vec3>(nlon));
  const vfmesh::Vec3 north = dir(0, 0) * rng.uniform(rmin, rmax), south = dir(M_PI, 0) * rng.uniform(rmin, rmax);
  for (int i = 1; i < nlat; ++i)
    for (int j = 0; j < nlon; ++j)
      v[i][j] = dir(M_PI * i / nlat, 2 * M_PI * j / nlon) * rng.uniform(rmin, rmax);
  std::vector<vfmesh::Triangle3> tris;
  for (int j = 0; j < nlon; ++j) {
    const int k = (j + 1) % nlon;
    tris.push_back({north, v[1][j], v[1][k]});
    tris.push_back({south, v[nlat - 1][k], v[nlat - 1][j]});
    for (int i = 1; i + 1 < nlat; ++i) {
      tris.push_back({v[i][j], v[i + 1][j], v[i + 1][k]});
      tris.push_back({v[i][j], v[i + 1][k], v[i][k]});
    }
  }
  return tris;
}

inline vfmesh::Grid grid2(int nx, int ny, double ell = 1.0) {
  vfmesh::Grid g;
  g.dimension = 2;
  g.cell_size = ell;
  g.extents = {nx, ny, 1};
  return g;
}

inline vfmesh::Grid grid3(int nx, int ny, int nz, double ell = 1.0) {
  vfmesh::Grid g;
  g.dimension = 3;
  g.cell_size = ell;
  g.extents = {nx, ny, nz};
  return g;
}

// Field with random cell and subcell values; values are drawn from a small
// set so ties occur.
inline vfmesh::VolumeFractionField random_field(Rng& rng, const vfmesh::Grid& g, int levels = 6) {
  vfmesh::VolumeFractionField f(g, 2);
  for (unsigned m = 0; m < (1u << g.dimension); ++m)
    for (double& v : f.values(m)) v = rng.integer(0, levels) / static_cast<double>(levels);
  return f;
}

}  // namespace gen
