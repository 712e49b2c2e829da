#pragma once
// Crossing-number point-in-solid tests, independent of the winding code.

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

struct P2 {
  double x, y;
};
struct P3 {
  double x, y, z;
};

// Even-odd rule with a half-open edge convention.
inline int polygon_parity(const std::vector<P2>& poly, P2 q) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const P2 a = poly[i], b = poly[j];
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x) inside = !inside;
    }
  }
  return inside ? 1 : 0;
}

// Ray along a fixed generic direction; Moller-Trumbore per triangle.
inline int mesh_parity(const std::vector<std::array<P3, 3>>& tris, P3 q) {
  const P3 d{0.5773502691896258, 0.6123724356957945, 0.5400617248673217};
  auto sub = [](P3 a, P3 b) { return P3{a.x - b.x, a.y - b.y, a.z - b.z}; };
  auto crs = [](P3 a, P3 b) { return P3{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; };
  auto dt = [](P3 a, P3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; };
  int hits = 0;
  for (const auto& t : tris) {
    const P3 e1 = sub(t[1], t[0]), e2 = sub(t[2], t[0]);
    const P3 h = crs(d, e2);
    const double det = dt(e1, h);
    if (std::fabs(det) < 1e-14) continue;
    const P3 s = sub(q, t[0]);
    const double u = dt(s, h) / det;
    if (u < 0.0 || u > 1.0) continue;
    const P3 qv = crs(s, e1);
    const double v = dt(d, qv) / det;
    if (v < 0.0 || u + v > 1.0) continue;
    if (dt(e2, qv) / det > 0.0) ++hits;
  }
  return hits & 1;
}

}  // namespace oracle
