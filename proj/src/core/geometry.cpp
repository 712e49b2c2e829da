#include "vfmesh/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace vfmesh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

bool degenerate(const Segment2& s) { return s.a == s.b; }

bool degenerate(const Triangle3& t) {
  if (t.v0 == t.v1 || t.v1 == t.v2 || t.v0 == t.v2) return true;
  return norm(cross(t.v1 - t.v0, t.v2 - t.v0)) == 0.0;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

// True when p projects inside the triangle and lies within tol of its plane.
bool near_triangle(const Vec3& p, const Triangle3& t, double tol) {
  const Vec3 n = cross(t.v1 - t.v0, t.v2 - t.v0);
  const double nn = norm(n);
  if (nn == 0.0) return false;
  const double dist = dot(p - t.v0, n) / nn;
  if (std::abs(dist) > tol) return false;
  const Vec3 q = p - n * (dist / nn);
  const Vec3 c0 = cross(t.v1 - t.v0, q - t.v0);
  const Vec3 c1 = cross(t.v2 - t.v1, q - t.v1);
  const Vec3 c2 = cross(t.v0 - t.v2, q - t.v2);
  const double s0 = dot(c0, n), s1 = dot(c1, n), s2 = dot(c2, n);
  return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

Vec3 parse_obj_vertex(std::istringstream& ls, const std::string& origin, std::size_t lineno) {
  Vec3 v;
  if (!(ls >> v.x >> v.y)) fail(ErrorKind::bad_input, origin + ":" + std::to_string(lineno) + ": malformed vertex");
  double z = 0.0;
  if (ls >> z) v.z = z;
  return v;
}

// OBJ indices are 1-based, may be negative (relative), and may carry /vt/vn suffixes.
std::size_t resolve_obj_index(const std::string& token, std::size_t nverts, const std::string& origin,
                              std::size_t lineno) {
  const std::string head = token.substr(0, token.find('/'));
  long idx = 0;
  try {
    idx = std::stol(head);
  } catch (const std::exception&) {
    fail(ErrorKind::bad_input, origin + ":" + std::to_string(lineno) + ": bad index '" + token + "'");
  }
  const long resolved = idx < 0 ? static_cast<long>(nverts) + idx : idx - 1;
  if (resolved < 0 || resolved >= static_cast<long>(nverts))
    fail(ErrorKind::bad_input, origin + ":" + std::to_string(lineno) + ": index out of range");
  return static_cast<std::size_t>(resolved);
}

LoadResult parse_seg_text(std::string_view text, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::vector<Segment2> segs;
  std::size_t dropped = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(strip_comment(line));
    double x1, y1, x2, y2;
    if (!(ls >> x1)) continue;  // blank or comment-only
    if (!(ls >> y1 >> x2 >> y2))
      fail(ErrorKind::bad_input, origin + ":" + std::to_string(lineno) + ": expected 'x1 y1 x2 y2'");
    Segment2 s{{x1, y1, 0.0}, {x2, y2, 0.0}};
    if (degenerate(s)) {
      ++dropped;
      continue;
    }
    segs.push_back(s);
  }
  if (segs.empty()) fail(ErrorKind::bad_input, origin + ": no valid segments");
  return {GeometrySoup::from_segments(std::move(segs)), dropped};
}

LoadResult parse_obj(std::string_view text, GeometryFormat format, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::vector<Vec3> verts;
  std::vector<Segment2> segs;
  std::vector<Triangle3> tris;
  std::size_t dropped = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(strip_comment(line));
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      verts.push_back(parse_obj_vertex(ls, origin, lineno));
    } else if (tag == "l") {
      if (format != GeometryFormat::obj_lines)
        fail(ErrorKind::bad_input, origin + ": mixed dimensions ('l' record in a triangle file)");
      std::vector<std::size_t> ids;
      for (std::string tok; ls >> tok;) ids.push_back(resolve_obj_index(tok, verts.size(), origin, lineno));
      for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
        Segment2 s{verts[ids[k]], verts[ids[k + 1]]};
        s.a.z = s.b.z = 0.0;
        if (degenerate(s)) {
          ++dropped;
          continue;
        }
        segs.push_back(s);
      }
    } else if (tag == "f") {
      if (format != GeometryFormat::obj_tris)
        fail(ErrorKind::bad_input, origin + ": mixed dimensions ('f' record in a polyline file)");
      std::vector<std::size_t> ids;
      for (std::string tok; ls >> tok;) ids.push_back(resolve_obj_index(tok, verts.size(), origin, lineno));
      if (ids.size() < 3) fail(ErrorKind::bad_input, origin + ":" + std::to_string(lineno) + ": face with < 3 vertices");
      for (std::size_t k = 1; k + 1 < ids.size(); ++k) {
        Triangle3 t{verts[ids[0]], verts[ids[k]], verts[ids[k + 1]]};
        if (degenerate(t)) {
          ++dropped;
          continue;
        }
        tris.push_back(t);
      }
    }
  }
  if (format == GeometryFormat::obj_lines) {
    if (segs.empty()) fail(ErrorKind::bad_input, origin + ": no valid line segments");
    return {GeometrySoup::from_segments(std::move(segs)), dropped};
  }
  if (tris.empty()) fail(ErrorKind::bad_input, origin + ": no valid triangles");
  return {GeometrySoup::from_triangles(std::move(tris)), dropped};
}

bool looks_like_binary_stl(std::string_view text) {
  if (text.size() < 84) return false;
  std::uint32_t count = 0;
  std::memcpy(&count, text.data() + 80, sizeof(count));
  return 84 + static_cast<std::size_t>(count) * 50 == text.size();
}

LoadResult parse_stl(std::string_view text, const std::string& origin) {
  std::vector<Triangle3> tris;
  std::size_t dropped = 0;
  if (looks_like_binary_stl(text)) {
    std::uint32_t count = 0;
    std::memcpy(&count, text.data() + 80, sizeof(count));
    for (std::uint32_t i = 0; i < count; ++i) {
      const char* rec = text.data() + 84 + static_cast<std::size_t>(i) * 50;
      float f[12];
      std::memcpy(f, rec, sizeof(f));
      Triangle3 t{{f[3], f[4], f[5]}, {f[6], f[7], f[8]}, {f[9], f[10], f[11]}};
      if (degenerate(t)) {
        ++dropped;
        continue;
      }
      tris.push_back(t);
    }
  } else {
    std::istringstream in{std::string(text)};
    std::string tok;
    std::vector<Vec3> pending;
    while (in >> tok) {
      const std::string t = lower(tok);
      if (t == "vertex") {
        Vec3 v;
        if (!(in >> v.x >> v.y >> v.z)) fail(ErrorKind::bad_input, origin + ": malformed STL vertex");
        pending.push_back(v);
      } else if (t == "endfacet") {
        if (pending.size() != 3) fail(ErrorKind::bad_input, origin + ": STL facet without 3 vertices");
        Triangle3 tri{pending[0], pending[1], pending[2]};
        pending.clear();
        if (degenerate(tri)) {
          ++dropped;
          continue;
        }
        tris.push_back(tri);
      }
    }
  }
  if (tris.empty()) fail(ErrorKind::bad_input, origin + ": no valid triangles");
  return {GeometrySoup::from_triangles(std::move(tris)), dropped};
}

}  // namespace

GeometryFormat parse_geometry_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "seg-text" || n == "seg") return GeometryFormat::seg_text;
  if (n == "obj-lines") return GeometryFormat::obj_lines;
  if (n == "obj-tris") return GeometryFormat::obj_tris;
  if (n == "stl") return GeometryFormat::stl;
  fail(ErrorKind::bad_input, "unknown geometry format '" + std::string(name) + "'");
}

std::string_view to_string(GeometryFormat f) {
  switch (f) {
    case GeometryFormat::seg_text: return "seg-text";
    case GeometryFormat::obj_lines: return "obj-lines";
    case GeometryFormat::obj_tris: return "obj-tris";
    case GeometryFormat::stl: return "stl";
  }
  return "?";
}

GeometryFormat guess_geometry_format(const std::string& path) {
  const std::string p = lower(path);
  auto ends_with = [&](std::string_view suf) {
    return p.size() >= suf.size() && p.compare(p.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(".stl")) return GeometryFormat::stl;
  if (ends_with(".obj")) {
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("l ", 0) == 0) return GeometryFormat::obj_lines;
      if (line.rfind("f ", 0) == 0) return GeometryFormat::obj_tris;
    }
    return GeometryFormat::obj_tris;
  }
  return GeometryFormat::seg_text;
}

GeometrySoup GeometrySoup::from_segments(std::vector<Segment2> segments) {
  GeometrySoup s;
  s.dimension_ = 2;
  s.segments_ = std::move(segments);
  for (const auto& e : s.segments_) {
    s.bbox_.expand(e.a);
    s.bbox_.expand(e.b);
  }
  return s;
}

GeometrySoup GeometrySoup::from_triangles(std::vector<Triangle3> triangles) {
  GeometrySoup s;
  s.dimension_ = 3;
  s.triangles_ = std::move(triangles);
  for (const auto& t : s.triangles_) {
    s.bbox_.expand(t.v0);
    s.bbox_.expand(t.v1);
    s.bbox_.expand(t.v2);
  }
  return s;
}

GeometrySoup GeometrySoup::reversed() const {
  if (dimension_ == 2) {
    std::vector<Segment2> out;
    out.reserve(segments_.size());
    for (const auto& e : segments_) out.push_back({e.b, e.a});
    return from_segments(std::move(out));
  }
  std::vector<Triangle3> out;
  out.reserve(triangles_.size());
  for (const auto& t : triangles_) out.push_back({t.v0, t.v2, t.v1});
  return from_triangles(std::move(out));
}

GeometrySoup GeometrySoup::transformed(const Mat3& rotation, const Vec3& translation) const {
  auto xf = [&](const Vec3& p) { return rotation * p + translation; };
  if (dimension_ == 2) {
    std::vector<Segment2> out;
    out.reserve(segments_.size());
    for (const auto& e : segments_) out.push_back({xf(e.a), xf(e.b)});
    return from_segments(std::move(out));
  }
  std::vector<Triangle3> out;
  out.reserve(triangles_.size());
  for (const auto& t : triangles_) out.push_back({xf(t.v0), xf(t.v1), xf(t.v2)});
  return from_triangles(std::move(out));
}

LoadResult parse_geometry(std::string_view text, GeometryFormat format, const std::string& origin) {
  switch (format) {
    case GeometryFormat::seg_text: return parse_seg_text(text, origin);
    case GeometryFormat::obj_lines:
    case GeometryFormat::obj_tris: return parse_obj(text, format, origin);
    case GeometryFormat::stl: return parse_stl(text, origin);
  }
  fail(ErrorKind::internal, "unhandled geometry format");
}

LoadResult load_geometry(const std::string& path, GeometryFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::bad_input, "cannot read geometry file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_geometry(buf.str(), format, path);
}

double segment_winding(const Vec3& p, const Segment2& s) {
  const double ax = s.a.x - p.x, ay = s.a.y - p.y;
  const double bx = s.b.x - p.x, by = s.b.y - p.y;
  return std::atan2(ax * by - ay * bx, ax * bx + ay * by) / kTwoPi;
}

double triangle_winding(const Vec3& p, const Triangle3& t) {
  // Van Oosterom-Strackee signed solid angle.
  const Vec3 a = t.v0 - p, b = t.v1 - p, c = t.v2 - p;
  const double la = norm(a), lb = norm(b), lc = norm(c);
  const double num = dot(a, cross(b, c));
  const double den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
  return 2.0 * std::atan2(num, den) / kFourPi;
}

WindingSample winding_2d(const Vec3& p, const GeometrySoup& soup) {
  if (soup.dimension() != 2) fail(ErrorKind::bad_input, "winding_2d called on a 3D soup");
  const double tol = soup.on_boundary_tolerance();
  WindingSample out;
  for (const auto& s : soup.segments()) {
    out.value += segment_winding(p, s);
    if (!out.on_boundary && point_segment_distance(p, s.a, s.b) <= tol) out.on_boundary = true;
  }
  return out;
}

WindingSample winding_3d(const Vec3& p, const GeometrySoup& soup) {
  if (soup.dimension() != 3) fail(ErrorKind::bad_input, "winding_3d called on a 2D soup");
  const double tol = soup.on_boundary_tolerance();
  WindingSample out;
  for (const auto& t : soup.triangles()) {
    out.value += triangle_winding(p, t);
    if (!out.on_boundary && near_triangle(p, t, tol)) out.on_boundary = true;
  }
  return out;
}

WindingSample winding_number(const Vec3& p, const GeometrySoup& soup) {
  return soup.dimension() == 2 ? winding_2d(p, soup) : winding_3d(p, soup);
}

}  // namespace vfmesh
