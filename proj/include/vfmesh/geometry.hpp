#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vfmesh/common.hpp"

namespace vfmesh {

/// Oriented 2D segment a -> b. For a closed counter-clockwise loop the
/// interior lies to the left.
struct Segment2 {
  Vec3 a;
  Vec3 b;
};

/// Triangle whose vertex order (right-hand rule) gives the outward normal.
struct Triangle3 {
  Vec3 v0;
  Vec3 v1;
  Vec3 v2;
};

enum class GeometryFormat { seg_text, obj_lines, obj_tris, stl };

GeometryFormat parse_geometry_format(std::string_view name);
std::string_view to_string(GeometryFormat f);
/// Guess a format from the file extension; OBJ files are sniffed for `l` records.
GeometryFormat guess_geometry_format(const std::string& path);

/// Immutable element soup. Either `segments` (dimension 2) or `triangles`
/// (dimension 3) is populated, never both.
class GeometrySoup {
 public:
  GeometrySoup() = default;
  static GeometrySoup from_segments(std::vector<Segment2> segments);
  static GeometrySoup from_triangles(std::vector<Triangle3> triangles);

  int dimension() const { return dimension_; }
  std::span<const Segment2> segments() const { return segments_; }
  std::span<const Triangle3> triangles() const { return triangles_; }
  std::size_t size() const { return dimension_ == 2 ? segments_.size() : triangles_.size(); }
  const BBox& bbox() const { return bbox_; }
  /// Distance under which a query point is reported as lying on the geometry.
  double on_boundary_tolerance() const { return 1e-9 * bbox_.diagonal(); }

  GeometrySoup reversed() const;
  GeometrySoup transformed(const Mat3& rotation, const Vec3& translation) const;

 private:
  int dimension_ = 0;
  std::vector<Segment2> segments_;
  std::vector<Triangle3> triangles_;
  BBox bbox_;
};

struct LoadResult {
  GeometrySoup soup;
  std::size_t dropped = 0;  ///< degenerate elements removed while parsing
};

LoadResult load_geometry(const std::string& path, GeometryFormat format);
/// Parse from an in-memory buffer; `origin` is only used in error messages.
LoadResult parse_geometry(std::string_view text, GeometryFormat format,
                          const std::string& origin = "<buffer>");

struct WindingSample {
  double value = 0.0;
  bool on_boundary = false;
};

/// Generalized winding number: signed subtended angle over 2*pi (2D) or
/// signed solid angle over 4*pi (3D), summed naively over all elements.
WindingSample winding_number(const Vec3& p, const GeometrySoup& soup);
WindingSample winding_2d(const Vec3& p, const GeometrySoup& soup);
WindingSample winding_3d(const Vec3& p, const GeometrySoup& soup);

/// Per-element contributions, exposed for additivity checks and custom sums.
double segment_winding(const Vec3& p, const Segment2& s);
double triangle_winding(const Vec3& p, const Triangle3& t);

}  // namespace vfmesh
