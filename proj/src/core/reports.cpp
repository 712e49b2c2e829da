#include "vfmesh/reports.hpp"

#include <cmath>

#include <json.hpp>

namespace vfmesh {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json pinch_json(const Pinch& p) {
  json j;
  j["mask"] = p.location.mask;
  j["index"] = p.location.index;
  j["case"] = p.case_id;
  j["cells"] = p.cells;
  j["subcell_vf"] = p.subcell_vf;
  j["classified"] = to_string(p.classified);
  j["resolution"] = to_string(p.resolution);
  return j;
}

}  // namespace

std::string repair_report_json(const MeshResult& r, const MeshGeometry& geo) {
  json j;
  j["dimension"] = geo.dimension;
  j["pinches"] = json::array();
  for (const auto& p : r.pinches) j["pinches"].push_back(pinch_json(p));
  j["components_before"] = r.components_before.size();
  j["components_after"] = r.components_after.size();
  j["component_cells_before"] = r.components_before;
  j["component_cells_after"] = r.components_after;
  j["conflict_overrides"] = r.conflict_overrides;
  j["bridges"] = r.bridges;
  j["islands_removed"] = r.islands_removed;
  j["residual_pinches"] = r.residual_pinches;
  j["hanging_nodes"] = geo.hanging_nodes;
  std::size_t children = 0;
  for (const auto& el : geo.elements) children += el.template_child;
  j["elements"] = geo.elements.size();
  j["template_children"] = children;
  if (r.warned_min_cells) j["warnings"] = json::array({"min_cells <= 0 disables island removal"});
  return j.dump(2);
}

std::string mesh_json(const MeshGeometry& geo, const MeshResult& r) {
  json j;
  j["dimension"] = geo.dimension;
  json verts = json::array();
  for (const Vec3& v : geo.vertices) {
    if (geo.dimension == 3) verts.push_back({v.x, v.y, v.z});
    else verts.push_back({v.x, v.y});
  }
  j["vertices"] = std::move(verts);
  const int nc = geo.dimension == 3 ? 8 : 4;
  json faces = json::array(), prov = json::array(), comp = json::array(), parent = json::array();
  for (const auto& el : geo.elements) {
    faces.push_back(std::vector<std::uint32_t>(el.corners.begin(), el.corners.begin() + nc));
    prov.push_back(el.template_child ? 1 : 0);
    comp.push_back(el.component);
    parent.push_back(el.parent);
  }
  j["faces"] = std::move(faces);
  j["provenance"] = std::move(prov);
  j["component"] = std::move(comp);
  j["parent"] = std::move(parent);
  j["components"] = r.components_after.size();
  j["retained_cells"] = r.mesh.retained_count();
  j["hanging_nodes"] = geo.hanging_nodes;
  return j.dump();
}

std::string diagram_json(const PersistenceDiagram& d) {
  json j;
  j["dimension"] = d.dimension;
  j["pairs"] = json::array();
  for (const auto& p : d.pairs) j["pairs"].push_back({{"dim", p.dim}, {"birth", num(p.birth())}, {"death", num(p.death())}});
  return j.dump();
}

std::string betti_json(const PersistenceDiagram& d, double vf) {
  const Betti b = betti_at(d, vf);
  json j;
  j["vf"] = vf;
  j["b0"] = b[0];
  j["b1"] = b[1];
  if (d.dimension == 3) j["b2"] = b[2];
  return j.dump();
}

std::string field_meta_json(const VolumeFractionField& f, const std::string& name) {
  const Grid& g = f.grid();
  json j;
  j["geometry"] = name;
  j["dimension"] = g.dimension;
  j["cell_size"] = g.cell_size;
  j["samples_per_axis"] = f.samples_per_axis();
  j["extents"] = std::vector<int>(g.extents.begin(), g.extents.begin() + g.dimension);
  j["origin"] = {g.origin.x, g.origin.y, g.origin.z};
  j["rotation"] = g.rotation.m;
  j["max_cell_vf"] = f.max_cell_value();
  j["on_boundary_samples"] = f.on_boundary_samples();
  return j.dump(2);
}

}  // namespace vfmesh
