#pragma once

#include <string>

#include "vfmesh/grid.hpp"
#include "vfmesh/mesher.hpp"
#include "vfmesh/persistence.hpp"

namespace vfmesh {

// JSON documents shared by the CLI output files and the HTTP service.

std::string repair_report_json(const MeshResult& result, const MeshGeometry& geometry);
/// Vertex and face arrays plus per-face provenance (0 whole cell, 1 template child) and component.
std::string mesh_json(const MeshGeometry& geometry, const MeshResult& result);
std::string diagram_json(const PersistenceDiagram& diagram);
std::string betti_json(const PersistenceDiagram& diagram, double vf_threshold);
std::string field_meta_json(const VolumeFractionField& field, const std::string& geometry_name);

}  // namespace vfmesh
