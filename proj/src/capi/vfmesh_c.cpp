#include "vfmesh/vfmesh.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "vfmesh/geometry.hpp"
#include "vfmesh/grid.hpp"
#include "vfmesh/mesher.hpp"
#include "vfmesh/persistence.hpp"
#include "vfmesh/reports.hpp"
#include "vfmesh/theory.hpp"

struct vfm_soup {
  vfmesh::GeometrySoup soup;
};
struct vfm_field {
  vfmesh::VolumeFractionField field;
};
struct vfm_diagram {
  vfmesh::PersistenceDiagram diagram;
};
struct vfm_mesh {
  vfmesh::MeshResult result;
  vfmesh::MeshGeometry geometry;
};

namespace {

thread_local std::string g_last_error;

vfm_status record(vfm_status st, const char* what) {
  g_last_error = what;
  return st;
}

template <typename F>
vfm_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return VFM_OK;
  } catch (const vfmesh::Error& e) {
    return record(static_cast<vfm_status>(static_cast<int>(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return record(VFM_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(VFM_INTERNAL, e.what());
  } catch (...) {
    return record(VFM_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (!p) vfmesh::fail(vfmesh::ErrorKind::bad_input, std::string(name) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::ofstream open_out(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) vfmesh::fail(vfmesh::ErrorKind::io, std::string("cannot write ") + path);
  return out;
}

void close_out(std::ofstream& out, const char* path) {
  out.close();
  if (!out) vfmesh::fail(vfmesh::ErrorKind::io, std::string("error writing ") + path);
}

template <typename Writer>
void write_file(const char* path, Writer&& w) {
  auto out = open_out(path);
  w(out);
  close_out(out, path);
}

}  // namespace

extern "C" {

const char* vfm_version(void) { return "1.0.0"; }
const char* vfm_last_error(void) { return g_last_error.c_str(); }
void vfm_string_free(char* s) { std::free(s); }

vfm_status vfm_soup_load(const char* path, const char* format, vfm_soup** out, size_t* dropped) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto fmt = format ? vfmesh::parse_geometry_format(format) : vfmesh::guess_geometry_format(path);
    auto res = vfmesh::load_geometry(path, fmt);
    if (dropped) *dropped = res.dropped;
    *out = new vfm_soup{std::move(res.soup)};
  });
}

vfm_status vfm_soup_parse(const char* text, const char* format, vfm_soup** out, size_t* dropped) {
  return guarded([&] {
    require(text, "text");
    require(format, "format");
    require(out, "out");
    auto res = vfmesh::parse_geometry(text, vfmesh::parse_geometry_format(format));
    if (dropped) *dropped = res.dropped;
    *out = new vfm_soup{std::move(res.soup)};
  });
}

void vfm_soup_free(vfm_soup* soup) { delete soup; }
int vfm_soup_dimension(const vfm_soup* soup) { return soup ? soup->soup.dimension() : 0; }
size_t vfm_soup_size(const vfm_soup* soup) { return soup ? soup->soup.size() : 0; }

vfm_status vfm_winding(const vfm_soup* soup, const double p[3], double* value, int* on_boundary) {
  return guarded([&] {
    require(soup, "soup");
    require(p, "point");
    const auto w = vfmesh::winding_number(vfmesh::Vec3{p[0], p[1], soup->soup.dimension() == 3 ? p[2] : 0.0}, soup->soup);
    if (value) *value = w.value;
    if (on_boundary) *on_boundary = w.on_boundary;
  });
}

void vfm_grid_params_default(vfm_grid_params* p) {
  if (!p) return;
  *p = vfm_grid_params{};
  p->cell_size = 1.0;
  p->axis[2] = 1.0;
}

vfm_status vfm_field_compute(const vfm_soup* soup, const vfm_grid_params* params, vfm_field** out) {
  return guarded([&] {
    require(soup, "soup");
    require(params, "params");
    require(out, "out");
    vfmesh::GridOptions opt;
    opt.cell_size = params->cell_size;
    opt.rotation = params->rotation;
    opt.axis = {params->axis[0], params->axis[1], params->axis[2]};
    opt.offset = {params->offset[0], params->offset[1], params->offset[2]};
    opt.padding = params->padding;
    const int dim = soup->soup.dimension();
    const int s = params->samples_per_axis > 0 ? params->samples_per_axis : (dim == 3 ? 2 : 4);
    vfmesh::check_samples_per_axis(s);
    const vfmesh::Grid grid = vfmesh::build_grid(soup->soup, opt);
    *out = new vfm_field{vfmesh::compute_field(soup->soup, grid, s)};
  });
}

void vfm_field_free(vfm_field* field) { delete field; }

vfm_status vfm_field_extents(const vfm_field* field, int* dimension, int extents[3]) {
  return guarded([&] {
    require(field, "field");
    const auto& g = field->field.grid();
    if (dimension) *dimension = g.dimension;
    if (extents)
      for (int a = 0; a < 3; ++a) extents[a] = g.extents[a];
  });
}

vfm_status vfm_field_cell(const vfm_field* field, int i, int j, int k, double* vf) {
  return guarded([&] {
    require(field, "field");
    require(vf, "vf");
    const auto& g = field->field.grid();
    if (g.dimension == 2) k = 0;
    if (!g.in_cells(i, j, k)) vfmesh::fail(vfmesh::ErrorKind::bad_input, "cell index out of range");
    *vf = field->field.cell(i, j, k);
  });
}

vfm_status vfm_field_write_csv(const vfm_field* field, const char* path) {
  return guarded([&] {
    require(field, "field");
    require(path, "path");
    write_file(path, [&](std::ostream& o) { vfmesh::write_field_csv(o, field->field); });
  });
}

vfm_status vfm_field_meta_json(const vfm_field* field, const char* geometry_name, char** json) {
  return guarded([&] {
    require(field, "field");
    require(json, "json");
    *json = dup_string(vfmesh::field_meta_json(field->field, geometry_name ? geometry_name : ""));
  });
}

vfm_status vfm_diagram_compute(const vfm_field* field, vfm_diagram** out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = new vfm_diagram{vfmesh::compute_diagram(vfmesh::dualize(field->field))};
  });
}

void vfm_diagram_free(vfm_diagram* diagram) { delete diagram; }
size_t vfm_diagram_pair_count(const vfm_diagram* diagram) { return diagram ? diagram->diagram.pairs.size() : 0; }

vfm_status vfm_diagram_pair(const vfm_diagram* diagram, size_t index, int* dim, double* birth, double* death) {
  return guarded([&] {
    require(diagram, "diagram");
    if (index >= diagram->diagram.pairs.size()) vfmesh::fail(vfmesh::ErrorKind::bad_input, "pair index out of range");
    const auto& p = diagram->diagram.pairs[index];
    if (dim) *dim = p.dim;
    if (birth) *birth = p.birth();
    if (death) *death = p.death();
  });
}

vfm_status vfm_diagram_betti(const vfm_diagram* diagram, double vf, int betti[3]) {
  return guarded([&] {
    require(diagram, "diagram");
    require(betti, "betti");
    const auto b = vfmesh::betti_at(diagram->diagram, vf);
    for (int a = 0; a < 3; ++a) betti[a] = b[a];
  });
}

vfm_status vfm_diagram_write(const vfm_diagram* diagram, const char* csv_path, const char* svg_path,
                             const char* betti_csv_path) {
  return guarded([&] {
    require(diagram, "diagram");
    const auto& d = diagram->diagram;
    if (csv_path) write_file(csv_path, [&](std::ostream& o) { vfmesh::write_diagram_csv(o, d); });
    if (svg_path) write_file(svg_path, [&](std::ostream& o) { vfmesh::write_diagram_svg(o, d); });
    if (betti_csv_path) write_file(betti_csv_path, [&](std::ostream& o) { vfmesh::write_betti_curve_csv(o, d); });
  });
}

vfm_status vfm_diagram_json(const vfm_diagram* diagram, char** json) {
  return guarded([&] {
    require(diagram, "diagram");
    require(json, "json");
    *json = dup_string(vfmesh::diagram_json(diagram->diagram));
  });
}

vfm_status vfm_betti_json(const vfm_diagram* diagram, double vf, char** json) {
  return guarded([&] {
    require(diagram, "diagram");
    require(json, "json");
    if (!std::isfinite(vf)) vfmesh::fail(vfmesh::ErrorKind::bad_input, "vf must be finite");
    *json = dup_string(vfmesh::betti_json(diagram->diagram, vf));
  });
}

void vfm_mesh_params_default(vfm_mesh_params* p) {
  if (!p) return;
  const vfmesh::MeshOptions d;
  *p = vfm_mesh_params{d.vf_threshold, d.antialias, d.join, d.separate_faces, d.min_cells, nullptr};
}

vfm_status vfm_mesh_run(const vfm_field* field, const vfm_mesh_params* params, vfm_mesh** out) {
  return guarded([&] {
    require(field, "field");
    require(params, "params");
    require(out, "out");
    if (!(params->vf_threshold >= 0.0) || !std::isfinite(params->vf_threshold))
      vfmesh::fail(vfmesh::ErrorKind::bad_input, "vf threshold must be a finite value >= 0");
    vfmesh::MeshOptions opt;
    opt.vf_threshold = params->vf_threshold;
    opt.antialias = params->antialias != 0;
    opt.join = params->join != 0;
    opt.separate_faces = params->separate_faces != 0;
    opt.min_cells = params->min_cells;
    if (params->conflict_policy) opt.policy = vfmesh::parse_conflict_policy(params->conflict_policy);
    auto m = new vfm_mesh{vfmesh::run_mesher(field->field, opt), {}};
    m->geometry = vfmesh::mesh_geometry(m->result.mesh);
    *out = m;
  });
}

void vfm_mesh_free(vfm_mesh* mesh) { delete mesh; }

vfm_status vfm_mesh_counts(const vfm_mesh* mesh, int* components_before, int* components_after, size_t* pinches,
                           size_t* elements) {
  return guarded([&] {
    require(mesh, "mesh");
    if (components_before) *components_before = static_cast<int>(mesh->result.components_before.size());
    if (components_after) *components_after = static_cast<int>(mesh->result.components_after.size());
    if (pinches) *pinches = mesh->result.pinches.size();
    if (elements) *elements = mesh->geometry.elements.size();
  });
}

vfm_status vfm_mesh_write(const vfm_mesh* mesh, const char* path, const char* format) {
  return guarded([&] {
    require(mesh, "mesh");
    require(path, "path");
    std::string fmt = format ? format : "";
    if (fmt.empty()) {
      const std::string p = path;
      fmt = p.size() >= 4 && p.compare(p.size() - 4, 4, ".vtk") == 0 ? "vtk" : "obj";
    }
    const auto mf = vfmesh::parse_mesh_format(fmt);
    write_file(path, [&](std::ostream& o) { vfmesh::write_mesh(o, mesh->geometry, mf); });
  });
}

vfm_status vfm_mesh_report_json(const vfm_mesh* mesh, char** json) {
  return guarded([&] {
    require(mesh, "mesh");
    require(json, "json");
    *json = dup_string(vfmesh::repair_report_json(mesh->result, mesh->geometry));
  });
}

vfm_status vfm_mesh_json(const vfm_mesh* mesh, char** json) {
  return guarded([&] {
    require(mesh, "mesh");
    require(json, "json");
    *json = dup_string(vfmesh::mesh_json(mesh->geometry, mesh->result));
  });
}

void vfm_sweep_params_default(vfm_sweep_params* p) {
  if (!p) return;
  const vfmesh::SweepOptions d;
  *p = vfm_sweep_params{d.L_min, d.L_max, d.L_count, d.theta_count, d.offset_count, d.s, d.window, d.seed};
}

vfm_status vfm_sweep_run(const vfm_sweep_params* params, const char* csv_path, char** summary_json) {
  return guarded([&] {
    require(params, "params");
    require(summary_json, "summary_json");
    vfmesh::SweepOptions opt;
    opt.L_min = params->L_min;
    opt.L_max = params->L_max;
    opt.L_count = params->L_count;
    opt.theta_count = params->theta_count;
    opt.offset_count = params->offset_count;
    opt.s = params->samples_per_axis;
    opt.window = params->window;
    opt.seed = params->seed;
    // Open the report first so a bad path fails before the sweep runs.
    std::ofstream csv;
    if (csv_path) csv = open_out(csv_path);
    const auto rep = vfmesh::sweep_gap(opt, csv_path != nullptr);
    if (csv_path) {
      vfmesh::write_sweep_csv(csv, rep);
      close_out(csv, csv_path);
    }
    *summary_json = dup_string(vfmesh::band_summary_json(rep));
  });
}

vfm_status vfm_area_a1(double theta, double L, double ell, double* area) {
  return guarded([&] {
    require(area, "area");
    *area = vfmesh::area_A1(theta, L, ell);
  });
}

vfm_status vfm_area_a2(double theta, double L, double ell, double* area) {
  return guarded([&] {
    require(area, "area");
    *area = vfmesh::area_A2(theta, L, ell);
  });
}

vfm_status vfm_counterexample_run(double corner_x, int levels, int samples_per_axis, int vf_samples, char** json) {
  return guarded([&] {
    require(json, "json");
    const auto lv = vfmesh::nonconvergence_case(corner_x, levels, samples_per_axis, vf_samples);
    *json = dup_string(vfmesh::nonconvergence_json(corner_x, lv));
  });
}

vfm_status vfm_wedge_run(double alpha, double ell, int samples_per_axis, int min_cells, char** json) {
  return guarded([&] {
    require(json, "json");
    *json = dup_string(vfmesh::wedge_json(vfmesh::wedge_case(alpha, ell, samples_per_axis, min_cells)));
  });
}

}  // extern "C"
