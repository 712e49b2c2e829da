// vfmesh command line: volume fractions, persistence, meshing and the
// theory harness, all through the C library interface.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "vfmesh/vfmesh.h"

namespace {

// Status from the library, carried out of the subcommand handlers.
struct Failure {
  vfm_status status;
  std::string message;
};

void check(vfm_status st) {
  if (st != VFM_OK) throw Failure{st, vfm_last_error()};
}

int exit_code(vfm_status st) { return st == VFM_INTERNAL ? 1 : 2; }

struct StringDeleter {
  void operator()(char* s) const { vfm_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <typename F>
std::string take_string(F&& call) {
  char* raw = nullptr;
  check(call(&raw));
  OwnedString owned(raw);
  return std::string(raw);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  out << text << '\n';
  if (!out) throw Failure{VFM_IO, "cannot write " + path};
}

struct SoupDeleter {
  void operator()(vfm_soup* p) const { vfm_soup_free(p); }
};
struct FieldDeleter {
  void operator()(vfm_field* p) const { vfm_field_free(p); }
};
struct DiagramDeleter {
  void operator()(vfm_diagram* p) const { vfm_diagram_free(p); }
};
struct MeshDeleter {
  void operator()(vfm_mesh* p) const { vfm_mesh_free(p); }
};
using Soup = std::unique_ptr<vfm_soup, SoupDeleter>;
using Field = std::unique_ptr<vfm_field, FieldDeleter>;
using Diagram = std::unique_ptr<vfm_diagram, DiagramDeleter>;
using Mesh = std::unique_ptr<vfm_mesh, MeshDeleter>;

struct GridArgs {
  std::string geometry;
  std::string format;
  double cell_size = 1.0;
  double rotation_deg = 0.0;
  std::vector<double> axis{0.0, 0.0, 1.0};
  std::vector<double> offset{0.0, 0.0, 0.0};
  int padding = 0;
  int samples = 0;
};

void add_grid_options(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("-g,--geometry", g.geometry, "Geometry file")->required();
  cmd->add_option("--format", g.format, "seg-text, obj-lines, obj-tris or stl (default: from extension)");
  cmd->add_option("-l,--cell-size", g.cell_size, "Background grid cell size")->capture_default_str();
  cmd->add_option("--rotation", g.rotation_deg, "Grid rotation in degrees")->capture_default_str();
  cmd->add_option("--axis", g.axis, "Rotation axis (3D)")->expected(3);
  cmd->add_option("--offset", g.offset, "Lattice offset in the rotated frame")->expected(2, 3);
  cmd->add_option("--padding", g.padding, "Empty cells added around the geometry")->capture_default_str();
  cmd->add_option("-s,--samples", g.samples, "Samples per cell axis, even (default 4 in 2D, 2 in 3D)");
}

Field load_field(const GridArgs& g) {
  vfm_soup* raw = nullptr;
  std::size_t dropped = 0;
  check(vfm_soup_load(g.geometry.c_str(), g.format.empty() ? nullptr : g.format.c_str(), &raw, &dropped));
  Soup soup(raw);
  if (dropped) std::cerr << "warning: dropped " << dropped << " degenerate elements\n";
  vfm_grid_params p;
  vfm_grid_params_default(&p);
  p.cell_size = g.cell_size;
  p.rotation = g.rotation_deg * std::numbers::pi / 180.0;
  for (int a = 0; a < 3; ++a) p.axis[a] = g.axis[a];
  for (std::size_t a = 0; a < g.offset.size() && a < 3; ++a) p.offset[a] = g.offset[a];
  p.padding = g.padding;
  p.samples_per_axis = g.samples;
  vfm_field* f = nullptr;
  check(vfm_field_compute(soup.get(), &p, &f));
  return Field(f);
}

struct MeshArgs {
  double vf = 0.5;
  bool antialias = true;
  bool join = true;
  bool separate_faces = false;
  int min_cells = 1;
  std::string policy = "separate";
};

void add_mesh_options(CLI::App* cmd, MeshArgs& m) {
  cmd->add_option("--vf", m.vf, "Volume-fraction threshold")->capture_default_str();
  cmd->add_flag("--antialias,!--no-antialias", m.antialias, "Pinch repair with subgrid templates")
      ->capture_default_str();
  cmd->add_flag("--join,!--no-join", m.join, "Bridge islands through interior edges")->capture_default_str();
  cmd->add_flag("--separate-faces", m.separate_faces, "Split retained neighbours across exterior edges (2D)");
  cmd->add_option("--min-cells", m.min_cells, "Remove components touching fewer cells")->capture_default_str();
  cmd->add_option("--policy", m.policy, "Conflict policy: separate, connect or majority")->capture_default_str();
}

vfm_mesh_params mesh_params(const MeshArgs& m) {
  vfm_mesh_params p;
  vfm_mesh_params_default(&p);
  p.vf_threshold = m.vf;
  p.antialias = m.antialias;
  p.join = m.join;
  p.separate_faces = m.separate_faces;
  p.min_cells = m.min_cells;
  p.conflict_policy = m.policy.c_str();
  return p;
}

int serve(const GridArgs& g, const MeshArgs& defaults, const std::string& host, int port,
          const std::string& static_dir) {
  const Field field = load_field(g);
  vfm_diagram* d = nullptr;
  check(vfm_diagram_compute(field.get(), &d));
  const Diagram diagram(d);
  const std::string name = std::filesystem::path(g.geometry).filename().string();
  const std::string meta = take_string([&](char** s) { return vfm_field_meta_json(field.get(), name.c_str(), s); });
  const std::string diagram_body = take_string([&](char** s) { return vfm_diagram_json(diagram.get(), s); });

  httplib::Server srv;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  auto fail_json = [](httplib::Response& res, int code, const std::string& msg) {
    res.status = code;
    res.set_content(nlohmann::json{{"error", msg}}.dump(), "application/json");
  };
  auto parse_vf = [](const httplib::Request& req, double fallback) {
    if (!req.has_param("vf")) return fallback;
    return std::stod(req.get_param_value("vf"));
  };
  srv.Get("/meta", [&](const httplib::Request&, httplib::Response& res) { res.set_content(meta, "application/json"); });
  srv.Get("/diagram", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(diagram_body, "application/json");
  });
  srv.Get("/betti", [&](const httplib::Request& req, httplib::Response& res) {
    try {
      const double vf = parse_vf(req, defaults.vf);
      res.set_content(take_string([&](char** s) { return vfm_betti_json(diagram.get(), vf, s); }), "application/json");
    } catch (const Failure& f) {
      fail_json(res, 400, f.message);
    } catch (const std::exception&) {
      fail_json(res, 400, "bad vf parameter");
    }
  });
  srv.Get("/mesh", [&](const httplib::Request& req, httplib::Response& res) {
    try {
      MeshArgs m = defaults;
      m.vf = parse_vf(req, defaults.vf);
      if (req.has_param("antialias")) {
        const std::string a = req.get_param_value("antialias");
        m.antialias = a == "true" || a == "1";
      }
      const vfm_mesh_params p = mesh_params(m);
      vfm_mesh* raw = nullptr;
      check(vfm_mesh_run(field.get(), &p, &raw));
      const Mesh mesh(raw);
      const std::string body = take_string([&](char** s) { return vfm_mesh_json(mesh.get(), s); });
      const std::string report = take_string([&](char** s) { return vfm_mesh_report_json(mesh.get(), s); });
      res.set_content("{\"mesh\":" + body + ",\"report\":" + report + "}", "application/json");
    } catch (const Failure& f) {
      fail_json(res, 400, f.message);
    } catch (const std::exception&) {
      fail_json(res, 400, "bad query parameter");
    }
  });
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (!static_dir.empty() && !srv.set_mount_point("/", static_dir))
    throw Failure{VFM_BAD_INPUT, "static directory not found: " + static_dir};

  // Port 0 asks the OS for a free port; the one chosen is reported below.
  if (port == 0) port = srv.bind_to_any_port(host);
  else if (!srv.bind_to_port(host, port)) port = -1;
  if (port <= 0) throw Failure{VFM_IO, "cannot bind " + host};
  std::cerr << "serving on http://" << host << ':' << port << std::endl;
  srv.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-fraction meshing with topological guidance"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.set_version_flag("--version", vfm_version());

  GridArgs grid;
  MeshArgs mesh;

  std::string out;
  auto* sample = app.add_subcommand("sample", "Write the volume-fraction field as CSV");
  add_grid_options(sample, grid);
  sample->add_option("-o,--out", out, "Field CSV path")->required();

  std::string diagram_csv = "diagram.csv", diagram_svg = "diagram.svg", betti_csv = "betti.csv";
  auto* persist = app.add_subcommand("persist", "Persistence diagram, SVG plot and Betti curve");
  add_grid_options(persist, grid);
  persist->add_option("--diagram", diagram_csv, "Diagram CSV path")->capture_default_str();
  persist->add_option("--svg", diagram_svg, "Diagram SVG path")->capture_default_str();
  persist->add_option("--betti", betti_csv, "Betti-curve CSV path")->capture_default_str();

  std::string mesh_out = "mesh.obj", report_out = "report.json", mesh_format;
  auto* meshcmd = app.add_subcommand("mesh", "Threshold, repair and export a mesh");
  add_grid_options(meshcmd, grid);
  add_mesh_options(meshcmd, mesh);
  meshcmd->add_option("-o,--out", mesh_out, "Mesh path (.obj or .vtk)")->capture_default_str();
  meshcmd->add_option("--mesh-format", mesh_format, "obj or vtk (default: from extension)");
  meshcmd->add_option("--report", report_out, "Repair report JSON path")->capture_default_str();

  vfm_sweep_params sweep_p;
  vfm_sweep_params_default(&sweep_p);
  std::string sweep_csv, sweep_summary;
  auto* sweep = app.add_subcommand("sweep", "Gap regime sweep over L, theta and lattice offset");
  sweep->add_option("--L-min", sweep_p.L_min, "Smallest gap, in cells")->capture_default_str();
  sweep->add_option("--L-max", sweep_p.L_max, "Largest gap, in cells")->capture_default_str();
  sweep->add_option("--L-count", sweep_p.L_count)->capture_default_str();
  sweep->add_option("--theta-count", sweep_p.theta_count)->capture_default_str();
  sweep->add_option("--offset-count", sweep_p.offset_count)->capture_default_str();
  sweep->add_option("-s,--samples", sweep_p.samples_per_axis)->capture_default_str();
  sweep->add_option("--window", sweep_p.window, "Cells per side of the analysis window")->capture_default_str();
  sweep->add_option("--seed", sweep_p.seed)->capture_default_str();
  sweep->add_option("--csv", sweep_csv, "Per-sample report CSV");
  sweep->add_option("--summary", sweep_summary, "Band summary JSON (default: stdout)");

  double corner = 2.0 / 3.0;
  int levels = 6, ce_samples = 16, ce_vf_samples = 32;
  std::string ce_out;
  auto* counter = app.add_subcommand("counterexample", "Non-convergence of B0 under refinement");
  counter->add_option("--corner", corner, "x coordinate of the shared corner")->capture_default_str();
  counter->add_option("--levels", levels, "Refinement levels")->capture_default_str();
  counter->add_option("-s,--samples", ce_samples)->capture_default_str();
  counter->add_option("--vf-samples", ce_vf_samples, "Samples for the corner cell value")->capture_default_str();
  counter->add_option("-o,--out", ce_out, "JSON path (default: stdout)");

  double alpha_deg = 5.0, wedge_ell = 1.0;
  int wedge_s = 4, wedge_min = 3;
  std::string wedge_out;
  auto* wedge = app.add_subcommand("wedge", "Archipelago band along a thin wedge");
  wedge->add_option("--alpha", alpha_deg, "Opening angle in degrees")->capture_default_str();
  wedge->add_option("-l,--cell-size", wedge_ell)->capture_default_str();
  wedge->add_option("-s,--samples", wedge_s)->capture_default_str();
  wedge->add_option("--min-cells", wedge_min)->capture_default_str();
  wedge->add_option("-o,--out", wedge_out, "JSON path (default: stdout)");

  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  auto* servecmd = app.add_subcommand("serve", "HTTP backend for the threshold explorer");
  add_grid_options(servecmd, grid);
  add_mesh_options(servecmd, mesh);
  servecmd->add_option("--host", host)->capture_default_str();
  servecmd->add_option("-p,--port", port, "0 picks a free port")->capture_default_str();
  servecmd->add_option("--static", static_dir, "Directory of UI assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sample) {
      const Field f = load_field(grid);
      check(vfm_field_write_csv(f.get(), out.c_str()));
    } else if (*persist) {
      const Field f = load_field(grid);
      vfm_diagram* d = nullptr;
      check(vfm_diagram_compute(f.get(), &d));
      const Diagram diag(d);
      check(vfm_diagram_write(diag.get(), diagram_csv.c_str(), diagram_svg.c_str(), betti_csv.c_str()));
      int b[3];
      check(vfm_diagram_betti(diag.get(), 0.5, b));
      std::cout << "pairs " << vfm_diagram_pair_count(diag.get()) << ", betti at vf=0.5: " << b[0] << ' ' << b[1]
                << ' ' << b[2] << '\n';
    } else if (*meshcmd) {
      const Field f = load_field(grid);
      const vfm_mesh_params p = mesh_params(mesh);
      vfm_mesh* raw = nullptr;
      check(vfm_mesh_run(f.get(), &p, &raw));
      const Mesh m(raw);
      check(vfm_mesh_write(m.get(), mesh_out.c_str(), mesh_format.empty() ? nullptr : mesh_format.c_str()));
      emit(take_string([&](char** s) { return vfm_mesh_report_json(m.get(), s); }), report_out);
      int before = 0, after = 0;
      std::size_t pinches = 0, elements = 0;
      check(vfm_mesh_counts(m.get(), &before, &after, &pinches, &elements));
      std::cout << "components " << before << " -> " << after << ", pinches " << pinches << ", elements "
                << elements << '\n';
    } else if (*sweep) {
      const char* csv = sweep_csv.empty() ? nullptr : sweep_csv.c_str();
      emit(take_string([&](char** s) { return vfm_sweep_run(&sweep_p, csv, s); }), sweep_summary);
    } else if (*counter) {
      emit(take_string([&](char** s) { return vfm_counterexample_run(corner, levels, ce_samples, ce_vf_samples, s); }),
           ce_out);
    } else if (*wedge) {
      const double alpha = alpha_deg * std::numbers::pi / 180.0;
      emit(take_string([&](char** s) { return vfm_wedge_run(alpha, wedge_ell, wedge_s, wedge_min, s); }), wedge_out);
    } else if (*servecmd) {
      return serve(grid, mesh, host, port, static_dir);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
