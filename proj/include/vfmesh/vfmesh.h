/* C interface to the vfmesh library. Every function returns a status code;
 * on failure vfm_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released
 * with vfm_string_free. */
#ifndef VFMESH_H
#define VFMESH_H

#include <stddef.h>

#if defined(VFM_BUILDING_LIBRARY)
#define VFM_API __attribute__((visibility("default")))
#else
#define VFM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum { VFM_OK = 0, VFM_INTERNAL = 1, VFM_BAD_INPUT = 2, VFM_IO = 3 } vfm_status;

typedef struct vfm_soup vfm_soup;
typedef struct vfm_field vfm_field;
typedef struct vfm_diagram vfm_diagram;
typedef struct vfm_mesh vfm_mesh;

VFM_API const char* vfm_version(void);
VFM_API const char* vfm_last_error(void);
VFM_API void vfm_string_free(char* s);

/* Geometry. format may be NULL to guess from the file extension. */
VFM_API vfm_status vfm_soup_load(const char* path, const char* format, vfm_soup** out, size_t* dropped);
VFM_API vfm_status vfm_soup_parse(const char* text, const char* format, vfm_soup** out, size_t* dropped);
VFM_API void vfm_soup_free(vfm_soup* soup);
VFM_API int vfm_soup_dimension(const vfm_soup* soup);
VFM_API size_t vfm_soup_size(const vfm_soup* soup);
/* Generalized winding number at p (z ignored in 2D). */
VFM_API vfm_status vfm_winding(const vfm_soup* soup, const double p[3], double* value, int* on_boundary);

typedef struct {
  double cell_size;
  double rotation;   /* radians */
  double axis[3];    /* rotation axis in 3D */
  double offset[3];  /* lattice shift in the rotated frame */
  int padding;
  int samples_per_axis; /* even; 0 selects 4 in 2D and 2 in 3D */
} vfm_grid_params;

VFM_API void vfm_grid_params_default(vfm_grid_params* p);

/* Volume fractions on the grid built around the soup. */
VFM_API vfm_status vfm_field_compute(const vfm_soup* soup, const vfm_grid_params* params, vfm_field** out);
VFM_API void vfm_field_free(vfm_field* field);
VFM_API vfm_status vfm_field_extents(const vfm_field* field, int* dimension, int extents[3]);
VFM_API vfm_status vfm_field_cell(const vfm_field* field, int i, int j, int k, double* vf);
VFM_API vfm_status vfm_field_write_csv(const vfm_field* field, const char* path);
VFM_API vfm_status vfm_field_meta_json(const vfm_field* field, const char* geometry_name, char** json);

/* Persistence of the dual complex, filtration value 1 - vf. */
VFM_API vfm_status vfm_diagram_compute(const vfm_field* field, vfm_diagram** out);
VFM_API void vfm_diagram_free(vfm_diagram* diagram);
VFM_API size_t vfm_diagram_pair_count(const vfm_diagram* diagram);
/* birth and death are filtration values; an essential class dies at +inf. */
VFM_API vfm_status vfm_diagram_pair(const vfm_diagram* diagram, size_t index, int* dim, double* birth, double* death);
VFM_API vfm_status vfm_diagram_betti(const vfm_diagram* diagram, double vf, int betti[3]);
/* Any path may be NULL to skip that file. */
VFM_API vfm_status vfm_diagram_write(const vfm_diagram* diagram, const char* csv_path, const char* svg_path,
                                     const char* betti_csv_path);
VFM_API vfm_status vfm_diagram_json(const vfm_diagram* diagram, char** json);
VFM_API vfm_status vfm_betti_json(const vfm_diagram* diagram, double vf, char** json);

typedef struct {
  double vf_threshold;
  int antialias;
  int join;
  int separate_faces;
  int min_cells;
  const char* conflict_policy; /* "separate", "connect" or "majority"; NULL for separate */
} vfm_mesh_params;

VFM_API void vfm_mesh_params_default(vfm_mesh_params* p);
VFM_API vfm_status vfm_mesh_run(const vfm_field* field, const vfm_mesh_params* params, vfm_mesh** out);
VFM_API void vfm_mesh_free(vfm_mesh* mesh);
VFM_API vfm_status vfm_mesh_counts(const vfm_mesh* mesh, int* components_before, int* components_after,
                                   size_t* pinches, size_t* elements);
/* format: "obj" or "vtk"; NULL guesses from the extension. */
VFM_API vfm_status vfm_mesh_write(const vfm_mesh* mesh, const char* path, const char* format);
VFM_API vfm_status vfm_mesh_report_json(const vfm_mesh* mesh, char** json);
VFM_API vfm_status vfm_mesh_json(const vfm_mesh* mesh, char** json);

/* Theory harness. */
typedef struct {
  double L_min, L_max; /* in cells */
  int L_count, theta_count, offset_count;
  int samples_per_axis;
  int window;
  unsigned long long seed;
} vfm_sweep_params;

VFM_API void vfm_sweep_params_default(vfm_sweep_params* p);
/* csv_path may be NULL. */
VFM_API vfm_status vfm_sweep_run(const vfm_sweep_params* params, const char* csv_path, char** summary_json);
VFM_API vfm_status vfm_area_a1(double theta, double L, double ell, double* area);
VFM_API vfm_status vfm_area_a2(double theta, double L, double ell, double* area);
VFM_API vfm_status vfm_counterexample_run(double corner_x, int levels, int samples_per_axis, int vf_samples,
                                          char** json);
VFM_API vfm_status vfm_wedge_run(double alpha, double ell, int samples_per_axis, int min_cells, char** json);

#ifdef __cplusplus
}
#endif

#endif
