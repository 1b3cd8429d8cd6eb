/* xcut: central symmetry of plane loops and central cross-cuts of surfaces.
 *
 * Objects are opaque handles created by xcut_*_generate / _read / _create and
 * released by the matching _free function (free functions accept NULL).
 * Every other call returns an xcut_status; on failure the message of the
 * most recent error on the calling thread is available from xcut_last_error.
 *
 * Rich results come back as JSON text (char** json) owned by the caller and
 * released with xcut_string_free. `config` arguments are NULL or a JSON
 * object of overrides (keys listed in docs/report-format.md); `plot`
 * arguments are NULL or the path of an SVG file to write.
 */
#ifndef XCUT_XCUT_H
#define XCUT_XCUT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define XCUT_API __declspec(dllexport)
#else
#  define XCUT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xcut_status {
  XCUT_OK = 0,
  XCUT_E_INVALID_ARGUMENT,
  XCUT_E_INVALID_SPEC,
  XCUT_E_NON_IMMERSED,
  XCUT_E_INDEX_UNRESOLVED,
  XCUT_E_CONTINUUM_INTERSECTION,
  XCUT_E_NOT_NORMALIZED,
  XCUT_E_UNCLEAN_INPUT,
  XCUT_E_DICHOTOMY_VIOLATION,
  XCUT_E_NON_TRANSVERSE_CONTACT,
  XCUT_E_COMPONENT_LOST,
  XCUT_E_INDEX_JUMP,
  XCUT_E_NOT_CENTRAL,
  XCUT_E_DEGENERATE_INPUT,
  XCUT_E_GENERATION_EXHAUSTED,
  XCUT_E_STEP_TOO_COARSE,
  XCUT_E_IO,
  XCUT_E_PARSE,
  XCUT_E_OUT_OF_MEMORY,
  XCUT_E_INTERNAL
} xcut_status;

typedef enum xcut_orientation { XCUT_PRESERVES = 0, XCUT_REVERSES = 1, XCUT_NO_MATCH = 2 } xcut_orientation;
typedef enum xcut_loop_case { XCUT_CASE_A = 0, XCUT_CASE_B = 1, XCUT_NOT_CENTRAL = 2, XCUT_UNCLEAN = 3 } xcut_loop_case;
typedef enum xcut_verdict {
  XCUT_CENTRAL_CYLINDER = 0,
  XCUT_NOT_APPLICABLE = 1,
  XCUT_INCONSISTENT = 2
} xcut_verdict;

typedef struct xcut_curve xcut_curve;
typedef struct xcut_surface xcut_surface;
typedef struct xcut_sweep xcut_sweep;

typedef struct xcut_plane {
  double normal[3]; /* normalized on use; must be nonzero */
  double point[3];
} xcut_plane;

typedef struct xcut_symmetry {
  int center_found;
  double center[2];
  xcut_orientation orientation;
  double residual;
} xcut_symmetry;

typedef struct xcut_pipeline_result {
  xcut_verdict verdict;
  double axis[3];
  double center[3];
  double verified_half_width;
  double trapping_residual;
  double straightness;
  double cylinder_violation;
} xcut_pipeline_result;

XCUT_API const char* xcut_version(void);
XCUT_API const char* xcut_status_name(xcut_status status);
XCUT_API const char* xcut_last_error(void);
XCUT_API void xcut_string_free(char* s);

/* Curves */
XCUT_API xcut_status xcut_curve_generate(const char* spec, xcut_curve** out);
XCUT_API xcut_status xcut_curve_read(const char* path, xcut_curve** out);
/* coefficients: `count` (re, im) pairs for frequencies min_frequency, min_frequency + 1, ... */
XCUT_API xcut_status xcut_curve_from_fourier(int min_frequency, const double* coefficients, size_t count,
                                             xcut_curve** out);
/* samples: `count` (x, y) pairs, uniform in the parameter */
XCUT_API xcut_status xcut_curve_from_samples(const double* samples, size_t count, xcut_curve** out);
XCUT_API xcut_status xcut_curve_write(const xcut_curve* curve, const char* path);
XCUT_API void xcut_curve_free(xcut_curve* curve);

/* out = {x, y, x', y', x'', y''} */
XCUT_API xcut_status xcut_curve_evaluate(const xcut_curve* curve, double t, double out[6]);
XCUT_API xcut_status xcut_curve_length(const xcut_curve* curve, double* out);
XCUT_API xcut_status xcut_curve_centroid(const xcut_curve* curve, double out[2]);
XCUT_API xcut_status xcut_curve_curvature(const xcut_curve* curve, double t, double* out);
XCUT_API xcut_status xcut_curve_rotation_index(const xcut_curve* curve, int* out);
/* x -> A x + b, A row-major 2x2 */
XCUT_API xcut_status xcut_curve_transform(const xcut_curve* curve, const double A[4], const double b[2],
                                          xcut_curve** out);

XCUT_API xcut_status xcut_detect_center(const xcut_curve* curve, int search, const char* config, xcut_symmetry* out);
XCUT_API xcut_status xcut_analyze_curve(const xcut_curve* curve, const char* config, const char* plot, char** json);
XCUT_API xcut_status xcut_match(const xcut_curve* a, const xcut_curve* b, const char* config, const char* plot,
                                char** json);
XCUT_API xcut_status xcut_classify_curve(const xcut_curve* curve, const char* config, const char* plot, char** json);

/* Surfaces: `spec` is a corpus name such as "fig8-cylinder" or "sphere:r=2";
 * files are Wavefront OBJ meshes or xcut-surface JSON records. */
XCUT_API xcut_status xcut_surface_generate(const char* spec, xcut_surface** out);
XCUT_API xcut_status xcut_surface_read(const char* path, xcut_surface** out);
/* Writes the surface record (path ending in .json) or a tessellation at `scale` (.obj). */
XCUT_API xcut_status xcut_surface_spec_write(const char* spec, double scale, const char* path);
/* x -> R x + t, R row-major 3x3 rotation */
XCUT_API xcut_status xcut_surface_transform(const xcut_surface* surface, const double R[9], const double t[3],
                                            xcut_surface** out);
XCUT_API void xcut_surface_free(xcut_surface* surface);

XCUT_API xcut_status xcut_slice(const xcut_surface* surface, const xcut_plane* plane, const char* config,
                                const char* plot, char** json);

/* component < 0 selects the compact cut nearest the plane's point. */
XCUT_API xcut_status xcut_sweep_create(const xcut_surface* surface, const xcut_plane* plane, double half_width,
                                       int steps, int component, const char* config, xcut_sweep** out);
XCUT_API void xcut_sweep_free(xcut_sweep* sweep);
/* Writes up to `capacity` centers as (x, y, z) triples; *count receives the station count. */
XCUT_API xcut_status xcut_sweep_central_curve(const xcut_sweep* sweep, double* xyz, size_t capacity, size_t* count);
XCUT_API xcut_status xcut_sweep_report(const xcut_sweep* sweep, const char* plot, char** json);
XCUT_API xcut_status xcut_tilt_center(const xcut_surface* surface, const xcut_sweep* sweep, double height,
                                      const double v[3], const char* config, double out[3]);

XCUT_API xcut_status xcut_axis_straightness(const double* xyz, size_t count, double* out);
XCUT_API xcut_status xcut_cylinder_test(const xcut_surface* surface, const xcut_plane* plane, double half_width,
                                        const double v[3], double tolerance, int* flag, double* violation);

/* `result` and `json` may each be NULL. */
XCUT_API xcut_status xcut_run_pipeline(const xcut_surface* surface, const xcut_plane* plane, const char* config,
                                       const char* plot, xcut_pipeline_result* result, char** json);

/* name: sphere-tilt, reflections, unclean-loop, dichotomy, even-index; params: NULL or a JSON object. */
XCUT_API xcut_status xcut_demo(const char* name, const char* params, const char* config, const char* plot,
                               char** json);

/* The effective configuration (defaults merged with `config`) as JSON. */
XCUT_API xcut_status xcut_config(const char* config, char** json);

#ifdef __cplusplus
}
#endif

#endif
