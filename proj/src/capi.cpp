#include "xcut/xcut.h"

#include "analysis.hpp"
#include "error.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <optional>

struct xcut_curve {
  xcut::ClosedCurve curve;
};
struct xcut_surface {
  xcut::Surface surface;
};
struct xcut_sweep {
  xcut::TubularSweep sweep;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

static_assert(static_cast<int>(xcut::ErrorCode::ParseError) + 1 == XCUT_E_PARSE, "status codes mirror ErrorCode");

xcut_status from_code(xcut::ErrorCode c) { return static_cast<xcut_status>(static_cast<int>(c) + 1); }

template <class F>
xcut_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return XCUT_OK;
  } catch (const xcut::Error& e) {
    g_last_error = e.what();
    return from_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return XCUT_E_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return XCUT_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) xcut::fail(xcut::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_arg(const char* text, const char* what) {
  if (!text || !*text) return json(nullptr);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    xcut::fail(xcut::ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

xcut::PipelineConfig config_of(const char* text) { return xcut::config_from_json(parse_arg(text, "config")); }
std::string plot_of(const char* p) { return p ? p : ""; }

xcut::Plane3 plane_of(const xcut_plane* p) {
  need(p, "plane");
  xcut::Vec3 n(p->normal[0], p->normal[1], p->normal[2]);
  if (!(n.norm() > 0) || !n.allFinite()) xcut::fail(xcut::ErrorCode::InvalidArgument, "plane normal must be nonzero");
  return xcut::Plane3(n.normalized(), xcut::Vec3(p->point[0], p->point[1], p->point[2]));
}

void emit(char** out, const xcut::Analysis& an) {
  need(out, "json output");
  *out = dup(an.to_json().dump());
}

xcut::Vec3 vec3(const double* v) { return {v[0], v[1], v[2]}; }

}  // namespace

extern "C" {

const char* xcut_version(void) { return "1.0.0"; }

const char* xcut_status_name(xcut_status s) {
  switch (s) {
    case XCUT_OK: return "Ok";
    case XCUT_E_OUT_OF_MEMORY: return "OutOfMemory";
    case XCUT_E_INTERNAL: return "Internal";
    default:
      if (s > XCUT_OK && s <= XCUT_E_PARSE) return xcut::to_string(static_cast<xcut::ErrorCode>(s - 1));
      return "Unknown";
  }
}

const char* xcut_last_error(void) { return g_last_error.c_str(); }
void xcut_string_free(char* s) { std::free(s); }

xcut_status xcut_curve_generate(const char* spec, xcut_curve** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new xcut_curve{xcut::generate(xcut::parse_curve_spec(spec))};
  });
}

xcut_status xcut_curve_read(const char* path, xcut_curve** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new xcut_curve{xcut::read_curve_file(path)};
  });
}

xcut_status xcut_curve_from_fourier(int min_frequency, const double* coefficients, size_t count, xcut_curve** out) {
  return guarded([&] {
    need(coefficients, "coefficients");
    need(out, "out");
    std::vector<std::complex<double>> cs(count);
    for (size_t k = 0; k < count; ++k) cs[k] = {coefficients[2 * k], coefficients[2 * k + 1]};
    *out = new xcut_curve{xcut::ClosedCurve::from_fourier(min_frequency, std::move(cs))};
  });
}

xcut_status xcut_curve_from_samples(const double* samples, size_t count, xcut_curve** out) {
  return guarded([&] {
    need(samples, "samples");
    need(out, "out");
    std::vector<xcut::Vec2> ps(count);
    for (size_t k = 0; k < count; ++k) ps[k] = {samples[2 * k], samples[2 * k + 1]};
    *out = new xcut_curve{xcut::ClosedCurve::from_samples(std::move(ps))};
  });
}

xcut_status xcut_curve_write(const xcut_curve* curve, const char* path) {
  return guarded([&] {
    need(curve, "curve");
    need(path, "path");
    xcut::write_curve_file(path, curve->curve);
  });
}

void xcut_curve_free(xcut_curve* curve) { delete curve; }

xcut_status xcut_curve_evaluate(const xcut_curve* curve, double t, double out[6]) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    xcut::CurvePoint p = curve->curve.evaluate(t);
    const double v[6] = {p.position.x(), p.position.y(), p.velocity.x(), p.velocity.y(), p.acceleration.x(),
                         p.acceleration.y()};
    std::memcpy(out, v, sizeof v);
  });
}

xcut_status xcut_curve_length(const xcut_curve* curve, double* out) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    *out = curve->curve.length();
  });
}

xcut_status xcut_curve_centroid(const xcut_curve* curve, double out[2]) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    xcut::Vec2 c = xcut::centroid(curve->curve);
    out[0] = c.x();
    out[1] = c.y();
  });
}

xcut_status xcut_curve_curvature(const xcut_curve* curve, double t, double* out) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    *out = xcut::geodesic_curvature(curve->curve, t);
  });
}

xcut_status xcut_curve_rotation_index(const xcut_curve* curve, int* out) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    *out = xcut::rotation_index(curve->curve).index;
  });
}

xcut_status xcut_curve_transform(const xcut_curve* curve, const double A[4], const double b[2], xcut_curve** out) {
  return guarded([&] {
    need(curve, "curve");
    need(A, "A");
    need(b, "b");
    need(out, "out");
    xcut::Mat2 M;
    M << A[0], A[1], A[2], A[3];
    *out = new xcut_curve{curve->curve.transformed(M, xcut::Vec2(b[0], b[1]))};
  });
}

xcut_status xcut_detect_center(const xcut_curve* curve, int search, const char* config, xcut_symmetry* out) {
  return guarded([&] {
    need(curve, "curve");
    need(out, "out");
    auto cfg = config_of(config);
    auto r = xcut::detect_center(curve->curve, search ? xcut::CenterMode::Search : xcut::CenterMode::Centroid,
                                 cfg.sweep.symmetry);
    out->center_found = r.center_found ? 1 : 0;
    out->center[0] = r.center.x();
    out->center[1] = r.center.y();
    out->orientation = static_cast<xcut_orientation>(r.orientation);
    out->residual = r.residual;
  });
}

xcut_status xcut_analyze_curve(const xcut_curve* curve, const char* config, const char* plot, char** json) {
  return guarded([&] {
    need(curve, "curve");
    emit(json, xcut::analyze_curve(curve->curve, config_of(config), plot_of(plot)));
  });
}

xcut_status xcut_match(const xcut_curve* a, const xcut_curve* b, const char* config, const char* plot, char** json) {
  return guarded([&] {
    need(a, "curve a");
    need(b, "curve b");
    emit(json, xcut::analyze_match(a->curve, b->curve, config_of(config), plot_of(plot)));
  });
}

xcut_status xcut_classify_curve(const xcut_curve* curve, const char* config, const char* plot, char** json) {
  return guarded([&] {
    need(curve, "curve");
    emit(json, xcut::analyze_classify(curve->curve, config_of(config), plot_of(plot)));
  });
}

xcut_status xcut_surface_generate(const char* spec, xcut_surface** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new xcut_surface{xcut::generate_surface(xcut::parse_surface_spec(spec))};
  });
}

xcut_status xcut_surface_read(const char* path, xcut_surface** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new xcut_surface{xcut::read_surface_file(path)};
  });
}

xcut_status xcut_surface_spec_write(const char* spec, double scale, const char* path) {
  return guarded([&] {
    need(spec, "spec");
    need(path, "path");
    xcut::SurfaceSpec s = xcut::parse_surface_spec(spec);
    std::string p(path);
    if (p.size() >= 4 && (p.compare(p.size() - 4, 4, ".obj") == 0 || p.compare(p.size() - 4, 4, ".OBJ") == 0)) {
      if (!(scale > 0)) xcut::fail(xcut::ErrorCode::InvalidArgument, "tessellation scale must be positive");
      xcut::TriangleMesh m = xcut::generate_surface(s).tessellate(scale);
      std::ofstream out(p);
      if (!out) xcut::fail(xcut::ErrorCode::IoError, "cannot write " + p);
      xcut::write_obj(out, m, xcut::to_string(s));
      if (!out) xcut::fail(xcut::ErrorCode::IoError, "write failed for " + p);
    } else {
      xcut::generate_surface(s);  // validates the spec
      xcut::write_json(p, xcut::surface_record(s));
    }
  });
}

xcut_status xcut_surface_transform(const xcut_surface* surface, const double R[9], const double t[3],
                                   xcut_surface** out) {
  return guarded([&] {
    need(surface, "surface");
    need(R, "R");
    need(t, "t");
    need(out, "out");
    xcut::RigidMotion m;
    m.rotation << R[0], R[1], R[2], R[3], R[4], R[5], R[6], R[7], R[8];
    if (!(m.rotation.transpose() * m.rotation).isApprox(xcut::Mat3::Identity(), 1e-12) || m.rotation.determinant() < 0)
      xcut::fail(xcut::ErrorCode::InvalidArgument, "R must be a rotation");
    m.translation = vec3(t);
    *out = new xcut_surface{surface->surface.transformed(m)};
  });
}

void xcut_surface_free(xcut_surface* surface) { delete surface; }

xcut_status xcut_slice(const xcut_surface* surface, const xcut_plane* plane, const char* config, const char* plot,
                       char** json) {
  return guarded([&] {
    need(surface, "surface");
    emit(json, xcut::analyze_slice(surface->surface, plane_of(plane), config_of(config), plot_of(plot)));
  });
}

xcut_status xcut_sweep_create(const xcut_surface* surface, const xcut_plane* plane, double half_width, int steps,
                              int component, const char* config, xcut_sweep** out) {
  return guarded([&] {
    need(surface, "surface");
    need(out, "out");
    auto cfg = config_of(config);
    std::optional<int> comp;
    if (component >= 0) comp = component;
    *out = new xcut_sweep{xcut::sweep(surface->surface, plane_of(plane), half_width, steps, cfg.sweep, comp)};
  });
}

void xcut_sweep_free(xcut_sweep* sweep) { delete sweep; }

xcut_status xcut_sweep_central_curve(const xcut_sweep* sweep, double* xyz, size_t capacity, size_t* count) {
  return guarded([&] {
    need(sweep, "sweep");
    need(count, "count");
    auto mu = sweep->sweep.central_curve();
    *count = mu.size();
    if (capacity > 0) need(xyz, "xyz");
    for (size_t k = 0; k < mu.size() && k < capacity; ++k)
      for (int i = 0; i < 3; ++i) xyz[3 * k + i] = mu[k][i];
  });
}

xcut_status xcut_sweep_report(const xcut_sweep* sweep, const char* plot, char** json) {
  return guarded([&] {
    need(sweep, "sweep");
    emit(json, xcut::analyze_sweep(sweep->sweep, plot_of(plot)));
  });
}

xcut_status xcut_tilt_center(const xcut_surface* surface, const xcut_sweep* sweep, double height, const double v[3],
                             const char* config, double out[3]) {
  return guarded([&] {
    need(surface, "surface");
    need(sweep, "sweep");
    need(v, "v");
    need(out, "out");
    auto cfg = config_of(config);
    xcut::Vec3 c = xcut::tilt_center(surface->surface, sweep->sweep, height, vec3(v), cfg.sweep).center;
    for (int i = 0; i < 3; ++i) out[i] = c[i];
  });
}

xcut_status xcut_axis_straightness(const double* xyz, size_t count, double* out) {
  return guarded([&] {
    need(out, "out");
    if (count > 0) need(xyz, "xyz");
    std::vector<xcut::Vec3> pts(count);
    for (size_t k = 0; k < count; ++k) pts[k] = vec3(xyz + 3 * k);
    *out = xcut::axis_straightness(pts).value;
  });
}

xcut_status xcut_cylinder_test(const xcut_surface* surface, const xcut_plane* plane, double half_width,
                               const double v[3], double tolerance, int* flag, double* violation) {
  return guarded([&] {
    need(surface, "surface");
    need(v, "v");
    auto r = xcut::cylinder_test(surface->surface, plane_of(plane), half_width, vec3(v), tolerance);
    if (flag) *flag = r.flag ? 1 : 0;
    if (violation) *violation = r.violation;
  });
}

xcut_status xcut_run_pipeline(const xcut_surface* surface, const xcut_plane* plane, const char* config,
                              const char* plot, xcut_pipeline_result* result, char** json) {
  return guarded([&] {
    need(surface, "surface");
    xcut::Analysis an = xcut::analyze_pipeline(surface->surface, plane_of(plane), config_of(config), plot_of(plot));
    if (result) {
      const auto& r = an.results;
      // Reports write non-finite numbers as null.
      auto number = [](const nlohmann::json& x) {
        return x.is_number() ? x.get<double>() : std::numeric_limits<double>::quiet_NaN();
      };
      const std::string v = r.at("verdict").get<std::string>();
      result->verdict = v == "CentralCylinder" ? XCUT_CENTRAL_CYLINDER
                        : v == "Inconsistent"  ? XCUT_INCONSISTENT
                                               : XCUT_NOT_APPLICABLE;
      for (int i = 0; i < 3; ++i) {
        result->axis[i] = r.contains("axis") ? number(r["axis"][i]) : 0.0;
        result->center[i] = r.contains("center") ? number(r["center"][i]) : 0.0;
      }
      result->verified_half_width = r.contains("verified_half_width") ? number(r["verified_half_width"]) : 0.0;
      result->trapping_residual = number(r.at("trapping_residual"));
      result->straightness = number(r.at("straightness"));
      result->cylinder_violation = number(r.at("cylinder_violation"));
    }
    if (json) *json = dup(an.to_json().dump());
  });
}

xcut_status xcut_demo(const char* name, const char* params, const char* config, const char* plot, char** json) {
  return guarded([&] {
    need(name, "name");
    emit(json, xcut::run_demo(name, parse_arg(params, "params"), config_of(config), plot_of(plot)));
  });
}

xcut_status xcut_config(const char* config, char** json) {
  return guarded([&] {
    need(json, "json output");
    *json = dup(xcut::config_to_json(config_of(config)).dump());
  });
}

}  // extern "C"
