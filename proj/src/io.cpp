#include "io.hpp"

#include "error.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace xcut {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ParseError, std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

json parse_stream(std::istream& in, const std::string& what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, what + ": " + e.what());
  }
}

// JSON has no infinity; non-finite values are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json curve_to_json(const ClosedCurve& curve) {
  json j = {{"format", "xcut-curve"}, {"version", kCurveFormatVersion}};
  if (!curve.name().empty()) j["name"] = curve.name();
  if (curve.kind() == CurveKind::Fourier) {
    j["type"] = "fourier";
    j["min_frequency"] = curve.min_frequency();
    json cs = json::array();
    for (const auto& c : curve.coefficients()) cs.push_back({c.real(), c.imag()});
    j["coefficients"] = std::move(cs);
  } else {
    j["type"] = "samples";
    json ps = json::array();
    for (const auto& p : curve.samples()) ps.push_back({p.x(), p.y()});
    j["samples"] = std::move(ps);
  }
  return j;
}

ClosedCurve curve_from_json(const json& j) {
  try {
    if (require(j, "format", "curve") != "xcut-curve") fail(ErrorCode::ParseError, "curve: format is not xcut-curve");
    int version = require(j, "version", "curve").get<int>();
    if (version < 1 || version > kCurveFormatVersion)
      fail(ErrorCode::ParseError, "curve: unsupported version " + std::to_string(version));
    std::string type = require(j, "type", "curve").get<std::string>();
    std::string name = j.value("name", std::string());
    if (type == "fourier") {
      std::vector<std::complex<double>> cs;
      for (const auto& c : require(j, "coefficients", "curve")) {
        if (!c.is_array() || c.size() != 2) fail(ErrorCode::ParseError, "curve: coefficients must be [re, im] pairs");
        cs.emplace_back(c[0].get<double>(), c[1].get<double>());
      }
      return ClosedCurve::from_fourier(require(j, "min_frequency", "curve").get<int>(), std::move(cs), name);
    }
    if (type == "samples") {
      std::vector<Vec2> ps;
      for (const auto& p : require(j, "samples", "curve")) {
        if (!p.is_array() || p.size() != 2) fail(ErrorCode::ParseError, "curve: samples must be [x, y] pairs");
        ps.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      return ClosedCurve::from_samples(std::move(ps), name);
    }
    fail(ErrorCode::ParseError, "curve: unknown type '" + type + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("curve: ") + e.what());
  }
}

ClosedCurve read_curve(std::istream& in) { return curve_from_json(parse_stream(in, "curve")); }

ClosedCurve read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_curve(in);
}

void write_curve_file(const std::string& path, const ClosedCurve& curve) { write_json(path, curve_to_json(curve)); }

json surface_record(const SurfaceSpec& spec) {
  return {{"format", "xcut-surface"}, {"version", kCurveFormatVersion}, {"spec", to_json(spec)}};
}

Surface read_surface_file(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".obj" || ext == ".OBJ") {
    auto slash = path.find_last_of('/');
    return Surface::mesh(path.substr(slash == std::string::npos ? 0 : slash + 1), read_obj_file(path));
  }
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  json j = parse_stream(in, "surface");
  try {
    if (require(j, "format", "surface") != "xcut-surface")
      fail(ErrorCode::ParseError, "surface: format is not xcut-surface");
    int version = require(j, "version", "surface").get<int>();
    if (version < 1 || version > kCurveFormatVersion)
      fail(ErrorCode::ParseError, "surface: unsupported version " + std::to_string(version));
    return generate_surface(surface_spec_from_json(require(j, "spec", "surface")));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("surface: ") + e.what());
  }
}

json to_json(const Vec2& v) { return {num(v.x()), num(v.y())}; }
json to_json(const Vec3& v) { return {num(v.x()), num(v.y()), num(v.z())}; }
json to_json(const Plane3& p) { return {{"normal", to_json(p.normal())}, {"point", to_json(p.point())}}; }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) fail(ErrorCode::ParseError, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Plane3 plane_from_json(const json& j) {
  Vec3 n = vec3_from_json(require(j, "normal", "plane"));
  if (!(n.norm() > 0)) fail(ErrorCode::InvalidArgument, "plane normal must be nonzero");
  return Plane3(n.normalized(), vec3_from_json(require(j, "point", "plane")));
}

json to_json(const DoublePoint& d) {
  json angles = json::array();
  for (const auto& row : d.tangent_angles) {
    json r = json::array();
    for (double a : row) r.push_back(num(a));
    angles.push_back(std::move(r));
  }
  return {{"location", to_json(d.location)},
          {"preimages", d.preimages},
          {"tangent_angles", std::move(angles)},
          {"simple", d.simple},
          {"clean", d.clean}};
}

json to_json(const MatchResult& m) {
  return {{"orientation", to_string(m.orientation)},
          {"residual", num(m.residual)},
          {"phase", num(m.phase)},
          {"advisory", m.advisory},
          {"note", m.note}};
}

json to_json(const SymmetryReport& r) {
  json dps = json::array();
  for (const auto& d : r.double_points) dps.push_back(to_json(d));
  return {{"mode", to_string(r.mode)},
          {"center_found", r.center_found},
          {"center", to_json(r.center)},
          {"centroid", to_json(r.centroid)},
          {"orientation", to_string(r.orientation)},
          {"residual", num(r.residual)},
          {"match_residual", num(r.match_residual)},
          {"match_advisory", r.match_advisory},
          {"diameter_central", r.diameter_central},
          {"phase", num(r.phase)},
          {"case", to_string(r.loop_case)},
          {"rotation_index", r.rotation_index},
          {"margin", num(r.margin)},
          {"double_points", std::move(dps)},
          {"center_double_point_distance", num(r.center_double_point_distance)},
          {"diameter", num(r.diameter)},
          {"note", r.note}};
}

json to_json(const SuiteEntry& e) {
  return {{"seed", e.seed},
          {"label", e.label},
          {"rotation_index", e.rotation_index},
          {"included", e.included},
          {"center_found", e.center_found},
          {"residual", num(e.residual)},
          {"relative_residual", num(e.relative_residual)},
          {"case", to_string(e.loop_case)},
          {"violation", e.violation},
          {"note", e.note}};
}

json to_json(const oracle::OracleReport& r) {
  return {{"subject", r.subject},
          {"fast_value", num(r.fast_value)},
          {"oracle_value", num(r.oracle_value)},
          {"discrepancy", num(r.discrepancy)},
          {"tolerance", num(r.tolerance)},
          {"pass", r.pass}};
}

json to_json(const CrossCut& c) {
  json j = {{"plane", to_json(c.plane)},
            {"length", num(c.loop.length())},
            {"centroid", to_json(c.centroid3())},
            {"transversality_margin", num(c.transversality_margin)},
            {"is_clean", c.is_clean},
            {"compact", c.compact},
            {"closure_gap", num(c.closure_gap)},
            {"chart", c.chart},
            {"knots", c.points.size()}};
  if (c.center) j["center"] = to_json(c.ambient(*c.center));
  return j;
}

json to_json(const OpenComponent& c) {
  json j = {{"length", num(c.length)}, {"vertices", c.points.size()}};
  if (!c.points.empty()) {
    j["start"] = to_json(c.points.front());
    j["end"] = to_json(c.points.back());
  }
  return j;
}

json to_json(const TubularSweep& s) {
  json st = json::array();
  for (const auto& x : s.stations) {
    st.push_back({{"height", num(x.height)},
                  {"center", to_json(x.center)},
                  {"center_found", x.center_found},
                  {"fallback", x.fallback},
                  {"rotation_index", x.rotation_index},
                  {"symmetry_residual", num(x.symmetry_residual)},
                  {"cut", to_json(x.cut)}});
  }
  return {{"base", to_json(s.base)},
          {"half_width", num(s.half_width)},
          {"rotation_index", s.rotation_index},
          {"any_fallback", s.any_fallback},
          {"stations", std::move(st)}};
}

json to_json(const PipelineResult& r) {
  json stages = json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"name", s.name}, {"ok", s.ok}, {"half_width", num(s.half_width)}, {"detail", s.detail}});
  json cx = json::array();
  for (const auto& s : r.cx_samples) {
    json e = {{"height", num(s.height)}, {"tilt", num(s.tilt)},   {"azimuth", num(s.azimuth)},
              {"clean", s.clean},        {"central", s.central}, {"trap_distance", num(s.trap_distance)}};
    if (!s.note.empty()) e["note"] = s.note;
    cx.push_back(std::move(e));
  }
  json j = {{"verdict", to_string(r.verdict)},
            {"reason", r.reason},
            {"figure8_found", r.figure8_found},
            {"cuts_in_base", r.cuts_in_base},
            {"trapping_residual", num(r.trapping_residual)},
            {"straightness", num(r.straightness)},
            {"cylinder_violation", num(r.cylinder_violation)},
            {"cx_checked", r.cx_checked},
            {"cx_skipped", r.cx_skipped},
            {"stages", std::move(stages)},
            {"cx_samples", std::move(cx)}};
  if (r.figure8_found) j["figure8_double_point"] = to_json(r.figure8_double_point);
  if (r.verdict == Verdict::CentralCylinder) {
    j["axis"] = to_json(r.axis);
    j["center"] = to_json(r.center);
    j["verified_half_width"] = num(r.verified_half_width);
  }
  if (r.sweep) j["central_curve"] = [&] {
      json c = json::array();
      for (const auto& x : r.sweep->central_curve()) c.push_back(to_json(x));
      return c;
    }();
  return j;
}

json config_to_json(const PipelineConfig& c) {
  const auto& sym = c.sweep.symmetry;
  const auto& sl = c.sweep.slice;
  return {{"center_tolerance", sym.center_tolerance},
          {"search_tolerance", sym.search_tolerance},
          {"angle_tolerance", sym.double_points.angle_tolerance},
          {"match_samples", sym.match_samples},
          {"hausdorff_samples", sym.hausdorff_samples},
          {"phase_samples", sym.phase_samples},
          {"double_point_samples", sym.double_points.min_samples},
          {"transversality_tolerance", sl.transversality_tolerance},
          {"slice_samples", sl.samples},
          {"grid_scale", sl.grid_scale},
          {"noise_fraction", sl.noise_fraction},
          {"tilt_max", c.sweep.tilt_max},
          {"track_factor", c.sweep.track_factor},
          {"half_width", c.half_width},
          {"steps", c.steps},
          {"cx_azimuths", c.cx_azimuths},
          {"cx_tilts", c.cx_tilts},
          {"cx_heights", c.cx_heights},
          {"trapping_tolerance", c.trapping_tolerance},
          {"straightness_tolerance", c.straightness_tolerance},
          {"cylinder_tolerance", c.cylinder_tolerance},
          {"growth", c.growth},
          {"max_continuation", c.max_continuation}};
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "config must be a JSON object");
  auto& sym = c.sweep.symmetry;
  auto& sl = c.sweep.slice;
  auto positive = [](const std::string& k, double x) {
    if (!(x > 0) || !std::isfinite(x)) fail(ErrorCode::InvalidArgument, "config: " + k + " must be positive");
    return x;
  };
  auto count = [](const std::string& k, const json& v, int lo) {
    int n = v.get<int>();
    if (n < lo) fail(ErrorCode::InvalidArgument, "config: " + k + " must be at least " + std::to_string(lo));
    return n;
  };
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "center_tolerance") sym.center_tolerance = positive(k, v.get<double>());
      else if (k == "search_tolerance") sym.search_tolerance = positive(k, v.get<double>());
      else if (k == "angle_tolerance") {
        sym.double_points.angle_tolerance = positive(k, v.get<double>());
        sl.double_points.angle_tolerance = sym.double_points.angle_tolerance;
      } else if (k == "match_samples") sym.match_samples = count(k, v, 64);
      else if (k == "hausdorff_samples") sym.hausdorff_samples = count(k, v, 64);
      else if (k == "phase_samples") sym.phase_samples = count(k, v, 16);
      else if (k == "double_point_samples") {
        sym.double_points.min_samples = count(k, v, 64);
        sl.double_points.min_samples = sym.double_points.min_samples;
      } else if (k == "transversality_tolerance") sl.transversality_tolerance = positive(k, v.get<double>());
      else if (k == "slice_samples") sl.samples = count(k, v, 16);
      else if (k == "grid_scale") sl.grid_scale = positive(k, v.get<double>());
      else if (k == "noise_fraction") sl.noise_fraction = positive(k, v.get<double>());
      else if (k == "tilt_max") c.sweep.tilt_max = positive(k, v.get<double>());
      else if (k == "track_factor") c.sweep.track_factor = positive(k, v.get<double>());
      else if (k == "half_width") {
        c.half_width = v.get<double>();
        if (c.half_width < 0) fail(ErrorCode::InvalidArgument, "config: half_width must be >= 0");
      } else if (k == "steps") c.steps = count(k, v, 3);
      else if (k == "cx_azimuths") c.cx_azimuths = count(k, v, 1);
      else if (k == "cx_tilts") c.cx_tilts = v.get<std::vector<double>>();
      else if (k == "cx_heights") c.cx_heights = count(k, v, 1);
      else if (k == "trapping_tolerance") c.trapping_tolerance = positive(k, v.get<double>());
      else if (k == "straightness_tolerance") c.straightness_tolerance = positive(k, v.get<double>());
      else if (k == "cylinder_tolerance") c.cylinder_tolerance = positive(k, v.get<double>());
      else if (k == "growth") c.growth = positive(k, v.get<double>());
      else if (k == "max_continuation") c.max_continuation = count(k, v, 0);
      else fail(ErrorCode::InvalidArgument, "config: unknown key '" + k + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

json make_report(const std::string& command) {
  return {{"schema_version", kReportSchemaVersion},
          {"command", command},
          {"inputs", json::object()},
          {"config", json::object()},
          {"results", json::object()},
          {"oracle", json::array()},
          {"errors", json::array()}};
}

void write_json(const std::string& path, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace xcut
