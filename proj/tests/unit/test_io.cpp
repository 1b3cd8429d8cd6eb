#include <doctest.h>

#include "error.hpp"
#include "io.hpp"
#include "plot.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

using namespace xcut;
using nlohmann::json;

namespace {

double max_gap(const ClosedCurve& a, const ClosedCurve& b) {
  double worst = 0.0;
  for (int k = 0; k < 257; ++k) {
    const double t = kTwoPi * k / 257;
    worst = std::max(worst, (a.evaluate(t).position - b.evaluate(t).position).norm());
  }
  return worst;
}

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("xcut_io_" + name);
}

}  // namespace

TEST_CASE("curve files: round trip is exact for both representations") {
  for (const char* spec : {"figure8", "odd_rose:k=3,eps=0.5", "figure2_unclean"}) {
    ClosedCurve c = generate(parse_curve_spec(spec));
    ClosedCurve back = curve_from_json(json::parse(curve_to_json(c).dump()));
    CHECK(back.kind() == c.kind());
    CHECK(back.name() == c.name());
    CHECK(max_gap(c, back) == 0.0);
  }
  std::vector<Vec2> pts;
  for (int k = 0; k < 64; ++k) pts.emplace_back(std::cos(kTwoPi * k / 64), 2 * std::sin(kTwoPi * k / 64));
  ClosedCurve s = ClosedCurve::from_samples(pts, "ellipse");
  const auto path = temp_path("samples.json");
  write_curve_file(path.string(), s);
  ClosedCurve back = read_curve_file(path.string());
  CHECK(back.kind() == CurveKind::Samples);
  CHECK(max_gap(s, back) == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("curve files: malformed records are rejected") {
  json good = curve_to_json(generate(parse_curve_spec("circle")));
  auto parse = [](json j) { return [j] { curve_from_json(j); }; };
  json j = good;
  j["type"] = "bezier";
  CHECK(code_of(parse(j)) == ErrorCode::ParseError);
  j = good;
  j["format"] = "svg";
  CHECK(code_of(parse(j)) == ErrorCode::ParseError);
  j = good;
  j["version"] = kCurveFormatVersion + 1;
  CHECK(code_of(parse(j)) == ErrorCode::ParseError);
  j = good;
  j.erase("coefficients");
  CHECK(code_of(parse(j)) == ErrorCode::ParseError);
  std::istringstream junk("{not json");
  CHECK(code_of([&] { read_curve(junk); }) == ErrorCode::ParseError);
  CHECK(code_of([] { read_curve_file("/nonexistent/curve.json"); }) == ErrorCode::IoError);
}

TEST_CASE("surface files: JSON records name analytic surfaces") {
  SurfaceSpec spec = parse_surface_spec("ellipsoid:c=2");
  const auto path = temp_path("surface.json");
  {
    std::ofstream f(path);
    f << surface_record(spec).dump();
  }
  Surface s = read_surface_file(path.string());
  CHECK(s.kind() == Surface::Kind::Analytic);
  CHECK(std::fabs(s.bbox_max().z() - 2.0) < 1e-2);
  std::filesystem::remove(path);

  json bad = surface_record(spec);
  bad["format"] = "xcut-curve";
  {
    std::ofstream f(path);
    f << bad.dump();
  }
  CHECK(code_of([&] { read_surface_file(path.string()); }) == ErrorCode::ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("config: every key round trips and unknown keys are rejected") {
  PipelineConfig c;
  c.sweep.symmetry.center_tolerance = 3e-7;
  c.sweep.tilt_max = 0.2;
  c.cx_tilts = {0.05, 0.1};
  c.max_continuation = 2;
  json j = config_to_json(c);
  for (const char* key : {"center_tolerance", "search_tolerance", "angle_tolerance", "match_samples",
                          "hausdorff_samples", "phase_samples", "double_point_samples", "transversality_tolerance",
                          "slice_samples", "grid_scale", "noise_fraction", "tilt_max", "track_factor", "half_width",
                          "steps", "cx_azimuths", "cx_tilts", "cx_heights", "trapping_tolerance",
                          "straightness_tolerance", "cylinder_tolerance", "growth", "max_continuation"})
    CHECK_MESSAGE(j.contains(key), key);
  CHECK(config_to_json(config_from_json(j)) == j);
  CHECK(config_from_json(json::object()).sweep.symmetry.center_tolerance == 1e-6);
  CHECK(code_of([] { config_from_json({{"centre_tolerance", 1e-6}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { config_from_json(json::array()); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("reports: envelope fields and null for non-finite numbers") {
  json r = make_report("match");
  CHECK(r["schema_version"] == kReportSchemaVersion);
  CHECK(r["command"] == "match");
  for (const char* key : {"inputs", "config", "results", "oracle", "errors"}) CHECK(r.contains(key));
  MatchResult m;
  m.residual = std::numeric_limits<double>::infinity();
  CHECK(to_json(m)["residual"].is_null());
  CHECK(to_json(Vec2(std::nan(""), 1.0))[0].is_null());
}

TEST_CASE("plots: SVG output is byte-stable") {
  ClosedCurve c = generate(parse_curve_spec("figure8"));
  std::string a = plot_curve(c, Vec2::Zero()).render();
  std::string b = plot_curve(c, Vec2::Zero()).render();
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(code_of([] { SvgPlot("empty").render(); }).has_value());
}
