#pragma once

#include "corpus.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"
#include "symmetry.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace xcut {

inline constexpr int kCurveFormatVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

// Curve files are JSON records:
//   {"format": "xcut-curve", "version": 1, "type": "fourier" | "samples",
//    "name": "...", "min_frequency": m, "coefficients": [[re, im], ...]}
//   {..., "type": "samples", "samples": [[x, y], ...]}
// Readers reject other formats, newer versions and unknown types (ParseError).

nlohmann::json curve_to_json(const ClosedCurve& curve);
ClosedCurve curve_from_json(const nlohmann::json& j);
ClosedCurve read_curve(std::istream& in);
ClosedCurve read_curve_file(const std::string& path);
void write_curve_file(const std::string& path, const ClosedCurve& curve);

// Surface files: Wavefront OBJ (a mesh), or a JSON record
//   {"format": "xcut-surface", "version": 1, "spec": <SurfaceSpec>}
// naming an analytic corpus surface.
nlohmann::json surface_record(const SurfaceSpec& spec);
Surface read_surface_file(const std::string& path);

nlohmann::json to_json(const Vec2& v);
nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const Plane3& p);
nlohmann::json to_json(const DoublePoint& d);
nlohmann::json to_json(const MatchResult& m);
nlohmann::json to_json(const SymmetryReport& r);
nlohmann::json to_json(const SuiteEntry& e);
nlohmann::json to_json(const oracle::OracleReport& r);
nlohmann::json to_json(const CrossCut& c);
nlohmann::json to_json(const OpenComponent& c);
nlohmann::json to_json(const TubularSweep& s);
nlohmann::json to_json(const PipelineResult& r);

// Run configuration as one flat object. Every key is optional on input and
// defaults to the module value; unknown keys are rejected (InvalidArgument).
//   center_tolerance, search_tolerance, angle_tolerance, match_samples,
//   hausdorff_samples, phase_samples, double_point_samples,
//   transversality_tolerance, slice_samples, grid_scale, noise_fraction,
//   tilt_max, track_factor, half_width, steps, cx_azimuths, cx_tilts,
//   cx_heights, trapping_tolerance, straightness_tolerance,
//   cylinder_tolerance, growth, max_continuation
nlohmann::json config_to_json(const PipelineConfig& c);
PipelineConfig config_from_json(const nlohmann::json& j);

Vec3 vec3_from_json(const nlohmann::json& j);
/// {"normal": [..], "point": [..]}; the normal is normalized.
Plane3 plane_from_json(const nlohmann::json& j);

/// The report envelope; every command fills `results` and `oracle`.
nlohmann::json make_report(const std::string& command);

/// Writes `j` to `path`, or to stdout when path is "-". Throws IoError.
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace xcut
