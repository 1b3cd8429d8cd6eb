#pragma once

#include "sweep.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xcut {

enum class Verdict { CentralCylinder, NotApplicable, Inconsistent };
const char* to_string(Verdict v) noexcept;

struct PipelineConfig {
  SweepConfig sweep;
  /// Initial slab half-width; 0 means a quarter of the figure-8 cut's diameter.
  double half_width = 0.0;
  int steps = 9;
  int cx_azimuths = 8;
  /// Tilt angles of the central cross-cut sampling, each below sweep.tilt_max.
  std::vector<double> cx_tilts = {0.0625, 0.125, 0.1875};
  int cx_heights = 5;
  double trapping_tolerance = 1e-5;
  double straightness_tolerance = 1e-6;
  double cylinder_tolerance = 1e-6;
  /// Slab growth factor per continuation step, and the number of steps.
  double growth = 1.5;
  int max_continuation = 8;
};

struct PipelineStage {
  std::string name;
  bool ok = false;
  double half_width = 0.0;
  std::string detail;
};

struct CxSample {
  double height = 0.0;
  double tilt = 0.0;
  double azimuth = 0.0;
  bool clean = false;
  bool central = false;
  /// |center - mu(h)| for central cuts.
  double trap_distance = 0.0;
  std::string note;
};

struct PipelineResult {
  Verdict verdict = Verdict::NotApplicable;
  std::string reason;
  /// Unit axis direction (oriented along the base normal) and a point on it.
  Vec3 axis = Vec3::UnitZ();
  Vec3 center = Vec3::Zero();
  /// Half-width of the largest slab on which every check passed.
  double verified_half_width = 0.0;

  bool figure8_found = false;
  Vec3 figure8_double_point = Vec3::Zero();
  int cuts_in_base = 0;
  double trapping_residual = 0.0;
  double straightness = 0.0;
  double cylinder_violation = 0.0;
  int cx_checked = 0;
  int cx_skipped = 0;
  std::vector<CxSample> cx_samples;
  std::vector<PipelineStage> stages;
  /// The sweep of the largest verified slab.
  std::optional<TubularSweep> sweep;
};

/// Figure-8 test on the base plane, then on growing slabs: sweep, central
/// cross-cut sampling with tilted planes, center trapping, axis straightness
/// and the cylinder test. Sub-operation errors are rethrown with the stage
/// name prepended.
PipelineResult run_theorem_pipeline(const Surface& surface, const Plane3& plane, const PipelineConfig& cfg = {});

}  // namespace xcut
