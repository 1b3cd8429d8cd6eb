#pragma once

#include "curve.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace xcut {

struct DoublePointConfig {
  /// Minimum polyline sample count; doubled until every segment turns <= max_turn.
  int min_samples = 4096;
  double max_turn = 0.05;
  /// Relative to the bounding-box diameter.
  double merge_radius = 1e-6;
  /// Minimum angle between tangent lines at a clean crossing (radians).
  double angle_tolerance = 1e-3;
  /// A candidate component whose parameter extent exceeds this fraction of
  /// the samples is a retraced arc.
  double chain_threshold = 0.05;
};

struct DoublePoint {
  Vec2 location = Vec2::Zero();
  /// Sorted, in [0, 2pi).
  std::vector<double> preimages;
  /// angles(i, j) is the angle in [0, pi] between the unit tangents at
  /// preimages i and j. The tangent lines meet at min(angle, pi - angle).
  std::vector<std::vector<double>> tangent_angles;
  bool simple = false;
  bool clean = false;
};

/// Transversal and tangential self-intersections of an immersed curve, each
/// reported once with all of its preimages. Throws ContinuumIntersection when
/// the curve retraces an arc.
std::vector<DoublePoint> find_double_points(const ClosedCurve& curve, const DoublePointConfig& config = {});

struct CleanReport {
  bool clean = false;
  bool continuum = false;
  std::vector<DoublePoint> offending;
  std::string message;
};

/// Clean iff the double points are isolated and every pair of tangent lines
/// at each of them meets at an angle >= angle_tolerance.
CleanReport is_clean(const ClosedCurve& curve, const DoublePointConfig& config = {});

/// Smallest circle distance between two preimages of one double point.
/// The curve must be unit speed with length 2pi (NotNormalized otherwise).
/// Returns +infinity for embedded curves.
double min_preimage_separation(const ClosedCurve& curve, const DoublePointConfig& config = {});

/// False iff two parameters share a position and a unit tangent.
bool lift_is_embedded(const ClosedCurve& curve, const DoublePointConfig& config = {});

struct CurveAnalysis {
  double length = 0.0;
  /// max |kappa_g| of the input curve.
  double kappa_bar = 0.0;
  /// max |kappa_g| after rescaling to length 2pi.
  double kappa_bar_normalized = 0.0;
  int rotation_index = 0;
  double raw_index_integral = 0.0;
  Vec2 centroid = Vec2::Zero();
  std::vector<DoublePoint> double_points;
  bool continuum = false;
  bool is_clean = false;
  /// Minimum preimage separation measured in the unit-speed parameter of
  /// length 2pi; +infinity without double points, NaN on a continuum.
  double min_preimage_separation = std::numeric_limits<double>::infinity();
};

CurveAnalysis analyze_curve(const ClosedCurve& curve, const DoublePointConfig& config = {});

/// Arc length from parameter 0 to t in [0, 2pi).
double arc_length_at(const ClosedCurve& curve, double t);

}  // namespace xcut
