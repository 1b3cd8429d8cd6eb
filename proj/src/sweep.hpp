#pragma once

#include "slice.hpp"
#include "symmetry.hpp"

#include <optional>
#include <vector>

namespace xcut {

struct SweepConfig {
  SliceConfig slice;
  SymmetryConfig symmetry;
  /// Largest admissible angle between a tilted plane's normal and the sweep normal.
  double tilt_max = 0.25;
  /// A tracked component may move at most this many height steps between stations.
  double track_factor = 5.0;
};

struct SweepStation {
  double height = 0.0;
  CrossCut cut;
  /// Detected symmetry center (ambient); the centroid when detection fails.
  Vec3 center = Vec3::Zero();
  bool center_found = false;
  /// Set when the center is the centroid fallback.
  bool fallback = false;
  int rotation_index = 0;
  double symmetry_residual = 0.0;
};

/// Cross-cuts of one tube at uniform heights in [-a, a] above the base plane.
struct TubularSweep {
  Plane3 base;
  double half_width = 0.0;
  /// Sorted by height.
  std::vector<SweepStation> stations;
  int rotation_index = 0;
  bool any_fallback = false;

  std::vector<Vec3> central_curve() const;
  /// Piecewise-linear interpolation of the central curve in height.
  Vec3 center_at(double h) const;
};

/// Tracks the cut of the base plane selected by `component` (index into the
/// base slice's compact cuts), or by default the compact cut whose centroid is
/// nearest the base point. Throws ComponentLost, IndexJump, NonTransverseContact.
TubularSweep sweep(const Surface& surface, const Plane3& base, double a, int steps, const SweepConfig& cfg = {},
                   std::optional<int> component = std::nullopt);

struct TiltCenter {
  bool found = false;
  Vec3 center = Vec3::Zero();
  /// mu(h), the plane's base point.
  Vec3 anchor = Vec3::Zero();
  double tilt = 0.0;
  double residual = 0.0;
  bool clean = false;
};

/// Slices by the plane through mu(h) with normal v and runs detect_center on
/// the component through the tube; `found` reports the outcome. Throws
/// InvalidArgument (tilt or height out of range) and ComponentLost.
TiltCenter probe_tilted_cut(const Surface& surface, const TubularSweep& sweep, double h, const Vec3& v,
                            const SweepConfig& cfg = {});

/// probe_tilted_cut, throwing NotCentral when no center is found.
TiltCenter tilt_center(const Surface& surface, const TubularSweep& sweep, double h, const Vec3& v,
                       const SweepConfig& cfg = {});

struct Straightness {
  /// Max orthogonal deviation from the total-least-squares line over the extent.
  double value = 0.0;
  Vec3 direction = Vec3::UnitZ();
  Vec3 point = Vec3::Zero();
  double extent = 0.0;
};

/// Throws InvalidArgument for fewer than 3 samples, DegenerateInput if they coincide.
Straightness axis_straightness(const std::vector<Vec3>& samples);

struct CylinderTest {
  bool flag = false;
  /// max |nu . v| over the sampled tangent planes.
  double violation = 0.0;
  Vec3 worst_point = Vec3::Zero();
  int samples = 0;
};

/// Samples surface normals in the slab |height| <= a of `plane`; chart maxima
/// are refined locally.
CylinderTest cylinder_test(const Surface& surface, const Plane3& plane, double a, const Vec3& v,
                           double tolerance = 1e-6);

}  // namespace xcut
