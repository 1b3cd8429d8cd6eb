#pragma once

#include "curve.hpp"
#include "double_points.hpp"
#include "surface.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xcut {

struct SliceConfig {
  /// Minimum of |nu x u| over every intersection point.
  double transversality_tolerance = 1e-3;
  /// Knots of the spline fitted to each compact cut.
  int samples = 2048;
  /// Multiplies the charts' default marching grids.
  double grid_scale = 1.0;
  /// Components shorter than this fraction of the surface diagonal are noise.
  double noise_fraction = 1e-3;
  /// Closed mesh chains with fewer segments are noise.
  int min_mesh_segments = 32;
  DoublePointConfig double_points;
};

/// One compact component of a plane section, as a closed curve in the plane's
/// (e1, e2) frame. `points` and `normals` hold the ambient knot positions and
/// the surface normals there, aligned with the loop's spline knots.
struct CrossCut {
  Plane3 plane;
  ClosedCurve loop;
  double transversality_margin = 0.0;
  bool is_clean = false;
  bool compact = true;
  /// Filled by symmetry detection (plane coordinates).
  std::optional<Vec2> center;
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  /// |loop(2pi) - loop(0)|, relative to the loop length.
  double closure_gap = 0.0;
  /// The chart the cut lies in (-1 for meshes).
  int chart = -1;

  Vec3 ambient(const Vec2& q) const { return plane.from_plane(q); }
  Vec3 centroid3() const;
  /// Surface normal at loop parameter t (interpolated between knots).
  Vec3 normal_at(double t) const;
};

struct OpenComponent {
  std::vector<Vec3> points;
  double length = 0.0;
};

struct SliceResult {
  std::vector<CrossCut> compact;
  std::vector<OpenComponent> open;
  /// Minimum |nu x u| over all components found (+inf if none).
  double min_margin = 0.0;
};

/// Marches the plane's height function over each chart grid (or the mesh),
/// chains the zero crossings, projects chart points onto the exact
/// intersection by Newton's method and fits a periodic spline to every closed
/// component. Throws NonTransverseContact.
SliceResult slice(const Surface& surface, const Plane3& plane, const SliceConfig& cfg = {});

struct GeneralPosition {
  bool ok = false;
  /// min over double points of |det(nu_1, nu_2, u)|.
  double min_wedge = 0.0;
  std::string message;
};

/// At every double point of the cut the two surface normals and the plane
/// normal must be independent. A triple point always fails: four vectors in
/// R^3 are dependent.
GeneralPosition general_position_check(const CrossCut& cut, const SliceConfig& cfg = {});

}  // namespace xcut
