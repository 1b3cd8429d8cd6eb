#pragma once

#include "geometry.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace xcut {

struct ChartPoint {
  Vec3 position;
  Vec3 du;
  Vec3 dv;

  /// Unit normal du x dv / |du x dv|; zero where the chart degenerates.
  Vec3 normal() const;
};

/// A parametrized patch over [u0, u1] x [v0, v1]. Periodic directions wrap;
/// a non-periodic edge along which the chart collapses to a point (a pole) is
/// not a boundary of the surface.
struct Chart {
  double u0 = 0.0, u1 = kTwoPi;
  double v0 = 0.0, v1 = 1.0;
  bool periodic_u = false;
  bool periodic_v = false;
  /// Default marching grid (cells per direction).
  int cells_u = 128;
  int cells_v = 64;
  std::function<ChartPoint(double, double)> eval;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  /// Per-vertex unit normals; empty means area-weighted face normals are used.
  std::vector<Vec3> normals;

  /// Fills `normals` from area-weighted face normals.
  void compute_normals();
};

/// A smooth surface given by charts, or a triangle mesh. Charts are treated as
/// disjoint pieces of the surface; slicing does not connect curves across charts.
class Surface {
 public:
  enum class Kind { Analytic, Mesh };

  static Surface analytic(std::string name, std::vector<Chart> charts);
  static Surface mesh(std::string name, TriangleMesh mesh);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Chart>& charts() const { return *charts_; }
  const TriangleMesh& triangles() const { return *mesh_; }

  const Vec3& bbox_min() const { return lo_; }
  const Vec3& bbox_max() const { return hi_; }
  double diagonal() const { return (hi_ - lo_).norm(); }

  /// The image under a rigid motion (charts are composed, meshes transformed).
  Surface transformed(const RigidMotion& motion) const;

  /// Triangulation of the chart grids at `scale` times their default density.
  /// Meshes are returned as is.
  TriangleMesh tessellate(double scale = 1.0) const;

  /// Approximate critical values of the height function of `plane` on the
  /// surface: values at grid (or vertex) local extrema.
  std::vector<double> critical_heights(const Plane3& plane) const;

 private:
  Surface() = default;
  void compute_bbox();

  Kind kind_ = Kind::Analytic;
  std::string name_;
  std::shared_ptr<const std::vector<Chart>> charts_;
  std::shared_ptr<const TriangleMesh> mesh_;
  Vec3 lo_ = Vec3::Zero();
  Vec3 hi_ = Vec3::Zero();
};

/// Wavefront subset: `v`, `vn`, `f` (polygons fan-triangulated, indices may
/// use the v/vt/vn forms; negative indices are relative). Normals are used
/// when exactly one `vn` per vertex is given. Throws ParseError.
TriangleMesh read_obj(std::istream& in);
TriangleMesh read_obj_file(const std::string& path);
void write_obj(std::ostream& out, const TriangleMesh& mesh, const std::string& comment = {});

}  // namespace xcut
