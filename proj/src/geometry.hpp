#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace xcut {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Reduce t into [0, 2pi).
inline double wrap_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Intrinsic distance between two points of R/2piZ.
inline double circle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a - b));
  return std::min(d, kTwoPi - d);
}

/// Angular distance arccos(u.v) between unit vectors, computed stably.
inline double angle_between(const Vec3& u, const Vec3& v) {
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

inline double angle_between(const Vec2& u, const Vec2& v) {
  return std::atan2(std::fabs(cross2(u, v)), u.dot(v));
}

/// Oriented plane {x : u.(x - p) = 0} with unit normal u. The height
/// function u.(x - p) is the affine function whose zero set is the plane.
class Plane3 {
 public:
  Plane3() : Plane3(Vec3::UnitZ(), Vec3::Zero()) {}
  Plane3(const Vec3& normal, const Vec3& point);

  const Vec3& normal() const { return normal_; }
  const Vec3& point() const { return point_; }
  /// Orthonormal in-plane frame; (e1, e2, normal) is right-handed.
  const Vec3& e1() const { return e1_; }
  const Vec3& e2() const { return e2_; }

  double height(const Vec3& x) const { return normal_.dot(x - point_); }
  /// The parallel plane at signed height h.
  Plane3 offset(double h) const { return Plane3(normal_, point_ + h * normal_); }
  /// Slab test |height(x)| < a.
  bool in_slab(const Vec3& x, double a) const { return std::fabs(height(x)) < a; }

  Vec2 to_plane(const Vec3& x) const {
    Vec3 d = x - point_;
    return {d.dot(e1_), d.dot(e2_)};
  }
  Vec3 from_plane(const Vec2& q) const { return point_ + q.x() * e1_ + q.y() * e2_; }

 private:
  Vec3 normal_;
  Vec3 point_;
  Vec3 e1_;
  Vec3 e2_;
};

/// x -> R x + t with R orthogonal and det R = +1.
struct RigidMotion {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
  Vec3 apply_vector(const Vec3& v) const { return rotation * v; }
  Plane3 apply(const Plane3& p) const { return Plane3(apply_vector(p.normal()), apply(p.point())); }
  RigidMotion compose(const RigidMotion& inner) const {
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }
  bool is_identity() const {
    return rotation.isApprox(Mat3::Identity(), 0.0) && translation.isZero(0.0);
  }

  static RigidMotion random(std::uint64_t seed, double translation_scale = 1.0);
};

/// Unit vector at angle `tilt` from u, rotated by `azimuth` about u.
Vec3 tilt_direction(const Vec3& u, double tilt, double azimuth);

}  // namespace xcut
