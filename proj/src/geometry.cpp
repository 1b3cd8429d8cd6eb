#include "geometry.hpp"

#include "error.hpp"

#include <random>

namespace xcut {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonImmersed: return "NonImmersed";
    case ErrorCode::IndexUnresolved: return "IndexUnresolved";
    case ErrorCode::ContinuumIntersection: return "ContinuumIntersection";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UncleanInput: return "UncleanInput";
    case ErrorCode::DichotomyViolation: return "DichotomyViolation";
    case ErrorCode::NonTransverseContact: return "NonTransverseContact";
    case ErrorCode::ComponentLost: return "ComponentLost";
    case ErrorCode::IndexJump: return "IndexJump";
    case ErrorCode::NotCentral: return "NotCentral";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Plane3::Plane3(const Vec3& normal, const Vec3& point) : point_(point) {
  double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::InvalidArgument, "plane normal must be nonzero");
  normal_ = normal / n;
  // Pick the coordinate axis least aligned with the normal to seed the frame.
  Eigen::Index k;
  normal_.cwiseAbs().minCoeff(&k);
  Vec3 seed = Vec3::Zero();
  seed[k] = 1.0;
  e1_ = (seed - seed.dot(normal_) * normal_).normalized();
  e2_ = normal_.cross(e1_);
}

RigidMotion RigidMotion::random(std::uint64_t seed, double translation_scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  RigidMotion m;
  m.rotation = q.toRotationMatrix();
  m.translation = translation_scale * Vec3(gauss(rng), gauss(rng), gauss(rng));
  return m;
}

Vec3 tilt_direction(const Vec3& u, double tilt, double azimuth) {
  Plane3 frame(u, Vec3::Zero());
  Vec3 w = std::cos(azimuth) * frame.e1() + std::sin(azimuth) * frame.e2();
  return (std::cos(tilt) * frame.normal() + std::sin(tilt) * w).normalized();
}

}  // namespace xcut
