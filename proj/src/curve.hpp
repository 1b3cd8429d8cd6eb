#pragma once

#include "geometry.hpp"
#include "spline.hpp"

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace xcut {

struct CurvePoint {
  Vec2 position;
  Vec2 velocity;
  Vec2 acceleration;
};

enum class CurveKind { Fourier, Samples };

/// A closed C2 plane curve on the parameter circle [0, 2 pi).
///
/// Two representations are supported. A truncated Fourier series
/// sum_n c_n e^{int} (frequencies min_frequency .. min_frequency + size - 1)
/// evaluates derivatives exactly; N uniformly spaced samples are interpolated
/// by a periodic cubic spline and derivatives come from the interpolant.
/// Length, minimum speed and bounding box are cached at construction.
class ClosedCurve {
 public:
  static ClosedCurve from_fourier(int min_frequency, std::vector<std::complex<double>> coefficients,
                                  std::string name = {});
  static ClosedCurve from_samples(std::vector<Vec2> samples, std::string name = {});

  CurveKind kind() const { return std::holds_alternative<Fourier>(rep_) ? CurveKind::Fourier : CurveKind::Samples; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  CurvePoint evaluate(double t) const;
  Vec2 position(double t) const;
  Vec2 velocity(double t) const;

  double length() const { return length_; }
  double min_speed() const { return min_speed_; }
  const Vec2& bbox_min() const { return bbox_min_; }
  const Vec2& bbox_max() const { return bbox_max_; }
  /// Diagonal of the image's bounding box; the unit for scale-relative tolerances.
  double diameter() const { return (bbox_max_ - bbox_min_).norm(); }
  /// Number of uniform panels that resolves the representation (knots for
  /// splines, a frequency-dependent count for Fourier series).
  int resolution() const;

  int min_frequency() const;
  const std::vector<std::complex<double>>& coefficients() const;
  const std::vector<Vec2>& samples() const;

  /// x -> A x + b applied to the image (exact for both representations).
  ClosedCurve transformed(const Mat2& A, const Vec2& b) const;
  /// Point reflection x -> 2c - x.
  ClosedCurve reflected(const Vec2& c) const { return transformed(-Mat2::Identity(), 2.0 * c); }
  /// t -> -t.
  ClosedCurve reversed() const;
  /// t -> t + phase. Exact for Fourier curves; splines are re-sampled.
  ClosedCurve shifted(double phase) const;

 private:
  struct Fourier {
    int min_frequency;
    std::vector<std::complex<double>> coefficients;
  };
  struct Samples {
    PeriodicSpline spline;
  };

  ClosedCurve(std::variant<Fourier, Samples> rep, std::string name);
  void compute_cache();

  std::variant<Fourier, Samples> rep_;
  std::string name_;
  double length_ = 0.0;
  double min_speed_ = 0.0;
  Vec2 bbox_min_ = Vec2::Zero();
  Vec2 bbox_max_ = Vec2::Zero();
};

struct RotationIndex {
  int index = 0;
  double raw = 0.0;
};

/// Signed curvature det(a', a'') / |a'|^3.
double geodesic_curvature(const ClosedCurve& curve, double t);

/// Total signed curvature over 2 pi, snapped to the nearest integer.
/// Throws IndexUnresolved when the raw value is 0.05 or more from every integer.
RotationIndex rotation_index(const ClosedCurve& curve);

/// Arc-length weighted mean of the trace.
Vec2 centroid(const ClosedCurve& curve);

/// max |kappa_g| over the curve (dense sampling plus local refinement).
double max_abs_curvature(const ClosedCurve& curve);

/// Re-sample at n points equally spaced in arc length; the result has
/// constant speed length / 2pi and the same image.
ClosedCurve arc_length_resample(const ClosedCurve& curve, int n);

/// Unit-speed parametrization of length 2 pi: arc-length resampling followed
/// by the homothety x -> (2 pi / L) x about the origin.
ClosedCurve arc_length_reparametrize(const ClosedCurve& curve, int n);

/// True when the curve has length 2 pi and |a'| = 1 within `tol` (relative).
bool is_unit_speed(const ClosedCurve& curve, double tol = 1e-4);

/// Throws NonImmersed when |a'(t)| falls below the immersion threshold.
void require_immersed(const ClosedCurve& curve);

}  // namespace xcut
