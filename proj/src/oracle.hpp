#pragma once

// Brute-force verifiers. Nothing here calls into the fast-path detectors or
// their helpers; the only shared dependency is curve evaluation.

#include "curve.hpp"
#include "double_points.hpp"

#include <string>
#include <vector>

namespace xcut::oracle {

struct OracleReport {
  std::string subject;
  double fast_value = 0.0;
  double oracle_value = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline constexpr int kDefaultSamples = 4096;

/// All-pairs segment test on the n-gon, refined on the smooth curve by
/// recursive bisection of both parameter intervals (the closest pair of
/// sub-chords survives). Throws ContinuumIntersection on retraced arcs.
std::vector<DoublePoint> brute_double_points(const ClosedCurve& curve, int n = kDefaultSamples,
                                             double angle_tolerance = 1e-3);

/// Accumulated turning of the unit tangent over n steps, rounded to an
/// integer. Throws StepTooCoarse if one step turns by more than pi/2.
int tangent_winding_oracle(const ClosedCurve& curve, int n = kDefaultSamples);

/// Two-sided Hausdorff distance between n image samples and the polygon of
/// their reflections through c (and symmetrically).
double hausdorff_residual(const ClosedCurve& curve, const Vec2& c, int n = kDefaultSamples);

/// Two-sided Hausdorff distance between the n-gons of two curves' images.
double image_distance(const ClosedCurve& a, const ClosedCurve& b, int n = kDefaultSamples);

/// Max relative error (against the sup norm over the samples) of a' and a''
/// versus fourth-order central differences at 256 parameters. a'' is
/// differenced from a'.
OracleReport finite_difference_check(const ClosedCurve& curve, double step = 1e-4, double tolerance = 1e-8);

/// Count and location agreement of two double-point lists.
OracleReport compare_double_points(const std::vector<DoublePoint>& fast, const std::vector<DoublePoint>& brute,
                                   double tolerance = 1e-6);

/// Runs the fast detector and the oracle at n, doubling n once if they disagree.
OracleReport cross_check_double_points(const ClosedCurve& curve, int n = kDefaultSamples);

/// Fast rotation index against the tangent-winding oracle.
OracleReport cross_check_rotation_index(const ClosedCurve& curve, int n = kDefaultSamples);

}  // namespace xcut::oracle
