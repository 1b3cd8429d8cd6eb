#pragma once

#include "corpus.hpp"
#include "curve.hpp"
#include "double_points.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace xcut {

enum class Orientation { Preserves, Reverses, None };
enum class LoopCase { CaseA, CaseB, NotCentral, Unclean };
enum class CenterMode { Centroid, Search };

const char* to_string(Orientation o) noexcept;
const char* to_string(LoopCase c) noexcept;
const char* to_string(CenterMode m) noexcept;

struct SymmetryConfig {
  /// Relative to the image diameter.
  double center_tolerance = 1e-6;
  /// Search mode accepts a center when the Hausdorff residual is below this
  /// fraction of the diameter.
  double search_tolerance = 1e-3;
  /// Samples of the arc-length resampling used for matching.
  int match_samples = 4096;
  /// Samples of the Hausdorff residual.
  int hausdorff_samples = 4096;
  int search_grid = 17;
  /// Phases in the coarse diameter-centrality scan.
  int phase_samples = 1024;
  DoublePointConfig double_points;
};

struct MatchResult {
  Orientation orientation = Orientation::None;
  /// sup_s |b(s) - a(s0 +- s)| of the best alignment, in absolute units.
  double residual = 0.0;
  /// Arc-length phase s0 (in the 2pi-normalized parameter of a).
  double phase = 0.0;
  /// Set when an input is not clean; the result is then advisory only.
  bool advisory = false;
  std::string note;
};

/// Decides whether b reparametrizes a, and with which orientation, by
/// aligning their arc-length parametrizations at a shared point and checking
/// the alignment around the whole curve.
MatchResult match_reparametrization(const ClosedCurve& a, const ClosedCurve& b, const SymmetryConfig& cfg = {});

struct SymmetryReport {
  CenterMode mode = CenterMode::Centroid;
  bool center_found = false;
  Vec2 center = Vec2::Zero();
  Vec2 centroid = Vec2::Zero();
  Orientation orientation = Orientation::None;
  /// Two-sided Hausdorff distance between the image and its reflection through `center`.
  double residual = 0.0;
  /// Residual of the reparametrization match against the reflected curve.
  double match_residual = 0.0;
  bool match_advisory = false;
  bool diameter_central = false;
  double phase = 0.0;
  LoopCase loop_case = LoopCase::NotCentral;
  int rotation_index = 0;
  /// min |a(t) - center|.
  double margin = 0.0;
  std::vector<DoublePoint> double_points;
  /// Distance from the center to the nearest double point (CaseB).
  double center_double_point_distance = 0.0;
  double diameter = 0.0;
  std::string note;
};

/// Centroid mode verifies the centroid through the reparametrization match
/// with the reflected curve. Search mode falls back to minimizing the
/// Hausdorff residual over candidate centers when that fails.
SymmetryReport detect_center(const ClosedCurve& curve, CenterMode mode, const SymmetryConfig& cfg = {});

/// sup_s |2c - a(s) - a(s + l)| at a given phase l.
double diameter_residual(const ClosedCurve& curve, const Vec2& c, double phase, int samples);

struct DiameterCentral {
  bool flag = false;
  double phase = 0.0;
  double residual = 0.0;
};

/// Requires a unit-speed curve of length 2pi (NotNormalized otherwise).
DiameterCentral is_diameter_central(const ClosedCurve& curve, const Vec2& c, const SymmetryConfig& cfg = {});

/// Two-sided Hausdorff residual between n image samples and their reflection
/// through c (grid accelerated).
double reflection_residual(const ClosedCurve& curve, const Vec2& c, int n);

/// The dichotomy for clean central loops. Throws UncleanInput for unclean
/// curves and DichotomyViolation when the measured attributes contradict it.
SymmetryReport classify_central_loop(const ClosedCurve& curve, const SymmetryConfig& cfg = {});

struct SuiteEntry {
  std::uint64_t seed = 0;
  std::string label;
  int rotation_index = 0;
  bool included = true;
  bool center_found = false;
  double residual = 0.0;
  double relative_residual = 0.0;
  LoopCase loop_case = LoopCase::NotCentral;
  bool violation = false;
  std::string note;
};

struct EvenIndexReport {
  std::vector<SuiteEntry> entries;
  int central_found = 0;
  int excluded = 0;
  double min_relative_residual = 0.0;
};

/// Random clean loops with rotation index +-2 run through detect_center in
/// search mode; any center found is a counterexample. `extra` curves are
/// appended and excluded when unclean or of the wrong index.
EvenIndexReport even_index_exclusion_suite(int count, std::uint64_t seed, const std::vector<ClosedCurve>& extra = {},
                                           const SymmetryConfig& cfg = {});

struct DichotomyReport {
  std::vector<SuiteEntry> entries;
  int case_a = 0;
  int case_b = 0;
  int violations = 0;
};

/// count_a CaseA-constructed and count_b CaseB-constructed clean central loops.
DichotomyReport dichotomy_suite(int count_a, int count_b, std::uint64_t seed, const SymmetryConfig& cfg = {});

}  // namespace xcut
