#pragma once

// Command-level analyses: each runs one computation, collects the oracle
// cross-checks that support it and optionally writes a plot.

#include "io.hpp"
#include "plot.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace xcut {

struct Analysis {
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json oracle = nlohmann::json::array();
  /// An Inconsistent verdict, a failed cross-check or a suite violation.
  bool violation = false;

  void add(const oracle::OracleReport& r);
  nlohmann::json to_json() const;
};

Analysis analyze_curve(const ClosedCurve& curve, const PipelineConfig& cfg, const std::string& plot = {});
Analysis analyze_match(const ClosedCurve& a, const ClosedCurve& b, const PipelineConfig& cfg,
                       const std::string& plot = {});
/// Search-mode detection, then the dichotomy when a center exists. Unclean
/// loops report case Unclean; DichotomyViolation propagates.
Analysis analyze_classify(const ClosedCurve& curve, const PipelineConfig& cfg, const std::string& plot = {});

Analysis analyze_slice(const Surface& surface, const Plane3& plane, const PipelineConfig& cfg,
                       const std::string& plot = {});
Analysis analyze_sweep(const TubularSweep& sweep, const std::string& plot = {});
Analysis analyze_pipeline(const Surface& surface, const Plane3& plane, const PipelineConfig& cfg,
                          const std::string& plot = {});

/// Demos: "sphere-tilt" {lambda, phi, azimuth}, "reflections", "unclean-loop",
/// "dichotomy" {count_a, count_b, seed}, "even-index" {count, seed}.
Analysis run_demo(const std::string& name, const nlohmann::json& params, const PipelineConfig& cfg,
                  const std::string& plot = {});

inline constexpr std::uint64_t kDefaultSeed = 20240601;

}  // namespace xcut
