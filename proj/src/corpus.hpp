#pragma once

#include "curve.hpp"
#include "surface.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace xcut {

/// A named curve generator with numeric parameters. `perturbed` carries its
/// base spec. Unspecified parameters take the defaults listed in
/// curve_variants().
struct CurveSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::shared_ptr<CurveSpec> base;

  double get(const std::string& key) const;
};

struct VariantInfo {
  std::string kind;
  std::map<std::string, double> defaults;
  std::string summary;
};

const std::vector<VariantInfo>& curve_variants();

/// "name" or "name:key=value,key=value". For perturbed, "base=" swallows the
/// rest of the string, e.g. "perturbed:seed=4,amplitude=0.01,base=odd_rose:k=3".
CurveSpec parse_curve_spec(const std::string& text);
std::string to_string(const CurveSpec& spec);

nlohmann::json to_json(const CurveSpec& spec);
CurveSpec curve_spec_from_json(const nlohmann::json& j);

/// Deterministic in the spec (including seeds). Throws InvalidSpec.
ClosedCurve generate(const CurveSpec& spec);

/// Named, non-random corpus curves used by property sweeps.
std::vector<CurveSpec> named_corpus();

// Randomized generators for the property suites. Every accepted curve is
// immersed and clean with tangent lines meeting at >= 0.05 rad at every
// double point; it is then moved by a random rotation, translation and
// scale. Throws GenerationExhausted after 100 consecutive rejections.

enum class CentralConstruction { CaseA, CaseB };

struct GeneratedLoop {
  ClosedCurve curve;
  /// The center of symmetry built into the construction (moved with the curve).
  Vec2 center = Vec2::Zero();
  int attempts = 0;
};

/// CaseA: only odd frequencies, so a(t + pi) = 2c - a(t).
/// CaseB: both coordinates are sine series, so a(-t) = 2c - a(t); exactly one
/// double point is enforced.
GeneratedLoop random_central_loop(CentralConstruction kind, std::uint64_t seed);

/// Rotation index +-2, dominated by e^{+-2it}, with generic perturbations.
GeneratedLoop random_even_index_loop(std::uint64_t seed);

/// Independent per-instance seed for suite member i.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i);

/// A named surface generator. cylinder_over and helical_tube carry a cross
/// section curve; graph_patch carries a shape name.
struct SurfaceSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::string shape;
  std::shared_ptr<CurveSpec> curve;

  double get(const std::string& key) const;
};

const std::vector<VariantInfo>& surface_variants();
const std::vector<std::string>& graph_shapes();

/// "name" or "name:key=value,...". "shape=" takes a word; "curve=" swallows
/// the rest of the string. "fig8-cylinder" abbreviates cylinder_over over the
/// unit figure-8 along e_z with extent [-2, 2].
SurfaceSpec parse_surface_spec(const std::string& text);
std::string to_string(const SurfaceSpec& spec);
nlohmann::json to_json(const SurfaceSpec& spec);
SurfaceSpec surface_spec_from_json(const nlohmann::json& j);

/// Analytic surface with exact normals. Throws InvalidSpec.
Surface generate_surface(const SurfaceSpec& spec);

}  // namespace xcut
