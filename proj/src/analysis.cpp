#include "analysis.hpp"

#include "error.hpp"

#include <cmath>

namespace xcut {

using nlohmann::json;

namespace {

// Polygon chord error at the oracle's sample count stays well below this
// fraction of the diameter for corpus curves.
constexpr double kImageOracleTolerance = 1e-4;

std::vector<Vec2> trace(const ClosedCurve& c, const Vec2& shift, int n = 1024) {
  std::vector<Vec2> out(n);
  for (int k = 0; k < n; ++k) out[k] = c.position(kTwoPi * k / n) + shift;
  return out;
}

oracle::OracleReport hausdorff_check(const ClosedCurve& curve, const Vec2& c, double fast) {
  oracle::OracleReport r;
  r.subject = "hausdorff_residual";
  r.fast_value = fast;
  r.oracle_value = oracle::hausdorff_residual(curve, c);
  r.discrepancy = r.oracle_value;
  r.tolerance = kImageOracleTolerance * curve.diameter();
  r.pass = r.discrepancy < r.tolerance;
  return r;
}

// Cross-checks on one loop: rotation index, and double points when the
// curve is not a retraced continuum.
void loop_checks(Analysis& an, const ClosedCurve& c) {
  an.add(oracle::cross_check_rotation_index(c));
  try {
    an.add(oracle::cross_check_double_points(c));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ContinuumIntersection) throw;
  }
}

json cut_summary(const CrossCut& cut, const SliceConfig& cfg) {
  json j = to_json(cut);
  try {
    j["rotation_index"] = rotation_index(cut.loop).index;
  } catch (const Error& e) {
    j["rotation_index"] = nullptr;
    j["note"] = e.what();
  }
  if (cut.is_clean) {
    auto dps = find_double_points(cut.loop, cfg.double_points);
    json d = json::array();
    for (const auto& p : dps) d.push_back({{"location", to_json(cut.ambient(p.location))}, {"simple", p.simple}});
    j["double_points"] = std::move(d);
    auto gp = general_position_check(cut, cfg);
    j["general_position"] = {{"ok", gp.ok}, {"min_wedge", gp.min_wedge}, {"message", gp.message}};
  }
  return j;
}

double param(const json& p, const char* key, double fallback) {
  if (!p.is_object() || !p.contains(key)) return fallback;
  if (!p.at(key).is_number()) fail(ErrorCode::InvalidArgument, std::string("demo parameter ") + key + " must be a number");
  return p.at(key).get<double>();
}

Analysis demo_sphere_tilt(const json& p, const PipelineConfig& cfg, const std::string& plot) {
  const double lambda = param(p, "lambda", 0.5), phi = param(p, "phi", 0.1), az = param(p, "azimuth", 0.0);
  if (!(lambda >= 0 && lambda < 0.9)) fail(ErrorCode::InvalidArgument, "lambda must lie in [0, 0.9)");
  if (!(phi > 0 && phi < cfg.sweep.tilt_max)) fail(ErrorCode::InvalidArgument, "phi must lie in (0, tilt_max)");
  Surface sphere = generate_surface(parse_surface_spec("sphere"));
  const Vec3 u = Vec3::UnitZ(), c = lambda * u;
  const Plane3 base(u, c);
  TubularSweep sw = sweep(sphere, base, 0.05, 3, cfg.sweep);
  const Vec3 v = tilt_direction(u, phi, az);
  TiltCenter tc = tilt_center(sphere, sw, 0.0, v, cfg.sweep);

  // The plane through c with normal v cuts the unit sphere in a circle about
  // the foot of the perpendicular from the origin, (v . c) v.
  const Vec3 exact = v.dot(c) * v;
  const double moved = (tc.center - c).norm();
  Analysis an;
  an.results = {{"lambda", lambda},
                {"phi", phi},
                {"azimuth", az},
                {"c", to_json(c)},
                {"v", to_json(v)},
                {"untilted_center", to_json(sw.center_at(0.0))},
                {"tilted_center", to_json(tc.center)},
                {"displacement", moved},
                {"expected_displacement", lambda * std::sin(phi)},
                {"symmetry_residual", tc.residual}};
  oracle::OracleReport r1{"sphere_tilt_center", tc.center.norm(), exact.norm(), (tc.center - exact).norm(), 1e-6};
  r1.pass = r1.discrepancy < r1.tolerance;
  oracle::OracleReport r2{"sphere_tilt_displacement", moved, lambda * std::sin(phi),
                          std::fabs(moved - lambda * std::sin(phi)), 1e-6};
  r2.pass = r2.discrepancy < r2.tolerance;
  an.add(r1);
  an.add(r2);
  if (!plot.empty()) {
    SliceResult tilted = slice(sphere, Plane3(v, c), cfg.sweep.slice);
    // Blue: the tilted cut through c, centred elsewhere. Red: the cut centred at c.
    plot_cuts(base, {tilted.compact.at(0), sw.stations[1].cut}, {tc.center, sw.center_at(0.0)},
              "sphere cross-cuts through c")
        .write(plot);
  }
  return an;
}

Analysis demo_reflections(const PipelineConfig& cfg, const std::string& plot) {
  Analysis an;
  SvgPlot fig("reflection through the center");
  const Vec2 shift[] = {Vec2(-1.6, 0), Vec2(1.6, 0)};
  int k = 0;
  for (const char* name : {"circle", "figure8"}) {
    ClosedCurve c = generate(parse_curve_spec(name));
    MatchResult m = match_reparametrization(c, c.reflected(Vec2::Zero()), cfg.sweep.symmetry);
    an.results[name] = to_json(m);
    an.add(hausdorff_check(c, Vec2::Zero(), m.residual));
    fig.path(trace(c, shift[k]), true, k ? "#d62728" : "#1f77b4");
    fig.mark(shift[k], SvgPlot::Marker::Cross, "#000000", std::string(to_string(m.orientation)));
    ++k;
  }
  if (!plot.empty()) fig.write(plot);
  return an;
}

Analysis demo_unclean(const PipelineConfig& cfg, const std::string& plot) {
  ClosedCurve c = generate(parse_curve_spec("figure2_unclean"));
  MatchResult m = match_reparametrization(c, c.reflected(Vec2::Zero()), cfg.sweep.symmetry);
  CleanReport cr = is_clean(c, cfg.sweep.symmetry.double_points);
  Analysis an;
  an.results = {{"match", to_json(m)}, {"clean", cr.clean}, {"clean_message", cr.message}};
  an.add(hausdorff_check(c, Vec2::Zero(), m.residual));
  if (!plot.empty()) plot_curve(c, Vec2::Zero(), "same image, no reparametrization").write(plot);
  return an;
}

Analysis demo_dichotomy(const json& p, const PipelineConfig& cfg) {
  const int a = static_cast<int>(param(p, "count_a", 100)), b = static_cast<int>(param(p, "count_b", 100));
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", static_cast<double>(kDefaultSeed)));
  if (a < 0 || b < 0) fail(ErrorCode::InvalidArgument, "suite counts must be nonnegative");
  DichotomyReport rep = dichotomy_suite(a, b, seed, cfg.sweep.symmetry);
  Analysis an;
  json entries = json::array();
  for (const auto& e : rep.entries) entries.push_back(to_json(e));
  an.results = {{"seed", seed},          {"case_a", rep.case_a}, {"case_b", rep.case_b},
                {"violations", rep.violations}, {"entries", std::move(entries)}};
  an.violation = rep.violations > 0;
  return an;
}

Analysis demo_even_index(const json& p, const PipelineConfig& cfg) {
  const int count = static_cast<int>(param(p, "count", 100));
  const auto seed = static_cast<std::uint64_t>(param(p, "seed", static_cast<double>(kDefaultSeed)));
  if (count < 0) fail(ErrorCode::InvalidArgument, "suite count must be nonnegative");
  EvenIndexReport rep = even_index_exclusion_suite(count, seed, {}, cfg.sweep.symmetry);
  Analysis an;
  json entries = json::array();
  for (const auto& e : rep.entries) entries.push_back(to_json(e));
  an.results = {{"seed", seed},
                {"central_found", rep.central_found},
                {"excluded", rep.excluded},
                {"min_relative_residual", rep.entries.empty() ? json(nullptr) : json(rep.min_relative_residual)},
                {"entries", std::move(entries)}};
  an.violation = rep.central_found > 0;
  return an;
}

}  // namespace

void Analysis::add(const oracle::OracleReport& r) {
  oracle.push_back(xcut::to_json(r));
  if (!r.pass) violation = true;
}

json Analysis::to_json() const { return {{"results", results}, {"oracle", oracle}, {"violation", violation}}; }

Analysis analyze_curve(const ClosedCurve& curve, const PipelineConfig& cfg, const std::string& plot) {
  const auto& sym = cfg.sweep.symmetry;
  Analysis an;
  RotationIndex ri = rotation_index(curve);
  CleanReport cr = is_clean(curve, sym.double_points);
  json dps = json::array();
  if (!cr.continuum)
    for (const auto& d : find_double_points(curve, sym.double_points)) dps.push_back(to_json(d));
  SymmetryReport sr = detect_center(curve, CenterMode::Centroid, sym);
  an.results = {{"name", curve.name()},
                {"kind", curve.kind() == CurveKind::Fourier ? "fourier" : "samples"},
                {"length", curve.length()},
                {"diameter", curve.diameter()},
                {"min_speed", curve.min_speed()},
                {"centroid", to_json(centroid(curve))},
                {"rotation_index", ri.index},
                {"rotation_index_raw", ri.raw},
                {"max_abs_curvature", max_abs_curvature(curve)},
                {"unit_speed", is_unit_speed(curve)},
                {"clean", cr.clean},
                {"continuum", cr.continuum},
                {"clean_message", cr.message},
                {"double_points", std::move(dps)},
                {"center_found", sr.center_found},
                {"orientation", to_string(sr.orientation)}};
  if (sr.center_found) an.results["center"] = to_json(sr.center);
  loop_checks(an, curve);
  const bool fourier = curve.kind() == CurveKind::Fourier;
  an.add(oracle::finite_difference_check(curve, 1e-4, fourier ? 1e-8 : 1e-4));
  if (!plot.empty())
    plot_curve(curve, sr.center_found ? std::optional<Vec2>(sr.center) : std::nullopt).write(plot);
  return an;
}

Analysis analyze_match(const ClosedCurve& a, const ClosedCurve& b, const PipelineConfig& cfg,
                       const std::string& plot) {
  MatchResult m = match_reparametrization(a, b, cfg.sweep.symmetry);
  Analysis an;
  an.results = to_json(m);
  oracle::OracleReport r;
  r.subject = "image_distance";
  r.fast_value = m.residual;
  r.oracle_value = oracle::image_distance(a, b);
  r.discrepancy = r.oracle_value;
  r.tolerance = kImageOracleTolerance * std::max(a.diameter(), b.diameter());
  // A reparametrization has the same image; a non-match makes no claim.
  r.pass = m.orientation == Orientation::None || r.discrepancy < r.tolerance;
  an.add(r);
  if (!plot.empty()) {
    SvgPlot fig("match: " + std::string(to_string(m.orientation)));
    fig.path(trace(a, Vec2::Zero()), true, "#1f77b4", 3.0);
    fig.path(trace(b, Vec2::Zero()), true, "#d62728", 1.2);
    fig.write(plot);
  }
  return an;
}

Analysis analyze_classify(const ClosedCurve& curve, const PipelineConfig& cfg, const std::string& plot) {
  const auto& sym = cfg.sweep.symmetry;
  Analysis an;
  SymmetryReport det = detect_center(curve, CenterMode::Search, sym);
  an.results["detection"] = to_json(det);
  std::optional<Vec2> center;
  if (det.center_found) center = det.center;
  try {
    SymmetryReport cls = classify_central_loop(curve, sym);
    an.results["case"] = to_string(cls.loop_case);
    an.results["classification"] = to_json(cls);
    if (cls.center_found) {
      center = cls.center;
      an.add(hausdorff_check(curve, cls.center, cls.residual));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UncleanInput) throw;
    an.results["case"] = to_string(LoopCase::Unclean);
    an.results["note"] = e.what();
  }
  loop_checks(an, curve);
  if (!plot.empty()) plot_curve(curve, center).write(plot);
  return an;
}

Analysis analyze_slice(const Surface& surface, const Plane3& plane, const PipelineConfig& cfg, const std::string& plot) {
  const SliceConfig& sc = cfg.sweep.slice;
  SliceResult r = slice(surface, plane, sc);
  Analysis an;
  json compact = json::array(), open = json::array();
  std::vector<Vec3> centers;
  for (const auto& c : r.compact) {
    compact.push_back(cut_summary(c, sc));
    centers.push_back(c.centroid3());
    if (c.is_clean) an.add(oracle::cross_check_rotation_index(c.loop));
  }
  for (const auto& o : r.open) open.push_back(to_json(o));
  an.results = {{"surface", surface.name()},
                {"plane", to_json(plane)},
                {"compact", std::move(compact)},
                {"open", std::move(open)},
                {"min_margin", std::isfinite(r.min_margin) ? json(r.min_margin) : json(nullptr)}};
  if (!plot.empty() && !r.compact.empty()) plot_cuts(plane, r.compact, centers, "cross-cuts").write(plot);
  return an;
}

Analysis analyze_sweep(const TubularSweep& sw, const std::string& plot) {
  Analysis an;
  an.results = to_json(sw);
  try {
    an.results["axis_straightness"] = axis_straightness(sw.central_curve()).value;
  } catch (const Error& e) {
    an.results["axis_straightness"] = nullptr;
    an.results["note"] = e.what();
  }
  for (const auto& st : sw.stations) an.add(oracle::cross_check_rotation_index(st.cut.loop));
  if (!plot.empty()) plot_sweep(sw, "tubular sweep").write(plot);
  return an;
}

Analysis analyze_pipeline(const Surface& surface, const Plane3& plane, const PipelineConfig& cfg,
                          const std::string& plot) {
  PipelineResult pr = run_theorem_pipeline(surface, plane, cfg);
  Analysis an;
  an.results = to_json(pr);
  an.violation = pr.verdict == Verdict::Inconsistent;
  if (pr.figure8_found) {
    // Re-derive the figure-8 cut's invariants with the oracles.
    SliceResult base = slice(surface, plane, cfg.sweep.slice);
    for (const auto& c : base.compact) {
      if (!c.is_clean) continue;
      auto dps = find_double_points(c.loop, cfg.sweep.slice.double_points);
      if (dps.size() == 1 && (c.ambient(dps[0].location) - pr.figure8_double_point).norm() < 1e-9 * c.loop.diameter())
        loop_checks(an, c.loop);
    }
  }
  if (pr.sweep) {
    for (const auto& st : pr.sweep->stations) an.add(oracle::cross_check_rotation_index(st.cut.loop));
    if (!plot.empty()) plot_sweep(*pr.sweep, std::string("verdict: ") + to_string(pr.verdict)).write(plot);
  } else if (!plot.empty()) {
    SliceResult base = slice(surface, plane, cfg.sweep.slice);
    std::vector<Vec3> centers;
    for (const auto& c : base.compact) centers.push_back(c.centroid3());
    if (!base.compact.empty())
      plot_cuts(plane, base.compact, centers, std::string("verdict: ") + to_string(pr.verdict)).write(plot);
  }
  return an;
}

Analysis run_demo(const std::string& name, const json& params, const PipelineConfig& cfg, const std::string& plot) {
  if (name == "sphere-tilt") return demo_sphere_tilt(params, cfg, plot);
  if (name == "reflections") return demo_reflections(cfg, plot);
  if (name == "unclean-loop") return demo_unclean(cfg, plot);
  if (name == "dichotomy") return demo_dichotomy(params, cfg);
  if (name == "even-index") return demo_even_index(params, cfg);
  fail(ErrorCode::InvalidArgument, "unknown demo '" + name + "'");
}

}  // namespace xcut
