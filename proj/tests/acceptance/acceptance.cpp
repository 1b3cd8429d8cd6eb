// Acceptance gate: one line per criterion with the measured quantity, the
// bound and the wall time. Exit status 0 iff every criterion passes.
//
//   acceptance            run all criteria
//   acceptance 3 7        run the listed ones

#include "corpus.hpp"
#include "double_points.hpp"
#include "error.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"
#include "symmetry.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace xcut;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed requirement; the first few are kept for the report.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || failures < 3) detail << " FAIL[" << what << "]";
    pass = false;
    ++failures;
  }
  int failures = 0;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds; 0 = none stated
  std::function<void(Outcome&)> run;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Surface surface(const char* spec) { return generate_surface(parse_surface_spec(spec)); }
Plane3 horizontal(double z) { return Plane3(Vec3::UnitZ(), Vec3(0, 0, z)); }

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), std::fabs(a.dot(b)));
}

// --- 1 ---------------------------------------------------------------------
void centroid_anchor(Outcome& o) {
  const Vec2 anchor(1.0 / 3.0, 0.0);
  const double e = (centroid(generate(parse_curve_spec("tangent_circles"))) - anchor).norm();
  const double e_half = (centroid(generate(parse_curve_spec("tangent_circles:window=0.025"))) - anchor).norm();
  o.require(e < 1e-3, "window 0.05");
  o.require(e_half < 1e-4, "window 0.025");
  o.detail << "|g - (1/3,0)| = " << sci(e) << " (< 1e-3), halved window " << sci(e_half) << " (< 1e-4)";
}

// --- 2 ---------------------------------------------------------------------
void rotation_table(Outcome& o) {
  const std::pair<const char*, int> table[] = {
      {"circle", 1}, {"doubled_circle", 2}, {"figure8", 0}, {"odd_rose:k=3,eps=0.5", 3}};
  double worst_raw = 0.0;
  for (auto [spec, expected] : table) {
    ClosedCurve c = generate(parse_curve_spec(spec));
    RotationIndex ri = rotation_index(c);
    o.require(ri.index == expected, spec);
    worst_raw = std::max(worst_raw, std::fabs(ri.raw - expected));
  }
  o.require(worst_raw < 1e-6, "raw integral");
  int agree = 0, total = 0;
  for (const auto& spec : named_corpus()) {
    ClosedCurve c = generate(spec);
    ++total;
    oracle::OracleReport r = oracle::cross_check_rotation_index(c);
    if (r.pass) ++agree;
    o.require(r.pass, to_string(spec));
    if (c.kind() == CurveKind::Fourier) {
      const double raw = rotation_index(c).raw;
      worst_raw = std::max(worst_raw, std::fabs(raw - std::round(raw)));
    }
  }
  o.require(worst_raw < 1e-6, "Fourier raw integral");
  o.detail << "table 4/4 exact, max |raw - n| (Fourier) = " << sci(worst_raw) << ", fast = winding oracle on " << agree
           << "/" << total << " corpus curves";
}

// --- 3 ---------------------------------------------------------------------
void dichotomy(Outcome& o) {
  int a_ok = 0, b_ok = 0, violations = 0;
  double worst_dp = 0.0, min_margin = kInf;
  for (int i = 0; i < 200; ++i) {
    const bool case_a = i < 100;
    const std::uint64_t seed = split_seed(kSeed, static_cast<std::uint64_t>(i % 100) + (case_a ? 0 : 1000000));
    GeneratedLoop loop = random_central_loop(case_a ? CentralConstruction::CaseA : CentralConstruction::CaseB, seed);
    const std::string label = (case_a ? "A#" : "B#") + std::to_string(i % 100);
    SymmetryReport r;
    try {
      r = classify_central_loop(loop.curve);
    } catch (const Error& e) {
      ++violations;
      o.require(false, label + ": " + e.what());
      continue;
    }
    const double tol = 1e-6 * r.diameter;
    bool ok = r.center_found && (r.center - loop.center).norm() < tol;
    if (case_a) {
      ok = ok && r.loop_case == LoopCase::CaseA && r.rotation_index % 2 != 0 && r.margin > 0 && r.diameter_central;
      min_margin = std::min(min_margin, r.margin / r.diameter);
      a_ok += ok;
    } else {
      ok = ok && r.loop_case == LoopCase::CaseB && r.rotation_index == 0 && r.double_points.size() == 1 &&
           r.double_points[0].simple && !r.diameter_central;
      if (!r.double_points.empty()) {
        const double d = (r.double_points[0].location - loop.center).norm();
        worst_dp = std::max(worst_dp, d);
        ok = ok && d < 1e-6;
      }
      b_ok += ok;
    }
    o.require(ok, label);
  }
  o.detail << "CaseA " << a_ok << "/100, CaseB " << b_ok << "/100, DichotomyViolation " << violations
           << ", min margin/diam " << sci(min_margin) << ", max |p - c| " << sci(worst_dp) << " (< 1e-6)";
}

// --- 4 ---------------------------------------------------------------------
void even_index(Outcome& o) {
  const SymmetryConfig cfg;
  EvenIndexReport rep = even_index_exclusion_suite(100, kSeed, {}, cfg);
  int indexed = 0;
  for (const auto& e : rep.entries) {
    indexed += std::abs(e.rotation_index) == 2;
    o.require(!e.center_found, e.label + " center found");
    o.require(e.relative_residual > 1e3 * cfg.center_tolerance, e.label + " residual");
  }
  o.require(indexed == 100, "index +-2");
  o.detail << "centers found " << rep.central_found << "/100 (index +-2: " << indexed
           << "), min residual/diam " << sci(rep.min_relative_residual) << " (> " << sci(1e3 * cfg.center_tolerance)
           << ")";
}

// --- 5 ---------------------------------------------------------------------
void preimage_bound(Outcome& o) {
  std::vector<ClosedCurve> corpus;
  for (const auto& spec : named_corpus()) corpus.push_back(generate(spec));
  for (std::uint64_t i = 0; i < 10; ++i) {
    corpus.push_back(random_central_loop(CentralConstruction::CaseA, split_seed(kSeed, i)).curve);
    corpus.push_back(random_central_loop(CentralConstruction::CaseB, split_seed(kSeed, i)).curve);
    corpus.push_back(random_even_index_loop(split_seed(kSeed, i)).curve);
  }
  double worst = kInf;
  int clean = 0, with_double_points = 0;
  for (const auto& c : corpus) {
    CurveAnalysis a = analyze_curve(c);
    if (!a.is_clean) continue;
    ++clean;
    if (a.double_points.empty()) continue;
    ++with_double_points;
    const double product = a.min_preimage_separation * a.kappa_bar_normalized;
    worst = std::min(worst, product);
    o.require(product >= kPi - 1e-3, c.name());
  }
  o.detail << "min sep * kappa_bar = " << worst << " (>= pi - 1e-3) over " << with_double_points
           << " clean curves with double points (" << clean << " clean of " << corpus.size() << ")";
}

// --- 6 ---------------------------------------------------------------------
void sphere_tilt(Outcome& o) {
  Surface sphere = surface("sphere");
  const SweepConfig cfg;
  double worst_center = 0.0, worst_distance = 0.0;
  for (double lambda : {0.25, 0.5, 0.75}) {
    const Vec3 c(0, 0, lambda);
    TubularSweep sw = sweep(sphere, horizontal(lambda), 0.05, 3, cfg);
    for (double phi : {0.05, 0.1, 0.2})
      for (double az : {0.0, 2.0}) {
        const Vec3 v = tilt_direction(Vec3::UnitZ(), phi, az);
        TiltCenter tc = tilt_center(sphere, sw, 0.0, v, cfg);
        worst_center = std::max(worst_center, (tc.center - lambda * std::cos(phi) * v).norm());
        worst_distance = std::max(worst_distance, std::fabs((tc.center - c).norm() - lambda * std::sin(phi)));
      }
  }
  o.require(worst_center < 1e-6, "center");
  o.require(worst_distance < 1e-6, "distance");
  o.detail << "max |c_v - lambda cos(phi) v| = " << sci(worst_center) << ", max ||c_v - c| - lambda sin(phi)| = "
           << sci(worst_distance) << " (< 1e-6, 18 cuts)";
}

// --- 7 ---------------------------------------------------------------------
PipelineResult figure8_pipeline() { return run_theorem_pipeline(surface("fig8-cylinder"), horizontal(0.3)); }

void trapping_and_pipeline(Outcome& o) {
  PipelineResult r = figure8_pipeline();
  o.require(r.verdict == Verdict::CentralCylinder, "verdict " + std::string(to_string(r.verdict)));
  double worst_trap = 0.0;
  int central = 0;
  for (const auto& s : r.cx_samples)
    if (s.central) {
      ++central;
      worst_trap = std::max(worst_trap, s.trap_distance);
    }
  o.require(central > 0 && worst_trap <= 1e-5, "trapping");
  o.require(r.straightness < 1e-8, "straightness");
  const double axis_err = angle_between(r.axis, Vec3::UnitZ());
  o.require(axis_err < 1e-6, "axis");
  o.detail << "fig8-cylinder " << to_string(r.verdict) << ": trapping " << sci(worst_trap) << " over " << central
           << " tilted cuts (<= 1e-5), straightness " << sci(r.straightness) << " (< 1e-8), axis " << sci(axis_err)
           << " rad (< 1e-6);";
  for (const char* s : {"sphere", "ellipsoid:c=2"}) {
    PipelineResult n = run_theorem_pipeline(surface(s), horizontal(0.2));
    o.require(n.verdict == Verdict::NotApplicable, s);
    o.detail << " " << s << " " << to_string(n.verdict) << ";";
  }
}

// --- 8 ---------------------------------------------------------------------
void oracle_equivalence(Outcome& o) {
  int agree = 0, total = 0, continua = 0, fourier = 0;
  double worst_location = 0.0, worst_fd = 0.0;
  for (const auto& spec : named_corpus()) {
    ClosedCurve c = generate(spec);
    ++total;
    oracle::OracleReport r = oracle::cross_check_double_points(c);
    o.require(r.pass, to_string(spec));
    if (r.pass) ++agree;
    if (r.fast_value < 0) ++continua;
    else if (std::isfinite(r.discrepancy)) worst_location = std::max(worst_location, r.discrepancy);
    if (c.kind() == CurveKind::Fourier) {
      ++fourier;
      oracle::OracleReport fd = oracle::finite_difference_check(c);
      o.require(fd.pass, "finite differences " + to_string(spec));
      worst_fd = std::max(worst_fd, fd.discrepancy);
    }
  }
  o.detail << "double points agree on " << agree << "/" << total << " corpus curves (" << continua
           << " continua), max location gap " << sci(worst_location) << " (< 1e-6); derivative vs FD "
           << sci(worst_fd) << " (< 1e-8) on " << fourier << " Fourier curves";
}

// --- 9 ---------------------------------------------------------------------
void equivariance(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> U(-3, 3);
  double worst_centroid = 0.0, worst_kappa = 0.0, worst_center = 0.0;
  int flag_mismatch = 0;
  for (const char* spec : {"figure8", "odd_rose:k=3,eps=0.5", "three_petal", "random_fourier:seed=1",
                           "perturbed:seed=1,amplitude=0.01,base=figure8", "tangent_circles"}) {
    ClosedCurve f = generate(parse_curve_spec(spec));
    const Vec2 g = centroid(f);
    const SymmetryReport d = detect_center(f, CenterMode::Search);
    for (int trial = 0; trial < 4; ++trial) {
      const double th = U(rng);
      Mat2 R;
      R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      const Vec2 b(U(rng), U(rng));
      ClosedCurve m = f.transformed(R, b);
      worst_centroid = std::max(worst_centroid, (centroid(m) - (R * g + b)).norm());
      for (int k = 0; k < 16; ++k) {
        const double t = kTwoPi * (k + 0.3) / 16;
        worst_kappa = std::max(worst_kappa, std::fabs(geodesic_curvature(m, t) - geodesic_curvature(f, t)));
      }
      const SymmetryReport dm = detect_center(m, CenterMode::Search);
      if (dm.center_found != d.center_found) ++flag_mismatch;
      if (d.center_found && dm.center_found)
        worst_center = std::max(worst_center, (dm.center - (R * d.center + b)).norm());
    }
  }
  o.require(worst_centroid < 1e-8, "centroid");
  o.require(worst_kappa < 1e-8, "curvature");
  o.require(flag_mismatch == 0 && worst_center < 1e-8, "detect_center");

  Surface s = surface("fig8-cylinder");
  const Plane3 p = horizontal(0.3);
  PipelineResult base = run_theorem_pipeline(s, p);
  const RigidMotion motion = RigidMotion::random(kSeed);
  PipelineResult moved = run_theorem_pipeline(s.transformed(motion), motion.apply(p));
  const bool both = base.verdict == Verdict::CentralCylinder && moved.verdict == Verdict::CentralCylinder;
  const double axis_gap = (moved.axis - motion.apply_vector(base.axis)).norm();
  const double center_gap = (moved.center - motion.apply(base.center)).norm();
  o.require(both && axis_gap < 1e-8 && center_gap < 1e-8, "pipeline axis");
  o.detail << "centroid " << sci(worst_centroid) << ", kappa_g " << sci(worst_kappa) << ", detect_center "
           << sci(worst_center) << " (" << flag_mismatch << " flag mismatches), pipeline axis " << sci(axis_gap)
           << " center " << sci(center_gap) << " (all < 1e-8)";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "centroid anchor", 1.0, centroid_anchor},
      {2, "rotation-index table", 2.0, rotation_table},
      {3, "dichotomy suite", 30.0, dichotomy},
      {4, "even-index exclusion", 15.0, even_index},
      {5, "preimage separation bound", 0.0, preimage_bound},
      {6, "sphere tilt law", 0.0, sphere_tilt},
      {7, "figure-8 trapping and pipeline", 60.0, trapping_and_pipeline},
      {8, "oracle equivalence", 0.0, oracle_equivalence},
      {9, "equivariance", 0.0, equivariance},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0) o.require(dt < c.time_limit, "time limit " + std::to_string(c.time_limit) + " s");
    failed += !o.pass;
    std::printf("[%s] %d %-32s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, dt, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
