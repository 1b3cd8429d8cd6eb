#include <doctest.h>

#include "corpus.hpp"
#include "error.hpp"
#include "pipeline.hpp"

#include <cmath>

using namespace xcut;

namespace {
Surface surf(const char* s) { return generate_surface(parse_surface_spec(s)); }
Plane3 horizontal(double z) { return Plane3(Vec3::UnitZ(), Vec3(0, 0, z)); }

// A small CX grid keeps the pipeline cases quick.
PipelineConfig quick() {
  PipelineConfig cfg;
  cfg.cx_azimuths = 3;
  cfg.cx_heights = 2;
  cfg.cx_tilts = {0.1};
  cfg.max_continuation = 0;
  return cfg;
}
}  // namespace

TEST_CASE("figure-8 cylinder sweep: straight central curve at exact heights") {
  auto sw = sweep(surf("fig8-cylinder"), horizontal(0), 1.0, 21);
  REQUIRE(sw.stations.size() == 21);
  CHECK(sw.rotation_index == 0);
  CHECK_FALSE(sw.any_fallback);
  for (const auto& st : sw.stations) {
    CHECK(st.rotation_index == 0);
    CHECK(st.center_found);
    CHECK(sw.base.height(st.center) == doctest::Approx(st.height).epsilon(1e-12));
    CHECK((st.center - Vec3(0, 0, st.height)).norm() < 1e-9);
  }
  CHECK(axis_straightness(sw.central_curve()).value < 1e-8);
}

TEST_CASE("sphere sweep") {
  Surface s = surf("sphere");
  auto sw = sweep(s, horizontal(0), 0.5, 11);
  for (const auto& st : sw.stations) {
    CHECK(st.rotation_index == 1);
    CHECK((st.center - Vec3(0, 0, st.height)).norm() < 1e-9);
  }
  CHECK(axis_straightness(sw.central_curve()).value < 1e-8);
  try {
    sweep(s, horizontal(0), 1.5, 11);
    FAIL("expected NonTransverseContact");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonTransverseContact);
  }
}

TEST_CASE("sphere tilt law") {
  // The cut of the unit sphere by the plane through c = lambda e_z with unit
  // normal v is centred at the foot of the origin's perpendicular, (v . c) v.
  Surface s = surf("sphere");
  for (double lambda : {0.25, 0.5, 0.75}) {
    auto sw = sweep(s, horizontal(lambda), 0.05, 3);
    Vec3 c(0, 0, lambda);
    for (double phi : {0.05, 0.1, 0.2}) {
      Vec3 v = tilt_direction(Vec3::UnitZ(), phi, 0.3 + lambda);
      Vec3 got = tilt_center(s, sw, 0.0, v).center;
      CHECK((got - lambda * std::cos(phi) * v).norm() < 1e-6);
      CHECK(std::fabs((got - c).norm() - lambda * std::sin(phi)) < 1e-6);
    }
  }
}

TEST_CASE("tilt_center preconditions") {
  Surface s = surf("sphere");
  auto sw = sweep(s, horizontal(0), 0.2, 3);
  CHECK_THROWS_AS(tilt_center(s, sw, 0.0, tilt_direction(Vec3::UnitZ(), 0.25, 0)), Error);
  CHECK_THROWS_AS(tilt_center(s, sw, 0.5, Vec3::UnitZ()), Error);
}

TEST_CASE("figure-8 trapping") {
  Surface s = surf("fig8-cylinder");
  auto sw = sweep(s, horizontal(0), 0.5, 5);
  double worst = 0;
  for (double h : {-0.5, 0.0, 0.5})
    for (double az : {0.0, 2.0, 4.0}) {
      auto tc = tilt_center(s, sw, h, tilt_direction(Vec3::UnitZ(), 0.1, az));
      worst = std::max(worst, (tc.center - sw.center_at(h)).norm());
    }
  CHECK(worst < 1e-5);
}

TEST_CASE("tilted cuts of the helical tube are not central") {
  Surface s = surf("helical_tube");
  auto sw = sweep(s, horizontal(0), 0.5, 5);
  CHECK(axis_straightness(sw.central_curve()).value > 1e-2);
  CHECK_THROWS_AS(tilt_center(s, sw, 0.0, tilt_direction(Vec3::UnitZ(), 0.1, 0.0)), Error);
}

TEST_CASE("axis_straightness edge cases") {
  CHECK_THROWS_AS(axis_straightness({Vec3::Zero(), Vec3::UnitX()}), Error);
  CHECK_THROWS_AS(axis_straightness({Vec3::UnitX(), Vec3::UnitX(), Vec3::UnitX()}), Error);
  // Middle point offset by 0.1 from a chord of length 2.
  auto st = axis_straightness({Vec3(-1, 0, 0), Vec3(0, 0.1, 0), Vec3(1, 0, 0)});
  CHECK(st.value > 0.02);
}

TEST_CASE("cylinder test") {
  Surface cyl = surf("fig8-cylinder");
  auto ok = cylinder_test(cyl, horizontal(0), 1.0, Vec3::UnitZ());
  CHECK(ok.flag);
  CHECK(ok.violation < 1e-9);

  auto sphere = cylinder_test(surf("sphere"), horizontal(0), 2.0, Vec3(1, 2, 3));
  CHECK_FALSE(sphere.flag);
  CHECK(sphere.violation >= 1 - 1e-9);

  RigidMotion m = RigidMotion::random(7);
  auto moved = cylinder_test(cyl.transformed(m), m.apply(horizontal(0)), 1.0, m.apply_vector(Vec3::UnitZ()));
  CHECK(moved.flag);
}

TEST_CASE("pipeline verdicts") {
  auto f8 = run_theorem_pipeline(surf("fig8-cylinder"), horizontal(0), quick());
  CHECK(f8.verdict == Verdict::CentralCylinder);
  CHECK(f8.figure8_found);
  CHECK(angle_between(f8.axis, Vec3::UnitZ()) < 1e-6);
  CHECK(f8.center.norm() < 1e-8);
  CHECK(f8.figure8_double_point.norm() < 1e-8);

  for (const char* s : {"sphere", "ellipsoid"}) {
    auto r = run_theorem_pipeline(surf(s), horizontal(0.2), quick());
    CHECK(r.verdict == Verdict::NotApplicable);
    CHECK_FALSE(r.figure8_found);
  }

  auto helix = run_theorem_pipeline(surf("helical_tube"), horizontal(0), quick());
  CHECK(helix.verdict == Verdict::NotApplicable);
  CHECK(helix.reason.find("CX") != std::string::npos);

  PipelineConfig bad = quick();
  bad.cx_tilts = {0.3};
  CHECK_THROWS_AS(run_theorem_pipeline(surf("sphere"), horizontal(0), bad), Error);
}

TEST_CASE("pipeline commutes with rigid motions") {
  Surface s = surf("fig8-cylinder");
  Plane3 p = horizontal(0.3);
  auto base = run_theorem_pipeline(s, p, quick());
  REQUIRE(base.verdict == Verdict::CentralCylinder);
  RigidMotion m = RigidMotion::random(11);
  auto moved = run_theorem_pipeline(s.transformed(m), m.apply(p), quick());
  REQUIRE(moved.verdict == Verdict::CentralCylinder);
  CHECK((moved.axis - m.apply_vector(base.axis)).norm() < 1e-8);
  CHECK((moved.center - m.apply(base.center)).norm() < 1e-8);
}
