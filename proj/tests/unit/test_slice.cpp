#include <doctest.h>

#include "corpus.hpp"
#include "error.hpp"
#include "slice.hpp"

#include <cmath>
#include <sstream>

using namespace xcut;

namespace {
Surface surf(const char* s) { return generate_surface(parse_surface_spec(s)); }
Plane3 horizontal(double z) { return Plane3(Vec3::UnitZ(), Vec3(0, 0, z)); }
}  // namespace

TEST_CASE("OBJ round trip keeps vertices, faces and normals") {
  TriangleMesh m = surf("sphere").tessellate(0.25);
  std::stringstream ss;
  write_obj(ss, m, "sphere");
  TriangleMesh back = read_obj(ss);
  REQUIRE(back.vertices.size() == m.vertices.size());
  REQUIRE(back.faces.size() == m.faces.size());
  REQUIRE(back.normals.size() == m.normals.size());
  double err = 0;
  for (std::size_t k = 0; k < m.vertices.size(); ++k) {
    err = std::max(err, (back.vertices[k] - m.vertices[k]).norm());
    err = std::max(err, (back.normals[k] - m.normals[k]).norm());
  }
  CHECK(err < 1e-12);
  CHECK(back.faces == m.faces);
}

TEST_CASE("OBJ reader: polygons, negative indices, slashes, errors") {
  std::istringstream quad("# square\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1 2/2 -2/3 -1/4\n");
  TriangleMesh m = read_obj(quad);
  CHECK(m.faces.size() == 2);
  CHECK(m.faces[1] == std::array<int, 3>{0, 2, 3});
  std::istringstream bad("v 0 0 0\nf 1 2 3\n");
  CHECK_THROWS_AS(read_obj(bad), Error);
  std::istringstream junk("v 0 zero 0\n");
  CHECK_THROWS_AS(read_obj(junk), Error);
}

TEST_CASE("sphere slices") {
  Surface s = surf("sphere");
  SUBCASE("z = 0.5 is a circle of radius sqrt(3)/2") {
    auto r = slice(s, horizontal(0.5));
    REQUIRE(r.compact.size() == 1);
    const CrossCut& c = r.compact[0];
    CHECK(c.loop.length() == doctest::Approx(kTwoPi * std::sqrt(0.75)).epsilon(1e-9));
    CHECK((c.centroid3() - Vec3(0, 0, 0.5)).norm() < 1e-9);
    CHECK(c.is_clean);
    CHECK(c.closure_gap < 1e-8);
    CHECK(c.transversality_margin == doctest::Approx(std::sqrt(0.75)).epsilon(1e-6));
    for (const Vec3& p : c.points) CHECK(std::fabs(p.norm() - 1) < 1e-10);
  }
  SUBCASE("z = 2 misses") {
    auto r = slice(s, horizontal(2));
    CHECK(r.compact.empty());
    CHECK(r.open.empty());
  }
  SUBCASE("a meridian plane through the chart poles gives a great circle") {
    auto r = slice(s, Plane3(Vec3::UnitX(), Vec3::Zero()));
    REQUIRE(r.compact.size() == 1);
    CHECK(r.compact[0].loop.length() == doctest::Approx(kTwoPi).epsilon(1e-9));
  }
  SUBCASE("tangent plane is rejected") { CHECK_THROWS_AS(slice(s, horizontal(1)), Error); }
  SUBCASE("near-tangent plane is still sliced") {
    auto r = slice(s, horizontal(0.9999));
    REQUIRE(r.compact.size() == 1);
    CHECK(r.compact[0].loop.length() == doctest::Approx(kTwoPi * std::sqrt(1 - 0.9999 * 0.9999)).epsilon(1e-6));
  }
}

TEST_CASE("figure-8 cylinder cut is the generator, translated") {
  Surface s = surf("fig8-cylinder");
  ClosedCurve gen = generate(parse_curve_spec("figure8"));
  for (double h : {-1.0, 0.0, 0.3}) {
    auto r = slice(s, horizontal(h));
    REQUIRE(r.compact.size() == 1);
    const CrossCut& c = r.compact[0];
    CHECK(c.loop.length() == doctest::Approx(gen.length()).epsilon(1e-9));
    CHECK((c.centroid3() - Vec3(0, 0, h)).norm() < 1e-9);
    CHECK(rotation_index(c.loop).index == 0);
    CHECK(c.is_clean);
  }
}

TEST_CASE("tilted cylinder cut is closed and centred on the axis") {
  Surface s = surf("fig8-cylinder");
  Plane3 p(tilt_direction(Vec3::UnitZ(), 0.2, 1.1), Vec3(0, 0, 0.4));
  auto r = slice(s, p);
  REQUIRE(r.compact.size() == 1);
  CHECK((r.compact[0].centroid3() - Vec3(0, 0, 0.4)).norm() < 1e-9);
  CHECK(r.compact[0].closure_gap < 1e-8);
}

TEST_CASE("a plane that leaves through the surface's boundary gives open components") {
  auto r = slice(surf("fig8-cylinder"), Plane3(Vec3::UnitX(), Vec3(0.5, 0, 0)));
  CHECK(r.compact.empty());
  CHECK(r.open.size() == 2);
}

TEST_CASE("mesh slicing agrees with the analytic sphere") {
  Surface mesh = Surface::mesh("sphere-mesh", surf("sphere").tessellate(2.0));
  auto r = slice(mesh, horizontal(0.5));
  REQUIRE(r.compact.size() == 1);
  // Chords of the tessellation undershoot the circle slightly.
  CHECK(r.compact[0].loop.length() == doctest::Approx(kTwoPi * std::sqrt(0.75)).epsilon(1e-3));
  CHECK((r.compact[0].centroid3() - Vec3(0, 0, 0.5)).norm() < 1e-3);
}

TEST_CASE("general position") {
  // Crossing of (cos t, sin 2t) at the origin: tangents (-1,-2) and (1,-2),
  // so the wedge of the two cylinder normals with e_z is 4/5.
  auto r = slice(surf("fig8-cylinder"), horizontal(0));
  REQUIRE(r.compact.size() == 1);
  auto gp = general_position_check(r.compact[0]);
  CHECK(gp.ok);
  CHECK(gp.min_wedge == doctest::Approx(0.8).epsilon(1e-6));

  auto sphere = slice(surf("sphere"), horizontal(0.2));
  CHECK(general_position_check(sphere.compact.at(0)).ok);

  auto doubled = slice(surf("cylinder_over:curve=doubled_circle"), horizontal(0));
  REQUIRE(doubled.compact.size() == 1);
  CHECK_FALSE(general_position_check(doubled.compact[0]).ok);
}

TEST_CASE("rigid motions commute with slicing") {
  Surface s = surf("fig8-cylinder");
  Plane3 p = horizontal(0.3);
  auto base = slice(s, p);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RigidMotion m = RigidMotion::random(seed);
    auto moved = slice(s.transformed(m), m.apply(p));
    REQUIRE(moved.compact.size() == 1);
    CHECK((moved.compact[0].centroid3() - m.apply(base.compact[0].centroid3())).norm() < 1e-8);
    CHECK(moved.compact[0].loop.length() == doctest::Approx(base.compact[0].loop.length()).epsilon(1e-9));
  }
}
