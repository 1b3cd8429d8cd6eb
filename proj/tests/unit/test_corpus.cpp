#include <doctest.h>

#include "corpus.hpp"
#include "double_points.hpp"
#include "error.hpp"
#include "oracle.hpp"

#include <cmath>

using namespace xcut;

TEST_CASE("shorthand parsing round-trips") {
  auto s = parse_curve_spec("odd_rose:k=3,eps=0.5");
  CHECK(s.kind == "odd_rose");
  CHECK(s.get("k") == 3);
  CHECK(s.get("eps") == 0.5);
  CHECK(parse_curve_spec(to_string(s)).params == s.params);
  auto p = parse_curve_spec("perturbed:seed=4,amplitude=0.01,base=odd_rose:k=5,eps=0.2");
  REQUIRE(p.base);
  CHECK(p.base->kind == "odd_rose");
  CHECK(p.base->get("k") == 5);
  auto j = curve_spec_from_json(to_json(p));
  CHECK(to_string(j) == to_string(parse_curve_spec(to_string(j))));
  CHECK_THROWS_AS(parse_curve_spec("hexagon"), Error);
  CHECK_THROWS_AS(parse_curve_spec("circle:radius=2"), Error);
  CHECK_THROWS_AS(parse_curve_spec("circle:r=two"), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate(parse_curve_spec("circle:r=0")), Error);
  CHECK_THROWS_AS(generate(parse_curve_spec("odd_rose:k=4")), Error);
  CHECK_THROWS_AS(generate(parse_curve_spec("odd_rose:eps=1.5")), Error);
  CHECK_THROWS_AS(generate(parse_curve_spec("random_fourier:decay=0.5")), Error);
}

TEST_CASE("figure-8 flags") {
  auto c = generate(parse_curve_spec("figure8"));
  CHECK(rotation_index(c).index == 0);
  auto pts = find_double_points(c);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].clean);
  CHECK(pts[0].location.norm() < 1e-8);
}

TEST_CASE("doubled circle is unclean") { CHECK_FALSE(is_clean(generate(parse_curve_spec("doubled_circle"))).clean); }

TEST_CASE("tangent circles: centroid and retrace") {
  auto c = generate(parse_curve_spec("tangent_circles"));
  Vec2 m = centroid(c);
  CHECK((m - Vec2(1.0 / 3, 0)).norm() < 1e-3);
  auto half = generate(parse_curve_spec("tangent_circles:window=0.025"));
  CHECK((centroid(half) - Vec2(1.0 / 3, 0)).norm() < 1e-4);
  CHECK(rotation_index(c).index == -1);
  auto rep = is_clean(c);
  CHECK_FALSE(rep.clean);
  CHECK(rep.continuum);
}

TEST_CASE("figure-2 loop: three tangential double points") {
  auto c = generate(parse_curve_spec("figure2_unclean"));
  CHECK(rotation_index(c).index == 1);
  CHECK(c.length() == doctest::Approx(4 * kTwoPi).epsilon(1e-6));
  auto pts = find_double_points(c);
  REQUIRE(pts.size() == 3);
  for (const auto& dp : pts) {
    CHECK(dp.simple);
    CHECK_FALSE(dp.clean);
  }
  std::vector<Vec2> expected = {Vec2(2, 0), Vec2(0, 0), Vec2(-2, 0)};
  for (const auto& e : expected) {
    double best = 1e9;
    for (const auto& dp : pts) best = std::min(best, (dp.location - e).norm());
    CHECK(best < 1e-5);
  }
  CHECK_FALSE(is_clean(c).clean);
}

TEST_CASE("odd rose index") {
  for (int k : {3, 5, 7}) {
    auto spec = parse_curve_spec("odd_rose:k=" + std::to_string(k) + ",eps=0.3");
    CHECK(rotation_index(generate(spec)).index == k);
  }
}

TEST_CASE("generation is deterministic") {
  auto a = generate(parse_curve_spec("random_fourier:seed=7"));
  auto b = generate(parse_curve_spec("random_fourier:seed=7"));
  CHECK(a.coefficients() == b.coefficients());
  auto p = generate(parse_curve_spec("perturbed:seed=3,base=figure8"));
  auto q = generate(parse_curve_spec("perturbed:seed=3,base=figure8"));
  CHECK(p.coefficients() == q.coefficients());
  auto s = generate(parse_curve_spec("perturbed:seed=3,amplitude=0.001,base=tangent_circles"));
  CHECK(s.kind() == CurveKind::Samples);
}

TEST_CASE("named corpus: every curve immersed, fast index equals the winding oracle") {
  for (const auto& spec : named_corpus()) {
    INFO(to_string(spec));
    auto c = generate(spec);
    CHECK(c.min_speed() > 0);
    CHECK(oracle::cross_check_rotation_index(c).pass);
  }
}

TEST_CASE("central loop generators") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto a = random_central_loop(CentralConstruction::CaseA, split_seed(11, i));
    auto b = random_central_loop(CentralConstruction::CaseB, split_seed(11, i));
    // Symmetry is exact by construction.
    for (double t : {0.3, 1.9, 4.2}) {
      CHECK((a.curve.position(t + kPi) - (2 * a.center - a.curve.position(t))).norm() < 1e-10);
      CHECK((b.curve.position(-t) - (2 * b.center - b.curve.position(t))).norm() < 1e-10);
    }
    CHECK(rotation_index(a.curve).index % 2 != 0);
    CHECK(rotation_index(b.curve).index == 0);
    auto e = random_even_index_loop(split_seed(11, i));
    CHECK(std::abs(rotation_index(e.curve).index) == 2);
  }
}
