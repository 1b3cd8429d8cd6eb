#include <doctest.h>

#include "corpus.hpp"
#include "error.hpp"
#include "oracle.hpp"
#include "symmetry.hpp"

#include <chrono>
#include <cmath>

using namespace xcut;

namespace {
ClosedCurve gen(const char* s) { return generate(parse_curve_spec(s)); }
}  // namespace

TEST_CASE("match: circle and figure-8 against their reflections") {
  auto circle = gen("circle");
  auto m = match_reparametrization(circle, circle.reflected(Vec2::Zero()));
  CHECK(m.orientation == Orientation::Preserves);
  CHECK_FALSE(m.advisory);
  auto f8 = gen("figure8");
  auto r = match_reparametrization(f8, f8.reflected(Vec2::Zero()));
  CHECK(r.orientation == Orientation::Reverses);
  CHECK(r.residual < 1e-8);
}

TEST_CASE("match: figure-2 loop against its reflection") {
  auto f2 = gen("figure2_unclean");
  auto m = match_reparametrization(f2, f2.reflected(Vec2::Zero()));
  CHECK(m.orientation == Orientation::None);
  CHECK(m.advisory);
  // The images agree, so the failure is not an image mismatch.
  CHECK(oracle::hausdorff_residual(f2, Vec2::Zero()) < 1e-4);
}

TEST_CASE("match is invariant under parameter shifts") {
  for (const char* s : {"figure8", "odd_rose:k=3,eps=0.5", "perturbed:seed=2,amplitude=0.05,base=ellipse", "three_petal"}) {
    INFO(s);
    auto c = gen(s);
    for (double rho : {0.3, 2.1, 5.0}) CHECK(match_reparametrization(c, c.shifted(rho)).orientation == Orientation::Preserves);
    CHECK(match_reparametrization(c, c.reversed()).orientation == Orientation::Reverses);
  }
  auto a = gen("figure8");
  CHECK(match_reparametrization(a, gen("figure8:a=1.1")).orientation == Orientation::None);
}

TEST_CASE("detect_center") {
  auto c = gen("circle:cx=2,cy=3");
  auto r = detect_center(c, CenterMode::Centroid);
  CHECK(r.center_found);
  CHECK((r.center - Vec2(2, 3)).norm() < 1e-9);
  CHECK(r.orientation == Orientation::Preserves);

  auto f = detect_center(gen("figure8"), CenterMode::Centroid);
  CHECK(f.center_found);
  CHECK(f.center.norm() < 1e-9);
  CHECK(f.orientation == Orientation::Reverses);
}

TEST_CASE("tangent circles: centroid fails, search finds the origin") {
  auto tc = gen("tangent_circles");
  auto r = detect_center(tc, CenterMode::Centroid);
  CHECK_FALSE(r.center_found);
  CHECK((r.center - Vec2(1.0 / 3, 0)).norm() < 1e-3);
  auto s = detect_center(tc, CenterMode::Search);
  CHECK(s.center_found);
  CHECK(s.center.norm() < 1e-3);
  CHECK(oracle::hausdorff_residual(tc, s.center) < 1e-3);
}

TEST_CASE("diameter-centrality") {
  auto circle = arc_length_reparametrize(gen("circle"), 1024);
  CHECK(is_diameter_central(circle, Vec2::Zero()).flag);
  auto f8 = arc_length_reparametrize(gen("figure8"), 4096);
  CHECK_FALSE(is_diameter_central(f8, Vec2::Zero()).flag);
  auto rose = arc_length_reparametrize(gen("odd_rose:k=3,eps=0.5"), 4096);
  auto d = is_diameter_central(rose, Vec2::Zero());
  CHECK(d.flag);
  CHECK(d.phase == doctest::Approx(kPi).epsilon(1e-6));
  CHECK_THROWS_AS(is_diameter_central(gen("odd_rose:k=3,eps=0.5"), Vec2::Zero()), Error);
}

TEST_CASE("classify_central_loop") {
  auto c = classify_central_loop(gen("circle"));
  CHECK(c.loop_case == LoopCase::CaseA);
  CHECK(c.rotation_index == 1);
  auto f = classify_central_loop(gen("figure8"));
  CHECK(f.loop_case == LoopCase::CaseB);
  CHECK(f.rotation_index == 0);
  CHECK(f.center_double_point_distance < 1e-8);
  auto r = classify_central_loop(gen("odd_rose:k=3,eps=0.5"));
  CHECK(r.loop_case == LoopCase::CaseA);
  CHECK(r.rotation_index == 3);
  CHECK(r.margin == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(classify_central_loop(gen("perturbed:seed=3,amplitude=0.05,base=odd_rose:k=3")).loop_case == LoopCase::NotCentral);
  CHECK_THROWS_AS(classify_central_loop(gen("doubled_circle")), Error);
}

TEST_CASE("small suites") {
  auto d = dichotomy_suite(5, 5, 99);
  CHECK(d.violations == 0);
  CHECK(d.case_a == 5);
  CHECK(d.case_b == 5);
  auto e = even_index_exclusion_suite(5, 99);
  CHECK(e.central_found == 0);
  CHECK(e.min_relative_residual > 1e-3);
  auto forced = even_index_exclusion_suite(0, 1, {gen("doubled_circle")});
  CHECK(forced.excluded == 1);
  CHECK(forced.central_found == 0);
  CHECK(even_index_exclusion_suite(0, 1).entries.empty());
}

TEST_CASE("search mode commutes with rigid motions on an unclean loop") {
  auto tc = gen("tangent_circles");
  auto s = detect_center(tc, CenterMode::Search);
  REQUIRE(s.center_found);
  const double th = 0.7;
  Mat2 R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Vec2 b(-1.25, 2.5);
  auto m = detect_center(tc.transformed(R, b), CenterMode::Search);
  REQUIRE(m.center_found);
  CHECK((m.center - (R * s.center + b)).norm() < 1e-8);
}
