#include <doctest.h>

#include "double_points.hpp"
#include "error.hpp"

#include <cmath>

using namespace xcut;
using cd = std::complex<double>;

namespace {

ClosedCurve figure8() {
  return ClosedCurve::from_fourier(-2, {cd(-0.5, 0), cd(0.5, 0), cd(0, 0), cd(0.5, 0), cd(0.5, 0)});
}

// Three-petal rose r = cos(3 theta) with t = 2 theta: one triple point at the origin.
ClosedCurve three_petal() { return ClosedCurve::from_fourier(-1, {cd(0.5, 0), cd(0, 0), cd(0, 0), cd(0.5, 0)}); }

}  // namespace

TEST_CASE("circle has no double points") {
  auto c = ClosedCurve::from_fourier(0, {cd(2, 3), cd(1.5, 0)});
  CHECK(find_double_points(c).empty());
  CHECK(is_clean(c).clean);
  CHECK(lift_is_embedded(c));
}

TEST_CASE("figure-8 crossing") {
  auto pts = find_double_points(figure8());
  REQUIRE(pts.size() == 1);
  const auto& dp = pts[0];
  CHECK(dp.location.norm() < 1e-8);
  REQUIRE(dp.preimages.size() == 2);
  CHECK(dp.preimages[0] == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(dp.preimages[1] == doctest::Approx(3 * kPi / 2).epsilon(1e-10));
  CHECK(dp.simple);
  CHECK(dp.clean);
  // Tangents (-1,-2) and (1,-2).
  double expected = std::acos(3.0 / 5.0);
  CHECK(dp.tangent_angles[0][1] == doctest::Approx(expected).epsilon(1e-10));
  CHECK(is_clean(figure8()).clean);
  CHECK(lift_is_embedded(figure8()));
}

TEST_CASE("doubled circle is a continuum") {
  auto c = ClosedCurve::from_fourier(2, {cd(1, 0)});
  CHECK_THROWS_AS(find_double_points(c), Error);
  try {
    find_double_points(c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ContinuumIntersection);
  }
  auto rep = is_clean(c);
  CHECK_FALSE(rep.clean);
  CHECK(rep.continuum);
  CHECK_FALSE(lift_is_embedded(c));
}

TEST_CASE("triple point with distinct tangent lines is clean") {
  auto pts = find_double_points(three_petal());
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].location.norm() < 1e-8);
  CHECK(pts[0].preimages.size() == 3);
  CHECK_FALSE(pts[0].simple);
  CHECK(pts[0].clean);
  // Tangent lines at the origin are 60 degrees apart.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double a = pts[0].tangent_angles[i][j];
      CHECK(std::min(a, kPi - a) == doctest::Approx(kPi / 3).epsilon(1e-8));
    }
}

TEST_CASE("near-tangential crossing is unclean") {
  // (cos t, 2e-4 sin 2t): the tangent lines at the crossing meet at 8e-4 rad.
  auto flat8 = ClosedCurve::from_fourier(-2, {cd(-0.0001, 0), cd(0.5, 0), cd(0, 0), cd(0.5, 0), cd(0.0001, 0)});
  auto rep = is_clean(flat8);
  CHECK_FALSE(rep.clean);
  REQUIRE(rep.offending.size() == 1);
}

TEST_CASE("preimage separation bound") {
  auto u = arc_length_reparametrize(figure8(), 2048);
  double sep = min_preimage_separation(u);
  double kbar = max_abs_curvature(u);
  CHECK(sep * kbar >= kPi - 1e-3);
  CHECK_THROWS_AS(min_preimage_separation(figure8()), Error);
  auto circle = arc_length_reparametrize(ClosedCurve::from_fourier(1, {cd(3, 0)}), 256);
  CHECK(std::isinf(min_preimage_separation(circle)));

  auto a = analyze_curve(figure8());
  CHECK(a.rotation_index == 0);
  CHECK(a.is_clean);
  CHECK(a.min_preimage_separation == doctest::Approx(sep).epsilon(1e-6));
  CHECK(a.min_preimage_separation * a.kappa_bar_normalized >= kPi - 1e-3);
}

TEST_CASE("arc length at parameter") {
  auto c = ClosedCurve::from_fourier(1, {cd(3, 0)});
  CHECK(arc_length_at(c, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
}
