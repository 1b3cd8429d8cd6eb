#include <doctest.h>

#include "corpus.hpp"
#include "error.hpp"
#include "oracle.hpp"

#include <cmath>

using namespace xcut;
using cd = std::complex<double>;

namespace {

ClosedCurve figure8() {
  return ClosedCurve::from_fourier(-2, {cd(-0.5, 0), cd(0.5, 0), cd(0, 0), cd(0.5, 0), cd(0.5, 0)});
}
ClosedCurve rose3() { return ClosedCurve::from_fourier(1, {cd(0.5, 0), cd(0, 0), cd(1, 0)}); }

}  // namespace

TEST_CASE("brute-force double points") {
  CHECK(oracle::brute_double_points(ClosedCurve::from_fourier(1, {cd(1, 0)})).empty());
  auto f8 = oracle::brute_double_points(figure8());
  REQUIRE(f8.size() == 1);
  CHECK(f8[0].location.norm() < 1e-10);
  CHECK(f8[0].simple);
  CHECK_THROWS_AS(oracle::brute_double_points(ClosedCurve::from_fourier(2, {cd(1, 0)})), Error);
  CHECK_THROWS_AS(oracle::brute_double_points(figure8(), 512), Error);
}

TEST_CASE("fast detector agrees with the oracle on the odd rose") {
  auto fast = find_double_points(rose3());
  auto brute = oracle::brute_double_points(rose3());
  auto r = oracle::compare_double_points(fast, brute);
  CHECK(r.pass);
  CHECK(r.fast_value == r.oracle_value);
  // Frozen from the oracle: e^{3it} + 0.5 e^{it} crosses itself at 4 points (also checked with shapely).
  CHECK(brute.size() == 4);
}

TEST_CASE("tangent winding") {
  CHECK(oracle::tangent_winding_oracle(ClosedCurve::from_fourier(1, {cd(1, 0)})) == 1);
  CHECK(oracle::tangent_winding_oracle(figure8()) == 0);
  CHECK(oracle::tangent_winding_oracle(ClosedCurve::from_fourier(2, {cd(1, 0)})) == 2);
  CHECK(oracle::tangent_winding_oracle(rose3()) == 3);
  CHECK(oracle::cross_check_rotation_index(rose3()).pass);
  // At 410 turns per 1024 steps each step turns by 0.4 of a full turn.
  CHECK_THROWS_AS(oracle::tangent_winding_oracle(ClosedCurve::from_fourier(410, {cd(1, 0)}), 1024), Error);
}

TEST_CASE("Hausdorff residual of a reflection") {
  auto c = ClosedCurve::from_fourier(0, {cd(2, 3), cd(1, 0)});
  CHECK(oracle::hausdorff_residual(c, Vec2(2, 3)) < 1e-9);
  CHECK(oracle::hausdorff_residual(c, Vec2(0, 0)) == doctest::Approx(2 * std::sqrt(13.0)).epsilon(1e-6));
}

TEST_CASE("finite differences") {
  auto r = oracle::finite_difference_check(ClosedCurve::from_fourier(1, {cd(1, 0)}));
  CHECK(r.pass);
  CHECK(r.discrepancy < 1e-8);
  CHECK(oracle::finite_difference_check(rose3()).discrepancy < 1e-8);
  std::vector<Vec2> pts(1024);
  for (int k = 0; k < 1024; ++k) {
    double t = kTwoPi * k / 1024;
    pts[k] = Vec2(std::cos(t), std::sin(2 * t));
  }
  auto s = oracle::finite_difference_check(ClosedCurve::from_samples(pts));
  CHECK(s.discrepancy < 1e-4);
  auto coarse = oracle::finite_difference_check(rose3(), 1e-1);
  CHECK_FALSE(coarse.pass);
  CHECK(coarse.discrepancy > 1e-4);
}

TEST_CASE("brute double points: near-tangent close approaches are not crossings") {
  // Each tangency of this loop has neighbouring branches within chord
  // sagitta of each other over many samples.
  auto c = generate(parse_curve_spec("figure2_unclean"));
  auto brute = oracle::brute_double_points(c);
  CHECK(brute.size() == 3);
  CHECK(oracle::cross_check_double_points(c).pass);
}
