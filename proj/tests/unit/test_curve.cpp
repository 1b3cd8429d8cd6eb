#include <doctest.h>

#include "curve.hpp"
#include "error.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace xcut;
using cd = std::complex<double>;

namespace {

ClosedCurve unit_circle() { return ClosedCurve::from_fourier(1, {cd(1, 0)}); }

// (a cos t, b sin 2t) written as a Fourier series.
ClosedCurve figure8(double a = 1.0, double b = 1.0) {
  // a cos t = a/2 (e^{it} + e^{-it});  i b sin 2t = b/2 (e^{2it} - e^{-2it})
  return ClosedCurve::from_fourier(-2, {cd(-b / 2, 0), cd(a / 2, 0), cd(0, 0), cd(a / 2, 0), cd(b / 2, 0)});
}

std::vector<Vec2> sampled(const std::function<Vec2(double)>& f, int n) {
  std::vector<Vec2> pts(n);
  for (int k = 0; k < n; ++k) pts[k] = f(kTwoPi * k / n);
  return pts;
}

}  // namespace

TEST_CASE("evaluate: circle and figure-8 derivatives") {
  auto c = unit_circle().evaluate(0.0);
  CHECK((c.position - Vec2(1, 0)).norm() < 1e-15);
  CHECK((c.velocity - Vec2(0, 1)).norm() < 1e-15);
  CHECK((c.acceleration - Vec2(-1, 0)).norm() < 1e-15);

  auto f = figure8().evaluate(kPi / 2);
  CHECK(f.position.norm() < 1e-15);
  CHECK((f.velocity - Vec2(-1, -2)).norm() < 1e-14);
  CHECK(f.acceleration.norm() < 1e-14);

  auto g = figure8();
  for (double t : {0.3, 1.7, 4.4}) {
    auto p = g.evaluate(t);
    auto q = g.evaluate(t + kTwoPi);
    CHECK((p.position - q.position).norm() < 1e-13);
    CHECK((p.acceleration - q.acceleration).norm() < 1e-12);
    CHECK((p.position - Vec2(std::cos(t), std::sin(2 * t))).norm() < 1e-15);
  }
}

TEST_CASE("spline interpolant reproduces a smooth curve") {
  auto pts = sampled([](double t) { return Vec2(std::cos(t), std::sin(2 * t)); }, 512);
  auto s = ClosedCurve::from_samples(pts);
  CHECK(s.kind() == CurveKind::Samples);
  for (double t : {0.1, 2.0, 5.9}) {
    auto p = s.evaluate(t);
    CHECK((p.position - Vec2(std::cos(t), std::sin(2 * t))).norm() < 1e-8);
    CHECK((p.velocity - Vec2(-std::sin(t), 2 * std::cos(2 * t))).norm() < 1e-5);
  }
}

TEST_CASE("cached length, speed and bounding box") {
  CHECK(unit_circle().length() == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(unit_circle().min_speed() == doctest::Approx(1.0).epsilon(1e-12));
  auto r3 = ClosedCurve::from_fourier(0, {cd(2, 3), cd(3, 0)});
  CHECK(r3.length() == doctest::Approx(6 * kPi).epsilon(1e-12));
  CHECK((r3.bbox_min() - Vec2(-1, 0)).norm() < 1e-3);
  CHECK((r3.bbox_max() - Vec2(5, 6)).norm() < 1e-3);
  // Ellipse perimeter of (2 cos t, sin t): 4 * 2 * E(e^2 = 3/4) = 9.688448220547675.
  auto ell = ClosedCurve::from_fourier(-1, {cd(0.5, 0), cd(0, 0), cd(1.5, 0)});
  CHECK(ell.length() == doctest::Approx(9.688448220547675).epsilon(1e-11));
}

TEST_CASE("geodesic curvature") {
  CHECK(geodesic_curvature(unit_circle(), 0.7) == doctest::Approx(1.0));
  auto r = ClosedCurve::from_fourier(1, {cd(2.5, 0)});
  CHECK(geodesic_curvature(r, 1.1) == doctest::Approx(0.4));
  CHECK(geodesic_curvature(figure8(), 0.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("geodesic curvature equivariance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-3, 3);
  auto f = figure8(1.3, 0.7);
  for (int trial = 0; trial < 20; ++trial) {
    double th = U(rng);
    Mat2 R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Vec2 b(U(rng), U(rng));
    double t = U(rng);
    auto g = f.transformed(R, b);
    CHECK(std::fabs(geodesic_curvature(g, t) - geodesic_curvature(f, t)) < 1e-9);
    CHECK(std::fabs(geodesic_curvature(f.reversed(), -t) + geodesic_curvature(f, t)) < 1e-9);
    double lam = 0.5 + std::fabs(U(rng));
    auto h = f.transformed(lam * Mat2::Identity(), Vec2::Zero());
    CHECK(std::fabs(geodesic_curvature(h, t) - geodesic_curvature(f, t) / lam) < 1e-9);
  }
}

TEST_CASE("transformed handles orientation-reversing maps") {
  Mat2 M;
  M << 1, 0, 0, -1;
  auto f = figure8(1.3, 0.7);
  auto g = f.transformed(M, Vec2(1, 2));
  for (double t : {0.2, 3.1}) CHECK((g.position(t) - (M * f.position(t) + Vec2(1, 2))).norm() < 1e-14);
  auto h = f.reflected(Vec2(0.5, -1));
  CHECK((h.position(0.4) - (Vec2(1, -2) - f.position(0.4))).norm() < 1e-14);
}

TEST_CASE("reversal and shift") {
  auto f = figure8(1.3, 0.7);
  CHECK((f.reversed().position(0.9) - f.position(-0.9)).norm() < 1e-14);
  CHECK((f.shifted(0.4).position(0.9) - f.position(1.3)).norm() < 1e-14);
  auto s = ClosedCurve::from_samples(sampled([](double t) { return Vec2(std::cos(t), std::sin(2 * t)); }, 256));
  CHECK((s.reversed().position(1.0) - s.position(-1.0)).norm() < 1e-13);
  double h = kTwoPi / 256;
  CHECK((s.shifted(5 * h).position(1.0) - s.position(1.0 + 5 * h)).norm() < 1e-13);
}

TEST_CASE("rotation index") {
  CHECK(rotation_index(unit_circle()).index == 1);
  CHECK(rotation_index(ClosedCurve::from_fourier(2, {cd(1, 0)})).index == 2);
  auto r8 = rotation_index(figure8());
  CHECK(r8.index == 0);
  CHECK(std::fabs(r8.raw) < 1e-6);
  auto rose = ClosedCurve::from_fourier(1, {cd(0.5, 0), cd(0, 0), cd(1, 0)});
  auto rr = rotation_index(rose);
  CHECK(rr.index == 3);
  CHECK(std::fabs(rr.raw - 3) < 1e-6);
  CHECK(rotation_index(unit_circle().reversed()).index == -1);
}

TEST_CASE("non-immersed curves are rejected") {
  // (cos t, 0) has a cusp at t = 0.
  auto flat = ClosedCurve::from_fourier(-1, {cd(0.5, 0), cd(0, 0), cd(0.5, 0)});
  CHECK_THROWS_AS(rotation_index(flat), Error);
  CHECK_THROWS_AS(arc_length_reparametrize(flat, 128), Error);
  CHECK_THROWS_AS(geodesic_curvature(flat, 0.0), Error);
}

TEST_CASE("centroid") {
  auto c = ClosedCurve::from_fourier(0, {cd(2, 3), cd(1, 0)});
  CHECK((centroid(c) - Vec2(2, 3)).norm() < 1e-12);
  CHECK(centroid(figure8()).norm() < 1e-12);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-3, 3);
  auto f = ClosedCurve::from_fourier(-2, {cd(0.3, 0.1), cd(0.2, -0.4), cd(0.5, 0.5), cd(1, 0), cd(0.1, 0.2)});
  Vec2 m = centroid(f);
  for (int trial = 0; trial < 10; ++trial) {
    double th = U(rng);
    Mat2 R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Vec2 b(U(rng), U(rng));
    CHECK((centroid(f.transformed(R, b)) - (R * m + b)).norm() < 1e-9);
  }
}

TEST_CASE("arc-length reparametrization") {
  auto circle3 = ClosedCurve::from_fourier(1, {cd(3, 0)});
  auto u = arc_length_reparametrize(circle3, 256);
  CHECK(u.length() == doctest::Approx(kTwoPi).epsilon(1e-8));
  CHECK(u.position(0.3).norm() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(is_unit_speed(u));

  auto ell = ClosedCurve::from_fourier(-1, {cd(0.5, 0), cd(0, 0), cd(1.5, 0)});
  auto e = arc_length_reparametrize(ell, 1024);
  CHECK(is_unit_speed(e, 1e-4));
  double scale = kTwoPi / ell.length();
  // Same image up to the homothety: every resampled point lies on the scaled ellipse.
  for (double t : {0.0, 1.0, 2.5, 4.0}) {
    Vec2 p = e.position(t) / scale;
    CHECK(std::fabs(p.x() * p.x() / 4 + p.y() * p.y() - 1) < 1e-6);
  }
  CHECK_THROWS_AS(arc_length_reparametrize(ell, 32), Error);
}

TEST_CASE("max curvature") {
  auto ell = ClosedCurve::from_fourier(-1, {cd(0.5, 0), cd(0, 0), cd(1.5, 0)});
  // (2 cos t, sin t): kappa max = a / b^2 = 2.
  CHECK(max_abs_curvature(ell) == doctest::Approx(2.0).epsilon(1e-10));
}
