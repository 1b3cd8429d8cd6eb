#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace xcut {

inline double magnitude(double x) { return std::fabs(x); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.norm();
}

template <class T>
struct Quadrature {
  T value;
  int intervals = 0;
  bool converged = false;
};

/// Composite Simpson over one period of a 2pi-periodic integrand. The step is
/// halved until the result moves by less than tol * max(1, |result|), reusing
/// the previous trapezoid sums. `n0` must be even; when the integrand is only
/// piecewise smooth (splines) pass a multiple of twice the knot count so that
/// every Simpson panel stays inside one polynomial piece.
template <class F>
auto integrate_periodic(F&& f, int n0, double tol = 1e-8, int max_intervals = 1 << 22) {
  using T = std::decay_t<decltype(f(0.0))>;
  int n = std::max(2, n0 - n0 % 2);
  double h = kTwoPi / n;
  T sum = f(0.0);
  for (int k = 1; k < n; ++k) sum += f(k * h);
  T trap = sum * h;
  // Simpson on n points = (4 T_n - T_{n/2}) / 3; T_{n/2} uses the even nodes.
  T even = f(0.0);
  for (int k = 2; k < n; k += 2) even += f(k * h);
  T simpson = (4.0 * trap - even * (2.0 * h)) / 3.0;
  Quadrature<T> out{simpson, n, false};
  while (2 * n <= max_intervals) {
    double h2 = h / 2;
    T odd = f(h2);
    for (int k = 1; k < n; ++k) odd += f(h2 + k * h);
    T trap2 = 0.5 * trap + odd * h2;
    T next = (4.0 * trap2 - trap) / 3.0;
    double change = magnitude(T(next - simpson));
    n *= 2;
    h = h2;
    trap = trap2;
    simpson = next;
    out = {simpson, n, false};
    if (change < tol * std::max(1.0, magnitude(simpson))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Five-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss_legendre5(F&& f, double a, double b) {
  static constexpr double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                  -0.9061798459386640};
  static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += w[i] * f(mid + half * x[i]);
  return s * half;
}

/// Golden-section minimization of a unimodal function on [a, b].
template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b, double xtol = 1e-12, int max_iter = 200) {
  constexpr double r = 0.6180339887498949;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && std::fabs(b - a) > xtol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace xcut
