#include "spline.hpp"

#include "error.hpp"

#include <cmath>

namespace xcut {

namespace {

// Thomas algorithm for the constant tridiagonal stencil (1, diag, 1) with a
// modified first and last diagonal entry.
std::vector<Vec2> solve_tridiagonal(double first, double diag, double last, const std::vector<Vec2>& r) {
  const std::size_t n = r.size();
  std::vector<double> c(n);
  std::vector<Vec2> x(n);
  double b = first;
  c[0] = 1.0 / b;
  x[0] = r[0] / b;
  for (std::size_t i = 1; i < n; ++i) {
    double bi = (i + 1 == n) ? last : diag;
    double m = bi - c[i - 1];
    c[i] = 1.0 / m;
    x[i] = (r[i] - x[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace

std::vector<Vec2> solve_cyclic_141(const std::vector<Vec2>& rhs) {
  const std::size_t n = rhs.size();
  // Sherman-Morrison: the corner entries are both 1.
  const double gamma = -4.0;
  const double first = 4.0 - gamma;
  const double last = 4.0 - 1.0 / gamma;
  std::vector<Vec2> x = solve_tridiagonal(first, 4.0, last, rhs);
  std::vector<Vec2> u(n, Vec2::Zero());
  u[0] = Vec2(gamma, gamma);
  u[n - 1] = Vec2(1.0, 1.0);
  std::vector<Vec2> z = solve_tridiagonal(first, 4.0, last, u);
  // z is identical in both components; use the first.
  double denom = 1.0 + z[0].x() + z[n - 1].x() / gamma;
  Vec2 fact = (x[0] + x[n - 1] / gamma) / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= z[i].x() * fact;
  return x;
}

PeriodicSpline::PeriodicSpline(std::vector<Vec2> points) : points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n < 4) fail(ErrorCode::InvalidArgument, "periodic spline needs at least 4 samples");
  h_ = kTwoPi / static_cast<double>(n);
  std::vector<Vec2> rhs(n);
  const double s = 6.0 / (h_ * h_);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& prev = points_[(k + n - 1) % n];
    const Vec2& next = points_[(k + 1) % n];
    rhs[k] = s * (next - 2.0 * points_[k] + prev);
  }
  moments_ = solve_cyclic_141(rhs);
}

void PeriodicSpline::evaluate(double t, Vec2* p, Vec2* d1, Vec2* d2) const {
  const std::size_t n = points_.size();
  double u = wrap_angle(t) / h_;
  auto k = static_cast<std::size_t>(u);
  if (k >= n) k = n - 1;
  double tau = (u - static_cast<double>(k)) * h_;
  std::size_t k1 = (k + 1) % n;
  const Vec2& y0 = points_[k];
  const Vec2& y1 = points_[k1];
  const Vec2& m0 = moments_[k];
  const Vec2& m1 = moments_[k1];
  double a = h_ - tau;
  if (p) {
    *p = m0 * (a * a * a / (6 * h_)) + m1 * (tau * tau * tau / (6 * h_)) + (y0 / h_ - m0 * (h_ / 6)) * a +
         (y1 / h_ - m1 * (h_ / 6)) * tau;
  }
  if (d1) {
    *d1 = -m0 * (a * a / (2 * h_)) + m1 * (tau * tau / (2 * h_)) + (y1 - y0) / h_ - (m1 - m0) * (h_ / 6);
  }
  if (d2) *d2 = m0 * (a / h_) + m1 * (tau / h_);
}

}  // namespace xcut
