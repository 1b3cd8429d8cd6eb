#include "curve.hpp"

#include "error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xcut {

namespace {

Vec2 to_vec(std::complex<double> z) { return {z.real(), z.imag()}; }

// Immersion threshold relative to the mean speed L / 2pi.
constexpr double kImmersionTolerance = 1e-9;

}  // namespace

ClosedCurve::ClosedCurve(std::variant<Fourier, Samples> rep, std::string name)
    : rep_(std::move(rep)), name_(std::move(name)) {
  compute_cache();
}

ClosedCurve ClosedCurve::from_fourier(int min_frequency, std::vector<std::complex<double>> coefficients,
                                      std::string name) {
  if (coefficients.empty()) fail(ErrorCode::InvalidArgument, "Fourier curve needs at least one coefficient");
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      fail(ErrorCode::InvalidArgument, "non-finite Fourier coefficient");
  }
  return ClosedCurve(Fourier{min_frequency, std::move(coefficients)}, std::move(name));
}

ClosedCurve ClosedCurve::from_samples(std::vector<Vec2> samples, std::string name) {
  for (const auto& p : samples) {
    if (!p.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite curve sample");
  }
  return ClosedCurve(Samples{PeriodicSpline(std::move(samples))}, std::move(name));
}

int ClosedCurve::resolution() const {
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    int kmax = std::max(std::abs(f->min_frequency),
                        std::abs(f->min_frequency + static_cast<int>(f->coefficients.size()) - 1));
    return std::max(256, 32 * kmax);
  }
  return static_cast<int>(std::get<Samples>(rep_).spline.size());
}

int ClosedCurve::min_frequency() const {
  const auto* f = std::get_if<Fourier>(&rep_);
  if (!f) fail(ErrorCode::InvalidArgument, "curve is not a Fourier series");
  return f->min_frequency;
}

const std::vector<std::complex<double>>& ClosedCurve::coefficients() const {
  const auto* f = std::get_if<Fourier>(&rep_);
  if (!f) fail(ErrorCode::InvalidArgument, "curve is not a Fourier series");
  return f->coefficients;
}

const std::vector<Vec2>& ClosedCurve::samples() const {
  const auto* s = std::get_if<Samples>(&rep_);
  if (!s) fail(ErrorCode::InvalidArgument, "curve is not sample based");
  return s->spline.points();
}

CurvePoint ClosedCurve::evaluate(double t) const {
  CurvePoint out;
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    std::complex<double> z = std::polar(1.0, t);
    std::complex<double> e = std::polar(1.0, f->min_frequency * t);
    std::complex<double> p(0.0), v(0.0), a(0.0);
    int n = f->min_frequency;
    for (const auto& c : f->coefficients) {
      std::complex<double> term = c * e;
      p += term;
      v += std::complex<double>(0.0, n) * term;
      a += -static_cast<double>(n) * n * term;
      e *= z;
      ++n;
    }
    out.position = to_vec(p);
    out.velocity = to_vec(v);
    out.acceleration = to_vec(a);
  } else {
    std::get<Samples>(rep_).spline.evaluate(t, &out.position, &out.velocity, &out.acceleration);
  }
  return out;
}

Vec2 ClosedCurve::position(double t) const {
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    std::complex<double> z = std::polar(1.0, t);
    std::complex<double> e = std::polar(1.0, f->min_frequency * t);
    std::complex<double> p(0.0);
    for (const auto& c : f->coefficients) {
      p += c * e;
      e *= z;
    }
    return to_vec(p);
  }
  Vec2 p;
  std::get<Samples>(rep_).spline.evaluate(t, &p, nullptr, nullptr);
  return p;
}

Vec2 ClosedCurve::velocity(double t) const {
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    std::complex<double> z = std::polar(1.0, t);
    std::complex<double> e = std::polar(1.0, f->min_frequency * t);
    std::complex<double> v(0.0);
    int n = f->min_frequency;
    for (const auto& c : f->coefficients) {
      v += std::complex<double>(0.0, n) * c * e;
      e *= z;
      ++n;
    }
    return to_vec(v);
  }
  Vec2 d;
  std::get<Samples>(rep_).spline.evaluate(t, nullptr, &d, nullptr);
  return d;
}

void ClosedCurve::compute_cache() {
  const int res = resolution();
  auto q = integrate_periodic([this](double t) { return velocity(t).norm(); }, 2 * res, 1e-11, 1 << 21);
  length_ = q.value;

  const int m = 4 * res;
  const double h = kTwoPi / m;
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  bbox_min_ = Vec2::Constant(std::numeric_limits<double>::infinity());
  bbox_max_ = -bbox_min_;
  for (int k = 0; k < m; ++k) {
    CurvePoint cp = evaluate(k * h);
    bbox_min_ = bbox_min_.cwiseMin(cp.position);
    bbox_max_ = bbox_max_.cwiseMax(cp.position);
    double s = cp.velocity.norm();
    if (s < best) {
      best = s;
      best_k = k;
    }
  }
  auto [tmin, smin] =
      golden_minimize([this](double t) { return velocity(t).norm(); }, (best_k - 1) * h, (best_k + 1) * h, 1e-13);
  min_speed_ = std::min(best, smin);
}

ClosedCurve ClosedCurve::transformed(const Mat2& A, const Vec2& b) const {
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    // A z = p z + q conj(z) in complex notation.
    std::complex<double> p(0.5 * (A(0, 0) + A(1, 1)), 0.5 * (A(1, 0) - A(0, 1)));
    std::complex<double> q(0.5 * (A(0, 0) - A(1, 1)), 0.5 * (A(1, 0) + A(0, 1)));
    const int lo = f->min_frequency;
    const int hi = lo + static_cast<int>(f->coefficients.size()) - 1;
    auto coef = [&](int n) -> std::complex<double> {
      return (n < lo || n > hi) ? std::complex<double>(0.0) : f->coefficients[n - lo];
    };
    int nlo = lo, nhi = hi;
    bool conj_term = std::abs(q) > 0.0;
    if (conj_term) {
      nlo = std::min(lo, -hi);
      nhi = std::max(hi, -lo);
    }
    nlo = std::min(nlo, 0);
    nhi = std::max(nhi, 0);
    std::vector<std::complex<double>> out(nhi - nlo + 1);
    for (int n = nlo; n <= nhi; ++n) {
      std::complex<double> c = p * coef(n);
      if (conj_term) c += q * std::conj(coef(-n));
      out[n - nlo] = c;
    }
    out[-nlo] += std::complex<double>(b.x(), b.y());
    return from_fourier(nlo, std::move(out), name_);
  }
  std::vector<Vec2> pts = samples();
  for (auto& p : pts) p = A * p + b;
  return from_samples(std::move(pts), name_);
}

ClosedCurve ClosedCurve::reversed() const {
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    std::vector<std::complex<double>> c(f->coefficients.rbegin(), f->coefficients.rend());
    int hi = f->min_frequency + static_cast<int>(f->coefficients.size()) - 1;
    return from_fourier(-hi, std::move(c), name_);
  }
  const auto& pts = samples();
  const std::size_t n = pts.size();
  std::vector<Vec2> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = pts[(n - k) % n];
  return from_samples(std::move(out), name_);
}

ClosedCurve ClosedCurve::shifted(double phase) const {
  if (const auto* f = std::get_if<Fourier>(&rep_)) {
    std::vector<std::complex<double>> c = f->coefficients;
    int n = f->min_frequency;
    for (auto& x : c) x *= std::polar(1.0, n++ * phase);
    return from_fourier(f->min_frequency, std::move(c), name_);
  }
  const auto& pts = samples();
  const std::size_t n = pts.size();
  const double h = kTwoPi / static_cast<double>(n);
  double m = wrap_angle(phase) / h;
  std::vector<Vec2> out(n);
  if (std::fabs(m - std::round(m)) < 1e-12) {
    auto shift = static_cast<std::size_t>(std::llround(m)) % n;
    for (std::size_t k = 0; k < n; ++k) out[k] = pts[(k + shift) % n];
  } else {
    for (std::size_t k = 0; k < n; ++k) out[k] = position(k * h + phase);
  }
  return from_samples(std::move(out), name_);
}

void require_immersed(const ClosedCurve& curve) {
  double mean_speed = curve.length() / kTwoPi;
  if (!(curve.min_speed() > kImmersionTolerance * mean_speed) || !(mean_speed > 0.0)) {
    fail(ErrorCode::NonImmersed, "minimum speed " + std::to_string(curve.min_speed()) + " is not positive");
  }
}

double geodesic_curvature(const ClosedCurve& curve, double t) {
  CurvePoint p = curve.evaluate(t);
  double speed = p.velocity.norm();
  if (!(speed > kImmersionTolerance * curve.length() / kTwoPi))
    fail(ErrorCode::NonImmersed, "velocity vanishes at t = " + std::to_string(t));
  return cross2(p.velocity, p.acceleration) / (speed * speed * speed);
}

RotationIndex rotation_index(const ClosedCurve& curve) {
  require_immersed(curve);
  auto q = integrate_periodic(
      [&](double t) {
        CurvePoint p = curve.evaluate(t);
        return cross2(p.velocity, p.acceleration) / p.velocity.squaredNorm();
      },
      2 * curve.resolution(), 1e-10, 1 << 22);
  RotationIndex out;
  out.raw = q.value / kTwoPi;
  out.index = static_cast<int>(std::lround(out.raw));
  if (std::fabs(out.raw - out.index) >= 0.05) {
    fail(ErrorCode::IndexUnresolved, "turning integral " + std::to_string(out.raw) + " is not near an integer");
  }
  return out;
}

Vec2 centroid(const ClosedCurve& curve) {
  require_immersed(curve);
  auto q = integrate_periodic(
      [&](double t) -> Vec2 {
        CurvePoint p = curve.evaluate(t);
        return p.position * p.velocity.norm();
      },
      2 * curve.resolution(), 1e-12, 1 << 21);
  return q.value / curve.length();
}

double max_abs_curvature(const ClosedCurve& curve) {
  require_immersed(curve);
  const int m = 8 * curve.resolution();
  const double h = kTwoPi / m;
  auto kabs = [&](double t) { return std::fabs(geodesic_curvature(curve, t)); };
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < m; ++k) {
    double v = kabs(k * h);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  auto [t, negk] = golden_minimize([&](double s) { return -kabs(s); }, (best_k - 1) * h, (best_k + 1) * h, 1e-13);
  return std::max(best, -negk);
}

ClosedCurve arc_length_resample(const ClosedCurve& curve, int n) {
  if (n < 4) fail(ErrorCode::InvalidArgument, "arc-length resampling needs at least 4 samples");
  require_immersed(curve);
  const int cells = std::max(8 * n, 4 * curve.resolution());
  const double h = kTwoPi / cells;
  auto speed = [&](double t) { return curve.velocity(t).norm(); };

  std::vector<double> cum(cells + 1, 0.0);
  std::vector<double> cell_speed(cells + 1);
  for (int k = 0; k < cells; ++k) {
    cum[k + 1] = cum[k] + gauss_legendre5(speed, k * h, (k + 1) * h);
    cell_speed[k] = speed(k * h);
  }
  cell_speed[cells] = cell_speed[0];
  const double total = cum[cells];

  std::vector<Vec2> pts(n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    const double target = total * j / n;
    while (k + 1 < cells && cum[k + 1] <= target) ++k;
    // Cubic Hermite guess for t(s) on the cell (slopes 1/speed), then Newton.
    const double s0 = cum[k];
    const double ds = cum[k + 1] - s0;
    const double x = ds > 0 ? (target - s0) / ds : 0.0;
    const double m0 = ds / (cell_speed[k] * h);
    const double m1 = ds / (cell_speed[k + 1] * h);
    const double x2 = x * x, x3 = x2 * x;
    double frac = (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) + (x3 - x2) * m1;
    frac = std::clamp(frac, 0.0, 1.0);
    double t = (k + frac) * h;
    for (int it = 0; it < 4; ++it) {
      double s = s0 + gauss_legendre5(speed, k * h, t);
      double step = (s - target) / speed(t);
      t -= step;
      if (std::fabs(step) < 1e-15) break;
    }
    pts[j] = curve.position(t);
  }
  return ClosedCurve::from_samples(std::move(pts), curve.name());
}

ClosedCurve arc_length_reparametrize(const ClosedCurve& curve, int n) {
  if (n < 64) fail(ErrorCode::InvalidArgument, "arc-length reparametrization needs N >= 64");
  ClosedCurve resampled = arc_length_resample(curve, n);
  double scale = kTwoPi / curve.length();
  return resampled.transformed(scale * Mat2::Identity(), Vec2::Zero());
}

bool is_unit_speed(const ClosedCurve& curve, double tol) {
  if (std::fabs(curve.length() - kTwoPi) > tol * kTwoPi) return false;
  const int m = 2 * curve.resolution();
  for (int k = 0; k < m; ++k) {
    double s = curve.velocity((k + 0.5) * kTwoPi / m).norm();
    if (std::fabs(s - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace xcut
