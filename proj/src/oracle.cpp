#include "oracle.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xcut::oracle {

namespace {

double point_segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double len2 = d.squaredNorm();
  double s = len2 > 0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (a + s * d - x).norm();
}

bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
  };
  double o1 = orient(a0, a1, b0), o2 = orient(a0, a1, b1);
  double o3 = orient(b0, b1, a0), o4 = orient(b0, b1, a1);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

double chord_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  if (segments_cross(a0, a1, b0, b1)) return 0.0;
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

struct Hit {
  Vec2 location;
  double t1, t2;
};

// Halve both intervals and keep the closest of the four chord pairs.
Hit bisect(const ClosedCurve& curve, double a1, double b1, double a2, double b2) {
  Vec2 pa1 = curve.position(a1), pb1 = curve.position(b1);
  Vec2 pa2 = curve.position(a2), pb2 = curve.position(b2);
  while (b1 - a1 > 1e-14 || b2 - a2 > 1e-14) {
    double m1 = 0.5 * (a1 + b1), m2 = 0.5 * (a2 + b2);
    Vec2 pm1 = curve.position(m1), pm2 = curve.position(m2);
    const double lo1[2] = {a1, m1}, hi1[2] = {m1, b1};
    const double lo2[2] = {a2, m2}, hi2[2] = {m2, b2};
    const Vec2 plo1[2] = {pa1, pm1}, phi1[2] = {pm1, pb1};
    const Vec2 plo2[2] = {pa2, pm2}, phi2[2] = {pm2, pb2};
    double best = std::numeric_limits<double>::infinity();
    int bi = 0, bj = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double d = chord_distance(plo1[i], phi1[i], plo2[j], phi2[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    a1 = lo1[bi];
    b1 = hi1[bi];
    pa1 = plo1[bi];
    pb1 = phi1[bi];
    a2 = lo2[bj];
    b2 = hi2[bj];
    pa2 = plo2[bj];
    pb2 = phi2[bj];
    if (m1 == a1 && m1 == b1) break;
  }
  double t1 = 0.5 * (a1 + b1), t2 = 0.5 * (a2 + b2);
  Vec2 p1 = curve.position(t1), p2 = curve.position(t2);
  return {0.5 * (p1 + p2), t1, t2};
}

double wrap(double t) {
  double r = std::fmod(t, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

double param_distance(double a, double b) {
  double d = std::fabs(wrap(a - b));
  return std::min(d, kTwoPi - d);
}

}  // namespace

std::vector<DoublePoint> brute_double_points(const ClosedCurve& curve, int n, double angle_tolerance) {
  if (n < 1024) fail(ErrorCode::InvalidArgument, "oracle needs at least 1024 samples");
  const double h = kTwoPi / n;
  std::vector<Vec2> p(n);
  for (int k = 0; k < n; ++k) p[k] = curve.position(k * h);
  Vec2 lo = p[0], hi = p[0];
  double max_len = 0.0;
  for (int k = 0; k < n; ++k) {
    lo = lo.cwiseMin(p[k]);
    hi = hi.cwiseMax(p[k]);
    max_len = std::max(max_len, (p[(k + 1) % n] - p[k]).norm());
  }
  const double diameter = (hi - lo).norm();
  const double merge = 1e-6 * diameter;
  // Bisection drives a true crossing to rounding level; a near-tangent close
  // approach stalls at the branches' true gap.
  const double meet = 1e-10 * diameter;
  const double near = 0.5 * max_len;

  // Exterior angles of the polygon; turn[k] accumulates them up to vertex k.
  std::vector<double> turn(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    Vec2 d0 = p[k] - p[(k + n - 1) % n];
    Vec2 d1 = p[(k + 1) % n] - p[k];
    turn[k + 1] = turn[k] + std::fabs(std::atan2(d0.x() * d1.y() - d0.y() * d1.x(), d0.dot(d1)));
  }
  const double total = turn[n];

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      // Tangent turning strictly between the two segments, both ways round.
      double forward = turn[j] - turn[i + 1];
      double backward = total - (turn[j + 1] - turn[i]);
      if (std::min(forward, backward) < kPi / 2) continue;
      if (chord_distance(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]) < near) pairs.emplace_back(i, j);
    }
  }
  std::vector<Hit> hits;
  for (auto [i, j] : pairs) {
    Hit hit = bisect(curve, (i - 1) * h, (i + 2) * h, (j - 1) * h, (j + 2) * h);
    if ((curve.position(hit.t1) - curve.position(hit.t2)).norm() < meet) {
      hit.t1 = wrap(hit.t1);
      hit.t2 = wrap(hit.t2);
      hits.push_back(hit);
    }
  }

  std::vector<DoublePoint> out;
  std::vector<std::vector<double>> clusters;
  std::vector<char> used(hits.size(), 0);
  for (std::size_t a = 0; a < hits.size(); ++a) {
    if (used[a]) continue;
    std::vector<double> ts;
    for (std::size_t b = a; b < hits.size(); ++b) {
      if (used[b] || (hits[b].location - hits[a].location).norm() >= merge) continue;
      used[b] = 1;
      for (double t : {hits[b].t1, hits[b].t2})
        if (std::none_of(ts.begin(), ts.end(), [&](double s) { return param_distance(s, t) < 1e-6; }))
          ts.push_back(t);
    }
    if (ts.size() < 2) continue;
    clusters.push_back(ts);
  }
  // Isolated double points give a handful of clusters; a retraced arc gives
  // one per sample along it.
  if (clusters.size() > static_cast<std::size_t>(n / 32)) {
    fail(ErrorCode::ContinuumIntersection,
         std::to_string(clusters.size()) + " distinct coincidences on " + std::to_string(n) + " samples");
  }
  for (auto& ts : clusters) {
    std::sort(ts.begin(), ts.end());
    DoublePoint dp;
    dp.preimages = ts;
    const std::size_t k = ts.size();
    std::vector<Vec2> tan(k);
    for (std::size_t i = 0; i < k; ++i) {
      dp.location += curve.position(ts[i]) / static_cast<double>(k);
      Vec2 v = curve.velocity(ts[i]);
      tan[i] = v / v.norm();
    }
    dp.tangent_angles.assign(k, std::vector<double>(k, 0.0));
    dp.clean = true;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        double ang = std::acos(std::clamp(tan[i].dot(tan[j]), -1.0, 1.0));
        dp.tangent_angles[i][j] = dp.tangent_angles[j][i] = ang;
        if (std::min(ang, kPi - ang) < angle_tolerance) dp.clean = false;
      }
    dp.simple = k == 2;
    out.push_back(dp);
  }
  std::sort(out.begin(), out.end(),
            [](const DoublePoint& a, const DoublePoint& b) { return a.preimages.front() < b.preimages.front(); });
  return out;
}

int tangent_winding_oracle(const ClosedCurve& curve, int n) {
  if (n < 1024) fail(ErrorCode::InvalidArgument, "oracle needs at least 1024 samples");
  double total = 0.0;
  Vec2 v0 = curve.velocity(0.0);
  double prev = std::atan2(v0.y(), v0.x());
  for (int k = 1; k <= n; ++k) {
    Vec2 v = curve.velocity(kTwoPi * k / n);
    double ang = std::atan2(v.y(), v.x());
    double step = ang - prev;
    while (step > kPi) step -= kTwoPi;
    while (step <= -kPi) step += kTwoPi;
    if (std::fabs(step) > kPi / 2) {
      fail(ErrorCode::StepTooCoarse, "tangent turns by " + std::to_string(step) + " in one step");
    }
    total += step;
    prev = ang;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

namespace {

// max over `from` of the distance to the closed polygon `to`.
double one_sided(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  const std::size_t m = to.size();
  double worst = 0.0;
  for (const Vec2& x : from) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) best = std::min(best, point_segment_distance(x, to[j], to[(j + 1) % m]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_residual(const ClosedCurve& curve, const Vec2& c, int n) {
  if (n < 1024) fail(ErrorCode::InvalidArgument, "oracle needs at least 1024 samples");
  std::vector<Vec2> p(n), q(n);
  for (int k = 0; k < n; ++k) {
    p[k] = curve.position(kTwoPi * k / n);
    q[k] = 2.0 * c - p[k];
  }
  return std::max(one_sided(p, q), one_sided(q, p));
}

double image_distance(const ClosedCurve& a, const ClosedCurve& b, int n) {
  if (n < 1024) fail(ErrorCode::InvalidArgument, "oracle needs at least 1024 samples");
  std::vector<Vec2> p(n), q(n);
  for (int k = 0; k < n; ++k) {
    p[k] = a.position(kTwoPi * k / n);
    q[k] = b.position(kTwoPi * k / n);
  }
  return std::max(one_sided(p, q), one_sided(q, p));
}

OracleReport finite_difference_check(const ClosedCurve& curve, double step, double tolerance) {
  OracleReport r;
  r.subject = "finite_difference";
  r.tolerance = tolerance;
  constexpr int kPoints = 256;
  double err1 = 0.0, err2 = 0.0, norm1 = 0.0, norm2 = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    double t = kTwoPi * (k + 0.37) / kPoints;
    CurvePoint cp = curve.evaluate(t);
    auto stencil = [&](auto f) {
      return (f(t - 2 * step) - 8.0 * f(t - step) + 8.0 * f(t + step) - f(t + 2 * step)) / (12.0 * step);
    };
    Vec2 d1 = stencil([&](double s) { return Vec2(curve.position(s)); });
    Vec2 d2 = stencil([&](double s) { return Vec2(curve.velocity(s)); });
    err1 = std::max(err1, (d1 - cp.velocity).norm());
    err2 = std::max(err2, (d2 - cp.acceleration).norm());
    norm1 = std::max(norm1, cp.velocity.norm());
    norm2 = std::max(norm2, cp.acceleration.norm());
  }
  double rel1 = err1 / std::max(norm1, 1e-300);
  double rel2 = err2 / std::max(norm2, 1e-300);
  r.fast_value = norm1;
  r.oracle_value = norm2;
  r.discrepancy = std::max(rel1, rel2);
  r.pass = r.discrepancy < tolerance;
  return r;
}

OracleReport compare_double_points(const std::vector<DoublePoint>& fast, const std::vector<DoublePoint>& brute,
                                   double tolerance) {
  OracleReport r;
  r.subject = "double_points";
  r.fast_value = static_cast<double>(fast.size());
  r.oracle_value = static_cast<double>(brute.size());
  r.tolerance = tolerance;
  if (fast.size() != brute.size()) {
    r.discrepancy = std::numeric_limits<double>::infinity();
    return r;
  }
  double worst = 0.0;
  for (const auto& a : fast) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : brute) best = std::min(best, (a.location - b.location).norm());
    worst = std::max(worst, best);
  }
  r.discrepancy = worst;
  r.pass = worst < tolerance;
  return r;
}

OracleReport cross_check_double_points(const ClosedCurve& curve, int n) {
  auto run = [&](int samples) {
    bool fast_continuum = false, brute_continuum = false;
    std::vector<DoublePoint> fast, brute;
    try {
      fast = find_double_points(curve);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ContinuumIntersection) throw;
      fast_continuum = true;
    }
    try {
      brute = brute_double_points(curve, samples);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ContinuumIntersection) throw;
      brute_continuum = true;
    }
    if (fast_continuum || brute_continuum) {
      OracleReport r;
      r.subject = "double_points";
      r.fast_value = fast_continuum ? -1.0 : static_cast<double>(fast.size());
      r.oracle_value = brute_continuum ? -1.0 : static_cast<double>(brute.size());
      r.pass = fast_continuum && brute_continuum;
      r.discrepancy = r.pass ? 0.0 : std::numeric_limits<double>::infinity();
      r.tolerance = 1e-6;
      return r;
    }
    return compare_double_points(fast, brute);
  };
  OracleReport r = run(n);
  if (!r.pass) r = run(2 * n);
  return r;
}

OracleReport cross_check_rotation_index(const ClosedCurve& curve, int n) {
  OracleReport r;
  r.subject = "rotation_index";
  r.fast_value = rotation_index(curve).index;
  try {
    r.oracle_value = tangent_winding_oracle(curve, n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::StepTooCoarse) throw;
    r.oracle_value = tangent_winding_oracle(curve, 2 * n);
  }
  r.discrepancy = std::fabs(r.fast_value - r.oracle_value);
  r.tolerance = 0.5;
  r.pass = r.discrepancy == 0.0;
  return r;
}

}  // namespace xcut::oracle
