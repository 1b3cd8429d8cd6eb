#include "double_points.hpp"

#include "error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace xcut {

namespace {

struct Polyline {
  int m = 0;
  double h = 0.0;
  std::vector<Vec2> p;
  std::vector<double> turn_cum;  // turn_cum[k]: turning of the tangent from vertex 0 to vertex k
  double max_len = 0.0;
};

Polyline build_polyline(const ClosedCurve& curve, const DoublePointConfig& cfg) {
  int m = std::max(cfg.min_samples, 64);
  for (;;) {
    Polyline pl;
    pl.m = m;
    pl.h = kTwoPi / m;
    pl.p.resize(m);
    std::vector<Vec2> v(m);
    for (int k = 0; k < m; ++k) {
      CurvePoint cp = curve.evaluate(k * pl.h);
      pl.p[k] = cp.position;
      v[k] = cp.velocity;
    }
    pl.turn_cum.assign(m + 1, 0.0);
    double worst = 0.0;
    for (int k = 0; k < m; ++k) {
      double turn = angle_between(v[k], v[(k + 1) % m]);
      worst = std::max(worst, turn);
      pl.turn_cum[k + 1] = pl.turn_cum[k] + turn;
      pl.max_len = std::max(pl.max_len, (pl.p[(k + 1) % m] - pl.p[k]).norm());
    }
    if (worst <= cfg.max_turn || m >= (1 << 20)) return pl;
    m *= 2;
  }
}

struct SegmentDistance {
  double distance;
  double s;  // parameter on the first segment, in [0, 1]
  double u;  // parameter on the second segment
};

double project_to_segment(const Vec2& x, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double len2 = d.squaredNorm();
  if (len2 == 0.0) return 0.0;
  return std::clamp((x - a).dot(d) / len2, 0.0, 1.0);
}

SegmentDistance segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  Vec2 da = a1 - a0, db = b1 - b0, w = b0 - a0;
  double den = cross2(da, db);
  if (den != 0.0) {
    double s = cross2(w, db) / den;
    double u = cross2(w, da) / den;
    if (s >= 0 && s <= 1 && u >= 0 && u <= 1) return {0.0, s, u};
  }
  SegmentDistance best{std::numeric_limits<double>::infinity(), 0, 0};
  auto consider = [&](double s, double u) {
    double d = ((a0 + s * da) - (b0 + u * db)).norm();
    if (d < best.distance) best = {d, s, u};
  };
  consider(0.0, project_to_segment(a0, b0, b1));
  consider(1.0, project_to_segment(a1, b0, b1));
  consider(project_to_segment(b0, a0, a1), 0.0);
  consider(project_to_segment(b1, a0, a1), 1.0);
  return best;
}

struct Candidate {
  int i, j;
  SegmentDistance d;
};

// Proximity pairs of non-local segments; a pair is local when the tangent
// turns by less than pi/2 along either arc joining the two segments (every
// loop closing up through a double point turns by at least pi).
std::vector<Candidate> proximity_pairs(const Polyline& pl, double delta) {
  const int m = pl.m;
  const double cell = std::max(pl.max_len, delta);
  auto key = [](std::int64_t x, std::int64_t y) { return (x << 32) ^ (y & 0xffffffff); };
  std::unordered_map<std::int64_t, std::vector<int>> grid;
  grid.reserve(2 * m);
  auto cell_range = [&](int k, std::int64_t& x0, std::int64_t& x1, std::int64_t& y0, std::int64_t& y1) {
    const Vec2& a = pl.p[k];
    const Vec2& b = pl.p[(k + 1) % m];
    x0 = static_cast<std::int64_t>(std::floor((std::min(a.x(), b.x()) - delta) / cell));
    x1 = static_cast<std::int64_t>(std::floor((std::max(a.x(), b.x()) + delta) / cell));
    y0 = static_cast<std::int64_t>(std::floor((std::min(a.y(), b.y()) - delta) / cell));
    y1 = static_cast<std::int64_t>(std::floor((std::max(a.y(), b.y()) + delta) / cell));
  };
  for (int k = 0; k < m; ++k) {
    const Vec2& a = pl.p[k];
    const Vec2& b = pl.p[(k + 1) % m];
    auto x0 = static_cast<std::int64_t>(std::floor(std::min(a.x(), b.x()) / cell));
    auto x1 = static_cast<std::int64_t>(std::floor(std::max(a.x(), b.x()) / cell));
    auto y0 = static_cast<std::int64_t>(std::floor(std::min(a.y(), b.y()) / cell));
    auto y1 = static_cast<std::int64_t>(std::floor(std::max(a.y(), b.y()) / cell));
    for (auto x = x0; x <= x1; ++x)
      for (auto y = y0; y <= y1; ++y) grid[key(x, y)].push_back(k);
  }

  const double total_turn = pl.turn_cum[m];
  std::vector<int> stamp(m, -1);
  std::vector<Candidate> out;
  for (int i = 0; i < m; ++i) {
    std::int64_t x0, x1, y0, y1;
    cell_range(i, x0, x1, y0, y1);
    for (auto x = x0; x <= x1; ++x) {
      for (auto y = y0; y <= y1; ++y) {
        auto it = grid.find(key(x, y));
        if (it == grid.end()) continue;
        for (int j : it->second) {
          if (j <= i || stamp[j] == i) continue;
          stamp[j] = i;
          double forward = j > i + 1 ? pl.turn_cum[j] - pl.turn_cum[i + 1] : 0.0;
          double backward = total_turn - (pl.turn_cum[j + 1] - pl.turn_cum[i]);
          if (std::min(forward, backward) < kPi / 2) continue;
          SegmentDistance d = segment_distance(pl.p[i], pl.p[(i + 1) % m], pl.p[j], pl.p[(j + 1) % m]);
          if (d.distance < delta) out.push_back({i, j, d});
        }
      }
    }
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct RawIntersection {
  Vec2 location;
  double t1, t2;
};

// Newton on a(t1) - a(t2) = 0 from a transversal seed.
std::optional<RawIntersection> newton_crossing(const ClosedCurve& curve, double t1, double t2, double h,
                                               double accept) {
  const double t1_0 = t1, t2_0 = t2;
  for (int it = 0; it < 40; ++it) {
    CurvePoint a = curve.evaluate(t1);
    CurvePoint b = curve.evaluate(t2);
    Vec2 F = a.position - b.position;
    double det = -cross2(a.velocity, b.velocity);
    double scale = a.velocity.norm() * b.velocity.norm();
    if (std::fabs(det) < 1e-6 * scale) return std::nullopt;
    // [v1, -v2] (dt1, dt2)^T = -F
    double dt1 = (-F.x() * -b.velocity.y() - -F.y() * -b.velocity.x()) / det;
    double dt2 = (a.velocity.x() * -F.y() - a.velocity.y() * -F.x()) / det;
    double step = std::max(std::fabs(dt1), std::fabs(dt2));
    if (step > 2 * h) {
      dt1 *= 2 * h / step;
      dt2 *= 2 * h / step;
    }
    t1 += dt1;
    t2 += dt2;
    if (circle_distance(t1, t1_0) > 16 * h || circle_distance(t2, t2_0) > 16 * h) return std::nullopt;
    if (step < 1e-15) break;
  }
  Vec2 p1 = curve.position(t1), p2 = curve.position(t2);
  if ((p1 - p2).norm() >= accept) return std::nullopt;
  return RawIntersection{0.5 * (p1 + p2), wrap_angle(t1), wrap_angle(t2)};
}

// Closest point of the branch near t2 to x: Newton on (a(t) - x).a'(t) = 0.
double project_to_branch(const ClosedCurve& curve, const Vec2& x, double t2, double h) {
  for (int it = 0; it < 30; ++it) {
    CurvePoint b = curve.evaluate(t2);
    Vec2 d = b.position - x;
    double g = d.dot(b.velocity);
    double dg = b.velocity.squaredNorm() + d.dot(b.acceleration);
    if (dg <= 0.0) break;
    double step = std::clamp(g / dg, -2 * h, 2 * h);
    t2 -= step;
    if (std::fabs(step) < 1e-15) break;
  }
  return t2;
}

// Tangential contact: minimize the distance between the two branches.
std::optional<RawIntersection> tangential_contact(const ClosedCurve& curve, double t1_lo, double t1_hi,
                                                  double t2_seed, double h, double accept) {
  double t2 = t2_seed;
  auto dist = [&](double t1) {
    Vec2 x = curve.position(t1);
    t2 = project_to_branch(curve, x, t2, h);
    return (curve.position(t2) - x).norm();
  };
  auto [t1, d] = golden_minimize(dist, t1_lo, t1_hi, 1e-14);
  dist(t1);
  Vec2 p1 = curve.position(t1), p2 = curve.position(t2);
  if ((p1 - p2).norm() >= accept) return std::nullopt;
  return RawIntersection{0.5 * (p1 + p2), wrap_angle(t1), wrap_angle(t2)};
}

struct Scan {
  bool continuum = false;
  bool same_direction = false;
  double continuum_fraction = 0.0;
  std::vector<DoublePoint> points;
};

std::vector<DoublePoint> merge(const ClosedCurve& curve, const std::vector<RawIntersection>& raw, double radius,
                               double angle_tolerance) {
  UnionFind uf(raw.size());
  for (std::size_t a = 0; a < raw.size(); ++a)
    for (std::size_t b = a + 1; b < raw.size(); ++b)
      if ((raw[a].location - raw[b].location).norm() < radius) uf.unite(a, b);

  std::unordered_map<int, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < raw.size(); ++a) groups[uf.find(a)].push_back(a);

  std::vector<DoublePoint> out;
  for (auto& [root, members] : groups) {
    std::vector<double> ts;
    for (auto a : members) {
      ts.push_back(raw[a].t1);
      ts.push_back(raw[a].t2);
    }
    std::sort(ts.begin(), ts.end());
    DoublePoint dp;
    for (double t : ts) {
      bool dup = std::any_of(dp.preimages.begin(), dp.preimages.end(),
                             [&](double s) { return circle_distance(s, t) < 1e-6; });
      if (!dup) dp.preimages.push_back(t);
    }
    if (dp.preimages.size() < 2) continue;
    const std::size_t k = dp.preimages.size();
    std::vector<Vec2> tangents(k);
    dp.location = Vec2::Zero();
    for (std::size_t i = 0; i < k; ++i) {
      CurvePoint cp = curve.evaluate(dp.preimages[i]);
      dp.location += cp.position / static_cast<double>(k);
      tangents[i] = cp.velocity.normalized();
    }
    dp.tangent_angles.assign(k, std::vector<double>(k, 0.0));
    dp.clean = true;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        double a = angle_between(tangents[i], tangents[j]);
        dp.tangent_angles[i][j] = dp.tangent_angles[j][i] = a;
        if (std::min(a, kPi - a) < angle_tolerance) dp.clean = false;
      }
    }
    dp.simple = k == 2;
    out.push_back(std::move(dp));
  }
  std::sort(out.begin(), out.end(),
            [](const DoublePoint& a, const DoublePoint& b) { return a.preimages.front() < b.preimages.front(); });
  return out;
}

Scan scan_curve(const ClosedCurve& curve, const DoublePointConfig& cfg) {
  require_immersed(curve);
  Polyline pl = build_polyline(curve, cfg);
  const int m = pl.m;
  const double delta = 0.5 * pl.max_len;
  const double accept = cfg.merge_radius * curve.diameter();
  std::vector<Candidate> cands = proximity_pairs(pl, delta);

  std::unordered_map<std::int64_t, int> index;
  index.reserve(cands.size() * 2);
  auto pair_key = [m](int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::int64_t>(i) * m + j;
  };
  for (std::size_t c = 0; c < cands.size(); ++c) index[pair_key(cands[c].i, cands[c].j)] = static_cast<int>(c);
  UnionFind uf(cands.size());
  for (std::size_t c = 0; c < cands.size(); ++c) {
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        int i = (cands[c].i + di + m) % m;
        int j = (cands[c].j + dj + m) % m;
        auto it = index.find(pair_key(i, j));
        if (it != index.end()) uf.unite(static_cast<int>(c), it->second);
      }
    }
  }
  std::unordered_map<int, std::vector<int>> comps;
  for (std::size_t c = 0; c < cands.size(); ++c) comps[uf.find(static_cast<int>(c))].push_back(static_cast<int>(c));

  Scan scan;
  std::vector<RawIntersection> raw;
  for (auto& [root, members] : comps) {
    std::vector<char> seen_i(m, 0), seen_j(m, 0);
    int extent_i = 0, extent_j = 0;
    double alignment = 0.0;
    for (int c : members) {
      const Candidate& cd = cands[c];
      if (!seen_i[cd.i]++) ++extent_i;
      if (!seen_j[cd.j]++) ++extent_j;
      Vec2 a = pl.p[(cd.i + 1) % m] - pl.p[cd.i];
      Vec2 b = pl.p[(cd.j + 1) % m] - pl.p[cd.j];
      alignment += a.dot(b);
    }
    double fraction = static_cast<double>(std::max(extent_i, extent_j)) / m;
    if (fraction > cfg.chain_threshold) {
      if (!scan.continuum || fraction > scan.continuum_fraction) {
        scan.continuum_fraction = fraction;
        scan.same_direction = alignment > 0;
      }
      scan.continuum = true;
      continue;
    }

    // Seeds: every polyline crossing plus the closest pair.
    int closest = members.front();
    for (int c : members)
      if (cands[c].d.distance < cands[closest].d.distance) closest = c;
    std::vector<int> seeds;
    for (int c : members)
      if (cands[c].d.distance == 0.0) seeds.push_back(c);
    if (std::find(seeds.begin(), seeds.end(), closest) == seeds.end()) seeds.push_back(closest);

    bool found = false;
    for (int c : seeds) {
      const Candidate& cd = cands[c];
      double t1 = (cd.i + cd.d.s) * pl.h;
      double t2 = (cd.j + cd.d.u) * pl.h;
      if (auto r = newton_crossing(curve, t1, t2, pl.h, accept)) {
        raw.push_back(*r);
        found = true;
      }
    }
    if (!found) {
      const Candidate& cd = cands[closest];
      double t1 = (cd.i + cd.d.s) * pl.h;
      double half = (extent_i + 2) * pl.h;
      double t2 = (cd.j + cd.d.u) * pl.h;
      if (auto r = tangential_contact(curve, t1 - half, t1 + half, t2, pl.h, accept)) raw.push_back(*r);
    }
  }
  if (!scan.continuum) scan.points = merge(curve, raw, accept, cfg.angle_tolerance);
  return scan;
}

}  // namespace

std::vector<DoublePoint> find_double_points(const ClosedCurve& curve, const DoublePointConfig& config) {
  Scan scan = scan_curve(curve, config);
  if (scan.continuum) {
    fail(ErrorCode::ContinuumIntersection, "candidate intersections chain over " +
                                               std::to_string(100.0 * scan.continuum_fraction) +
                                               "% of the parameter circle");
  }
  return std::move(scan.points);
}

CleanReport is_clean(const ClosedCurve& curve, const DoublePointConfig& config) {
  CleanReport report;
  Scan scan = scan_curve(curve, config);
  if (scan.continuum) {
    report.continuum = true;
    report.message = "curve retraces an arc";
    return report;
  }
  for (auto& dp : scan.points)
    if (!dp.clean) report.offending.push_back(dp);
  report.clean = report.offending.empty();
  if (!report.clean) report.message = std::to_string(report.offending.size()) + " tangential double point(s)";
  return report;
}

double min_preimage_separation(const ClosedCurve& curve, const DoublePointConfig& config) {
  if (!is_unit_speed(curve, 1e-3)) fail(ErrorCode::NotNormalized, "curve is not unit speed with length 2pi");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& dp : find_double_points(curve, config))
    for (std::size_t i = 0; i < dp.preimages.size(); ++i)
      for (std::size_t j = i + 1; j < dp.preimages.size(); ++j)
        best = std::min(best, circle_distance(dp.preimages[i], dp.preimages[j]));
  return best;
}

bool lift_is_embedded(const ClosedCurve& curve, const DoublePointConfig& config) {
  Scan scan = scan_curve(curve, config);
  if (scan.continuum) return !scan.same_direction;
  for (const auto& dp : scan.points)
    for (std::size_t i = 0; i < dp.preimages.size(); ++i)
      for (std::size_t j = i + 1; j < dp.preimages.size(); ++j)
        if (dp.tangent_angles[i][j] < config.angle_tolerance) return false;
  return true;
}

double arc_length_at(const ClosedCurve& curve, double t) {
  t = wrap_angle(t);
  const int cells = 2 * curve.resolution();
  const double h = kTwoPi / cells;
  auto speed = [&](double x) { return curve.velocity(x).norm(); };
  double s = 0.0;
  int k = 0;
  for (; (k + 1) * h <= t; ++k) s += gauss_legendre5(speed, k * h, (k + 1) * h);
  if (t > k * h) s += gauss_legendre5(speed, k * h, t);
  return s;
}

CurveAnalysis analyze_curve(const ClosedCurve& curve, const DoublePointConfig& config) {
  CurveAnalysis out;
  out.length = curve.length();
  out.kappa_bar = max_abs_curvature(curve);
  out.kappa_bar_normalized = out.kappa_bar * curve.length() / kTwoPi;
  RotationIndex ri = rotation_index(curve);
  out.rotation_index = ri.index;
  out.raw_index_integral = ri.raw;
  out.centroid = centroid(curve);
  Scan scan = scan_curve(curve, config);
  if (scan.continuum) {
    out.continuum = true;
    out.is_clean = false;
    out.min_preimage_separation = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.double_points = std::move(scan.points);
  out.is_clean = std::all_of(out.double_points.begin(), out.double_points.end(),
                             [](const DoublePoint& dp) { return dp.clean; });
  const double scale = kTwoPi / curve.length();
  for (const auto& dp : out.double_points) {
    std::vector<double> s;
    for (double t : dp.preimages) s.push_back(arc_length_at(curve, t) * scale);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        out.min_preimage_separation = std::min(out.min_preimage_separation, circle_distance(s[i], s[j]));
  }
  return out;
}

}  // namespace xcut
