#include "slice.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace xcut {

Vec3 CrossCut::centroid3() const { return plane.from_plane(centroid(loop)); }

Vec3 CrossCut::normal_at(double t) const {
  const int n = static_cast<int>(normals.size());
  double x = wrap_angle(t) / kTwoPi * n;
  int k = std::min(static_cast<int>(x), n - 1);
  double f = x - k;
  Vec3 v = (1 - f) * normals[k] + f * normals[(k + 1) % n];
  return v.normalized();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// An oriented piece of the zero set inside one triangle, between two edge keys.
struct Segment {
  long long from;
  long long to;
};

struct Chain {
  std::vector<long long> keys;
  bool closed = false;
};

std::vector<Chain> chain_segments(const std::vector<Segment>& segs) {
  std::unordered_map<long long, std::vector<int>> at;
  at.reserve(segs.size() * 2);
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    at[segs[s].from].push_back(s);
    at[segs[s].to].push_back(s);
  }
  for (const auto& [key, list] : at)
    if (list.size() > 2) fail(ErrorCode::DegenerateInput, "non-manifold edge in the sliced region");

  std::vector<char> used(segs.size(), 0);
  auto next = [&](long long key, int current) -> int {
    for (int s : at[key])
      if (s != current && !used[s]) return s;
    return -1;
  };
  auto far_end = [&](int s, long long key) { return segs[s].from == key ? segs[s].to : segs[s].from; };

  std::vector<Chain> out;
  for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
    if (used[s0]) continue;
    used[s0] = 1;
    Chain c;
    c.keys = {segs[s0].from, segs[s0].to};
    int cur = s0;
    long long key = segs[s0].to;
    while (true) {
      int s = next(key, cur);
      if (s < 0) break;
      used[s] = 1;
      key = far_end(s, key);
      cur = s;
      if (key == segs[s0].from) {
        c.closed = true;
        break;
      }
      c.keys.push_back(key);
    }
    if (!c.closed) {
      std::vector<long long> back;
      cur = s0;
      key = segs[s0].from;
      while (true) {
        int s = next(key, cur);
        if (s < 0) break;
        used[s] = 1;
        key = far_end(s, key);
        cur = s;
        back.push_back(key);
      }
      std::reverse(back.begin(), back.end());
      back.insert(back.end(), c.keys.begin(), c.keys.end());
      c.keys = std::move(back);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Appends the oriented zero-set segment of a triangle with CCW vertices
// (ids, heights); the positive side ends up on the left.
template <class KeyFn>
void triangle_segment(const int (&id)[3], const double (&h)[3], KeyFn key, std::vector<Segment>& segs) {
  long long from = -1, to = -1;
  for (int k = 0; k < 3; ++k) {
    bool a = h[k] >= 0, b = h[(k + 1) % 3] >= 0;
    if (a && !b) from = key(id[k], id[(k + 1) % 3]);
    if (!a && b) to = key(id[k], id[(k + 1) % 3]);
  }
  if (from >= 0 && to >= 0) segs.push_back({from, to});
}

double margin_of(const Vec3& normal, const Vec3& u) { return normal.cross(u).norm(); }

CrossCut make_cut(const Plane3& plane, std::vector<Vec3> pts, std::vector<Vec3> normals, double margin,
                  const std::string& name, int chart, const SliceConfig& cfg) {
  std::vector<Vec2> q(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) q[k] = plane.to_plane(pts[k]);
  ClosedCurve loop = ClosedCurve::from_samples(std::move(q), name);
  CleanReport clean = is_clean(loop, cfg.double_points);
  double gap = (loop.position(kTwoPi) - loop.position(0.0)).norm() / loop.length();
  return CrossCut{plane, std::move(loop), margin, clean.clean, true, std::nullopt, std::move(pts), std::move(normals),
                  gap, chart};
}

// Uniform chord-length stations along a closed polyline: (segment index, fraction).
std::vector<std::pair<int, double>> chord_stations(const std::vector<Vec3>& x, int n, double& total) {
  const int m = static_cast<int>(x.size());
  std::vector<double> cum(m + 1, 0.0);
  for (int k = 0; k < m; ++k) cum[k + 1] = cum[k] + (x[(k + 1) % m] - x[k]).norm();
  total = cum[m];
  std::vector<std::pair<int, double>> out(n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    double s = total * j / n;
    while (k + 1 < m && cum[k + 1] <= s) ++k;
    double len = cum[k + 1] - cum[k];
    out[j] = {k, len > 0 ? (s - cum[k]) / len : 0.0};
  }
  return out;
}

class ChartSlicer {
 public:
  ChartSlicer(const Chart& chart, int index, const Plane3& plane, const SliceConfig& cfg, const Surface& surface,
              double scale)
      : c_(chart), index_(index), plane_(plane), cfg_(cfg), surface_(surface) {
    cu_ = std::max(2, static_cast<int>(std::lround(c_.cells_u * scale)));
    cv_ = std::max(1, static_cast<int>(std::lround(c_.cells_v * scale)));
    pu_ = c_.periodic_u ? cu_ : cu_ + 1;
    pv_ = c_.periodic_v ? cv_ : cv_ + 1;
    du_ = (c_.u1 - c_.u0) / cu_;
    dv_ = (c_.v1 - c_.v0) / cv_;
  }

  /// False when a closed component is too small for the grid; `out` is then untouched.
  bool run(SliceResult& out) {
    std::vector<Vec3> x0(static_cast<std::size_t>(pu_) * pv_);
    std::vector<double> h(x0.size());
    for (int j = 0; j < pv_; ++j)
      for (int i = 0; i < pu_; ++i) {
        x0[id(i, j)] = c_.eval(u_at(i), v_at(j)).position;
        h[id(i, j)] = plane_.height(x0[id(i, j)]);
      }
    // A chart edge collapsed to one point (a pole) gets one height, so that
    // rounding cannot create crossings along it.
    const double eps = 1e-12 * std::max(1.0, surface_.diagonal());
    auto unify = [&](bool along_u, int fixed) {
      const int count = along_u ? pu_ : pv_;
      auto at = [&](int k) { return along_u ? id(k, fixed) : id(fixed, k); };
      for (int k = 1; k < count; ++k)
        if ((x0[at(k)] - x0[at(0)]).norm() > eps) return;
      for (int k = 1; k < count; ++k) h[at(k)] = h[at(0)];
    };
    if (!c_.periodic_v) {
      unify(true, 0);
      unify(true, pv_ - 1);
    }
    if (!c_.periodic_u) {
      unify(false, 0);
      unify(false, pu_ - 1);
    }

    const long long nv = static_cast<long long>(pu_) * pv_;
    auto key = [nv](int a, int b) { return static_cast<long long>(std::min(a, b)) * nv + std::max(a, b); };
    std::vector<Segment> segs;
    for (int j = 0; j < cv_; ++j)
      for (int i = 0; i < cu_; ++i) {
        const int a = id(i, j), b = id(i + 1, j), cc = id(i + 1, j + 1), d = id(i, j + 1);
        const int t1[3] = {a, b, cc}, t2[3] = {a, cc, d};
        const double h1[3] = {h[a], h[b], h[cc]}, h2[3] = {h[a], h[cc], h[d]};
        triangle_segment(t1, h1, key, segs);
        triangle_segment(t2, h2, key, segs);
        // Parameter positions of the crossings, keyed like the segments.
        record(i, j, i + 1, j, h, key);
        record(i + 1, j, i + 1, j + 1, h, key);
        record(i, j, i + 1, j + 1, h, key);
        record(i, j, i, j + 1, h, key);
        record(i, j + 1, i + 1, j + 1, h, key);
      }

    check_tangencies(h);

    const double noise = cfg_.noise_fraction * surface_.diagonal();
    auto chains = chain_segments(segs);
    for (const Chain& chain : chains) {
      if (chain.closed && chain.keys.size() < kMinChainVertices) {
        double length = 0.0;
        for (std::size_t k = 0; k < chain.keys.size(); ++k) {
          Vec2 a = crossing_.at(chain.keys[k]), b = crossing_.at(chain.keys[(k + 1) % chain.keys.size()]);
          length += (c_.eval(a.x(), a.y()).position - c_.eval(b.x(), b.y()).position).norm();
        }
        if (length >= noise) return false;
      }
    }
    SliceResult local;
    local.min_margin = out.min_margin;
    for (const Chain& chain : chains) {
      // Unwrap periodic parameters along the chain, then project onto the zero set.
      std::vector<Vec2> par;
      par.reserve(chain.keys.size());
      for (long long k : chain.keys) {
        Vec2 p = crossing_.at(k);
        if (!par.empty()) p = unwrap(p, par.back());
        par.push_back(p);
      }
      std::vector<Vec3> x(par.size());
      double margin = kInf;
      for (std::size_t k = 0; k < par.size(); ++k) {
        ChartPoint cp = project(par[k]);
        x[k] = cp.position;
        margin = std::min(margin, margin_of(cp.normal(), plane_.normal()));
      }
      local.min_margin = std::min(local.min_margin, margin);
      if (margin < cfg_.transversality_tolerance) {
        fail(ErrorCode::NonTransverseContact,
             "surface normal within " + std::to_string(margin) + " of the plane normal on " + surface_.name());
      }
      double length = 0.0;
      for (std::size_t k = 0; k + 1 < x.size(); ++k) length += (x[k + 1] - x[k]).norm();
      if (chain.closed) length += (x.front() - x.back()).norm();
      if (length < noise) continue;
      if (!chain.closed) {
        local.open.push_back({std::move(x), length});
        continue;
      }
      // Close the parameter loop so that interpolation across the last edge stays local.
      par.push_back(unwrap(par.front(), par.back()));
      double total = 0.0;
      auto st = chord_stations(x, cfg_.samples, total);
      std::vector<Vec3> pts(st.size()), normals(st.size());
      double cut_margin = kInf;
      for (std::size_t j = 0; j < st.size(); ++j) {
        auto [k, f] = st[j];
        const int k1 = (k + 1) % static_cast<int>(x.size());
        Vec2 guess = (1 - f) * par[k] + f * par[k + 1];
        Vec3 target = (1 - f) * x[k] + f * x[k1];
        ChartPoint cp = project_station(guess, target, (x[k1] - x[k]).normalized());
        pts[j] = cp.position;
        normals[j] = cp.normal();
        cut_margin = std::min(cut_margin, margin_of(normals[j], plane_.normal()));
      }
      if (cut_margin < cfg_.transversality_tolerance) {
        fail(ErrorCode::NonTransverseContact,
             "surface normal within " + std::to_string(cut_margin) + " of the plane normal on " + surface_.name());
      }
      local.min_margin = std::min(local.min_margin, cut_margin);
      local.compact.push_back(make_cut(plane_, std::move(pts), std::move(normals), cut_margin, surface_.name() + "@cut",
                                     index_, cfg_));
    }
    out.min_margin = local.min_margin;
    for (auto& c : local.compact) out.compact.push_back(std::move(c));
    for (auto& o : local.open) out.open.push_back(std::move(o));
    return true;
  }

 private:
  static constexpr std::size_t kMinChainVertices = 16;

  // Local extrema of the height on the grid are refined by compass search; an
  // extremum at height ~0 is a tangency the marching cannot see.
  void check_tangencies(const std::vector<double>& h) const {
    const double tol = cfg_.transversality_tolerance;
    const double flat = tol * tol * std::max(1.0, surface_.diagonal());
    for (int j = 0; j < pv_; ++j)
      for (int i = 0; i < pu_; ++i) {
        if (!c_.periodic_u && (i == 0 || i == pu_ - 1)) continue;
        if (!c_.periodic_v && (j == 0 || j == pv_ - 1)) continue;
        const double h0 = h[id(i, j)];
        bool mx = true, mn = true;
        double spread = 0.0;
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di) {
            double o = h[id(i + di, j + dj)];
            mx = mx && o <= h0;
            mn = mn && o >= h0;
            spread = std::max(spread, std::fabs(o - h0));
          }
        if (!(mx || mn) || std::fabs(h0) > 2 * spread + flat) continue;
        const double sign = mx ? 1.0 : -1.0;
        Vec2 p(u_at(i), v_at(j));
        double best = sign * h0;
        double step = 1.0;
        while (step > 1e-9) {
          bool moved = false;
          for (auto [a, b] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
            Vec2 q(p.x() + a * step * du_, p.y() + b * step * dv_);
            if (!c_.periodic_u && (q.x() < c_.u0 || q.x() > c_.u1)) continue;
            if (!c_.periodic_v && (q.y() < c_.v0 || q.y() > c_.v1)) continue;
            double val = sign * plane_.height(c_.eval(q.x(), q.y()).position);
            if (val > best) {
              best = val;
              p = q;
              moved = true;
            }
          }
          if (!moved) step *= 0.5;
        }
        if (std::fabs(best) <= flat) {
          fail(ErrorCode::NonTransverseContact, "plane is tangent to " + surface_.name() + " (height extremum " +
                                                    std::to_string(sign * best) + ")");
        }
      }
  }
  int id(int i, int j) const {
    if (c_.periodic_u) i = ((i % cu_) + cu_) % cu_;
    if (c_.periodic_v) j = ((j % cv_) + cv_) % cv_;
    return j * pu_ + i;
  }
  double u_at(int i) const { return c_.u0 + du_ * i; }
  double v_at(int j) const { return c_.v0 + dv_ * j; }

  template <class KeyFn>
  void record(int i0, int j0, int i1, int j1, const std::vector<double>& h, KeyFn key) {
    const int a = id(i0, j0), b = id(i1, j1);
    if ((h[a] >= 0) == (h[b] >= 0)) return;
    long long k = key(a, b);
    if (crossing_.count(k)) return;
    double f = h[a] / (h[a] - h[b]);
    crossing_[k] = Vec2(u_at(i0) + f * (u_at(i1) - u_at(i0)), v_at(j0) + f * (v_at(j1) - v_at(j0)));
  }

  Vec2 unwrap(Vec2 p, const Vec2& ref) const {
    if (c_.periodic_u) {
      double period = c_.u1 - c_.u0;
      p.x() += period * std::round((ref.x() - p.x()) / period);
    }
    if (c_.periodic_v) {
      double period = c_.v1 - c_.v0;
      p.y() += period * std::round((ref.y() - p.y()) / period);
    }
    return p;
  }

  // Newton on {height = 0, T.(F - X) = 0}: the intersection point across the
  // chord through X with direction T. Keeps stations evenly spaced where the
  // chart is singular. Finishes with the plain projection.
  ChartPoint project_station(Vec2 p, const Vec3& X, const Vec3& T) const {
    const Vec3& n = plane_.normal();
    for (int it = 0; it < 40; ++it) {
      ChartPoint cp = c_.eval(p.x(), p.y());
      Vec2 r(plane_.height(cp.position), T.dot(cp.position - X));
      Mat2 J;
      J << n.dot(cp.du), n.dot(cp.dv), T.dot(cp.du), T.dot(cp.dv);
      double det = J.determinant();
      if (!(std::fabs(det) > 1e-14 * (cp.du.squaredNorm() + cp.dv.squaredNorm()))) break;
      Vec2 step = -J.inverse() * r;
      double ratio = std::max(std::fabs(step.x()) / du_, std::fabs(step.y()) / dv_);
      if (ratio > 1) step /= ratio;
      p += step;
      if (!c_.periodic_u) p.x() = std::clamp(p.x(), c_.u0, c_.u1);
      if (!c_.periodic_v) p.y() = std::clamp(p.y(), c_.v0, c_.v1);
      if (step.norm() < 1e-15 * (std::fabs(p.x()) + std::fabs(p.y()) + 1)) break;
    }
    return project(p);
  }

  // Gauss-Newton on the height in parameter space, steps capped at one grid cell.
  ChartPoint project(Vec2 p) const {
    ChartPoint cp = c_.eval(p.x(), p.y());
    const double scale = std::max(1.0, surface_.diagonal());
    for (int it = 0; it < 40; ++it) {
      double g = plane_.height(cp.position);
      if (std::fabs(g) <= 1e-15 * scale) break;
      double gu = plane_.normal().dot(cp.du), gv = plane_.normal().dot(cp.dv);
      double den = gu * gu + gv * gv;
      if (!(den > 0)) break;
      Vec2 step(-g * gu / den, -g * gv / den);
      double ratio = std::max(std::fabs(step.x()) / du_, std::fabs(step.y()) / dv_);
      if (ratio > 1) step /= ratio;
      p += step;
      if (!c_.periodic_u) p.x() = std::clamp(p.x(), c_.u0, c_.u1);
      if (!c_.periodic_v) p.y() = std::clamp(p.y(), c_.v0, c_.v1);
      cp = c_.eval(p.x(), p.y());
      if (step.norm() < 1e-16 * (std::fabs(p.x()) + std::fabs(p.y()) + 1)) break;
    }
    if (cp.normal().isZero(0.0)) {
      // Degenerate chart point (a pole): nudge inward to get a normal.
      double e = 1e-7 * dv_;
      Vec2 q(p.x(), p.y() + (p.y() - c_.v0 < c_.v1 - p.y() ? e : -e));
      ChartPoint alt = c_.eval(q.x(), q.y());
      cp.du = alt.du;
      cp.dv = alt.dv;
    }
    return cp;
  }

  const Chart& c_;
  int index_;
  const Plane3& plane_;
  const SliceConfig& cfg_;
  const Surface& surface_;
  int cu_, cv_, pu_, pv_;
  double du_, dv_;
  std::unordered_map<long long, Vec2> crossing_;
};

void slice_mesh(const Surface& surface, const Plane3& plane, const SliceConfig& cfg, SliceResult& out) {
  const TriangleMesh& m = surface.triangles();
  const int n = static_cast<int>(m.vertices.size());
  std::vector<double> h(n);
  for (int k = 0; k < n; ++k) h[k] = plane.height(m.vertices[k]);
  const long long nv = n;
  auto key = [nv](int a, int b) { return static_cast<long long>(std::min(a, b)) * nv + std::max(a, b); };
  std::vector<Segment> segs;
  std::unordered_map<long long, std::pair<Vec3, Vec3>> crossing;
  for (const auto& f : m.faces) {
    const int id[3] = {f[0], f[1], f[2]};
    const double hh[3] = {h[f[0]], h[f[1]], h[f[2]]};
    triangle_segment(id, hh, key, segs);
    for (int k = 0; k < 3; ++k) {
      int a = id[k], b = id[(k + 1) % 3];
      if ((h[a] >= 0) == (h[b] >= 0)) continue;
      long long kk = key(a, b);
      if (crossing.count(kk)) continue;
      if (a > b) std::swap(a, b);
      double t = h[a] / (h[a] - h[b]);
      Vec3 x = (1 - t) * m.vertices[a] + t * m.vertices[b];
      Vec3 nn = ((1 - t) * m.normals[a] + t * m.normals[b]).normalized();
      crossing[kk] = {x, nn};
    }
  }
  const double noise = cfg.noise_fraction * surface.diagonal();
  for (const Chain& chain : chain_segments(segs)) {
    std::vector<Vec3> x, nrm;
    double margin = kInf;
    for (long long k : chain.keys) {
      const auto& [p, nn] = crossing.at(k);
      x.push_back(p);
      nrm.push_back(nn);
      margin = std::min(margin, margin_of(nn, plane.normal()));
    }
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < cfg.transversality_tolerance) {
      fail(ErrorCode::NonTransverseContact,
           "mesh normal within " + std::to_string(margin) + " of the plane normal on " + surface.name());
    }
    double length = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) length += (x[k + 1] - x[k]).norm();
    if (chain.closed) length += (x.front() - x.back()).norm();
    if (length < noise) continue;
    if (!chain.closed) {
      out.open.push_back({std::move(x), length});
      continue;
    }
    if (static_cast<int>(x.size()) < cfg.min_mesh_segments) continue;
    double total = 0.0;
    auto st = chord_stations(x, cfg.samples, total);
    const int mcount = static_cast<int>(x.size());
    std::vector<Vec3> pts(st.size()), normals(st.size());
    for (std::size_t j = 0; j < st.size(); ++j) {
      auto [k, f] = st[j];
      int k1 = (k + 1) % mcount;
      pts[j] = (1 - f) * x[k] + f * x[k1];
      normals[j] = ((1 - f) * nrm[k] + f * nrm[k1]).normalized();
    }
    out.compact.push_back(
        make_cut(plane, std::move(pts), std::move(normals), margin, surface.name() + "@cut", -1, cfg));
  }
}

}  // namespace

SliceResult slice(const Surface& surface, const Plane3& plane, const SliceConfig& cfg) {
  if (cfg.samples < 64) fail(ErrorCode::InvalidArgument, "slice needs at least 64 samples per cut");
  SliceResult out;
  out.min_margin = kInf;
  if (surface.kind() == Surface::Kind::Mesh) {
    slice_mesh(surface, plane, cfg, out);
  } else {
    for (int c = 0; c < static_cast<int>(surface.charts().size()); ++c) {
      // Refine the grid while a closed component is too small to resolve.
      double scale = cfg.grid_scale;
      for (int attempt = 0;; ++attempt, scale *= 2) {
        ChartSlicer slicer(surface.charts()[c], c, plane, cfg, surface, scale);
        if (slicer.run(out) || attempt == 4) break;
      }
    }
  }
  return out;
}

GeneralPosition general_position_check(const CrossCut& cut, const SliceConfig& cfg) {
  GeneralPosition out;
  out.min_wedge = kInf;
  std::vector<DoublePoint> pts;
  try {
    pts = find_double_points(cut.loop, cfg.double_points);
  } catch (const Error& e) {
    out.message = e.what();
    out.min_wedge = 0.0;
    return out;
  }
  for (const auto& dp : pts) {
    if (!dp.simple) {
      out.message = "multiple point of order " + std::to_string(dp.preimages.size());
      out.min_wedge = 0.0;
      return out;
    }
    Vec3 n1 = cut.normal_at(dp.preimages[0]);
    Vec3 n2 = cut.normal_at(dp.preimages[1]);
    double w = std::fabs(n1.cross(n2).dot(cut.plane.normal()));
    out.min_wedge = std::min(out.min_wedge, w);
  }
  out.ok = out.min_wedge >= cfg.double_points.angle_tolerance;
  if (!out.ok) out.message = "surface normals at a double point are dependent with the plane normal";
  return out;
}

}  // namespace xcut
