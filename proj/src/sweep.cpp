#include "sweep.hpp"

#include "error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace xcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

SweepStation make_station(double h, CrossCut cut, const SweepConfig& cfg) {
  SymmetryReport rep = detect_center(cut.loop, CenterMode::Centroid, cfg.symmetry);
  SweepStation st{h, std::move(cut)};
  st.center_found = rep.center_found;
  st.fallback = !rep.center_found;
  Vec2 c = rep.center_found ? rep.center : rep.centroid;
  st.cut.center = c;
  st.center = st.cut.ambient(c);
  st.rotation_index = rotation_index(st.cut.loop).index;
  st.symmetry_residual = rep.residual;
  return st;
}

// The compact cut nearest `near` (by centroid), if within `radius`.
std::optional<std::size_t> nearest_cut(const std::vector<CrossCut>& cuts, const Vec3& near, double radius) {
  std::optional<std::size_t> best;
  double best_d = kInf;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    double d = (cuts[k].centroid3() - near).norm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best && best_d <= radius) return best;
  return std::nullopt;
}

}  // namespace

std::vector<Vec3> TubularSweep::central_curve() const {
  std::vector<Vec3> out;
  out.reserve(stations.size());
  for (const auto& s : stations) out.push_back(s.center);
  return out;
}

Vec3 TubularSweep::center_at(double h) const {
  if (stations.empty()) fail(ErrorCode::InvalidArgument, "empty sweep");
  if (stations.size() == 1 || h <= stations.front().height) return stations.front().center;
  if (h >= stations.back().height) return stations.back().center;
  std::size_t k = 0;
  while (k + 2 < stations.size() && stations[k + 1].height < h) ++k;
  const auto& a = stations[k];
  const auto& b = stations[k + 1];
  double f = (h - a.height) / (b.height - a.height);
  return (1 - f) * a.center + f * b.center;
}

TubularSweep sweep(const Surface& surface, const Plane3& base, double a, int steps, const SweepConfig& cfg,
                   std::optional<int> component) {
  if (!(a > 0) || !std::isfinite(a)) fail(ErrorCode::InvalidArgument, "sweep half-width must be positive");
  if (steps < 2) fail(ErrorCode::InvalidArgument, "sweep needs at least 2 steps");

  SliceResult s0 = slice(surface, base, cfg.slice);
  if (s0.compact.empty()) fail(ErrorCode::InvalidArgument, "base plane has no compact cross-cut");
  std::size_t pick = 0;
  if (component) {
    if (*component < 0 || *component >= static_cast<int>(s0.compact.size()))
      fail(ErrorCode::InvalidArgument, "component index out of range");
    pick = static_cast<std::size_t>(*component);
  } else {
    pick = *nearest_cut(s0.compact, base.point(), kInf);
  }
  if (!s0.compact[pick].is_clean) fail(ErrorCode::UncleanInput, "selected base cross-cut is not clean");

  TubularSweep out;
  out.base = base;
  out.half_width = a;
  const Vec3 base_centroid = s0.compact[pick].centroid3();
  SweepStation origin = make_station(0.0, std::move(s0.compact[pick]), cfg);
  out.rotation_index = origin.rotation_index;

  std::vector<double> heights(steps);
  for (int i = 0; i < steps; ++i) heights[i] = -a + 2 * a * i / (steps - 1);
  std::optional<std::vector<double>> critical;

  // Walk outward from the base plane in both directions.
  std::vector<SweepStation> up, down;
  for (int dir : {1, -1}) {
    double prev_h = 0.0;
    Vec3 prev_c = base_centroid;
    auto& list = dir > 0 ? up : down;
    std::vector<double> hs;
    for (double h : heights)
      if (dir > 0 ? h >= 0 : h < 0) hs.push_back(h);
    if (dir < 0) std::reverse(hs.begin(), hs.end());
    for (double h : hs) {
      if (h == 0.0) {
        list.push_back(origin);
        continue;
      }
      SliceResult r = slice(surface, base.offset(h), cfg.slice);
      auto k = nearest_cut(r.compact, prev_c, cfg.track_factor * std::fabs(h - prev_h));
      if (!k) {
        if (!critical) critical = surface.critical_heights(base);
        double lo = std::min(prev_h, h), hi = std::max(prev_h, h);
        for (double c : *critical) {
          if (c >= lo && c <= hi) {
            fail(ErrorCode::NonTransverseContact,
                 "tangent plane near height " + fmt(c) + " between stations " + fmt(prev_h) + " and " + fmt(h));
          }
        }
        fail(ErrorCode::ComponentLost, "no cross-cut near the tracked tube at height " + fmt(h));
      }
      prev_c = r.compact[*k].centroid3();
      prev_h = h;
      SweepStation st = make_station(h, std::move(r.compact[*k]), cfg);
      if (st.rotation_index != out.rotation_index) {
        fail(ErrorCode::IndexJump, "rotation index " + std::to_string(st.rotation_index) + " at height " + fmt(h) +
                                       ", " + std::to_string(out.rotation_index) + " at the base");
      }
      list.push_back(std::move(st));
    }
  }
  std::reverse(down.begin(), down.end());
  for (auto& s : down) out.stations.push_back(std::move(s));
  for (auto& s : up) out.stations.push_back(std::move(s));
  for (const auto& s : out.stations) out.any_fallback = out.any_fallback || s.fallback;
  return out;
}

TiltCenter probe_tilted_cut(const Surface& surface, const TubularSweep& sw, double h, const Vec3& v,
                            const SweepConfig& cfg) {
  if (sw.stations.empty()) fail(ErrorCode::InvalidArgument, "empty sweep");
  double len = v.norm();
  if (!(len > 0)) fail(ErrorCode::InvalidArgument, "tilt direction must be nonzero");
  Vec3 dir = v / len;
  double tilt = angle_between(dir, sw.base.normal());
  if (!(tilt < cfg.tilt_max)) {
    fail(ErrorCode::InvalidArgument, "tilt angle " + fmt(tilt) + " is not below tilt_max " + fmt(cfg.tilt_max));
  }
  const double eps = 1e-12 * std::max(1.0, sw.half_width);
  if (h < sw.stations.front().height - eps || h > sw.stations.back().height + eps)
    fail(ErrorCode::InvalidArgument, "height " + fmt(h) + " outside the sweep range");

  TiltCenter out;
  out.anchor = sw.center_at(h);
  out.tilt = tilt;
  Plane3 plane(dir, out.anchor);
  SliceResult r = slice(surface, plane, cfg.slice);
  // The tube's cut stays within roughly one cross-section diameter of mu(h).
  double reach = 0.0;
  for (const auto& s : sw.stations) reach = std::max(reach, s.cut.loop.diameter());
  auto k = nearest_cut(r.compact, out.anchor, reach);
  if (!k) fail(ErrorCode::ComponentLost, "tilted plane has no cross-cut near the tube at height " + fmt(h));
  const CrossCut& cut = r.compact[*k];
  out.clean = cut.is_clean;
  SymmetryReport rep = detect_center(cut.loop, CenterMode::Centroid, cfg.symmetry);
  out.residual = rep.residual;
  out.found = rep.center_found;
  out.center = cut.ambient(rep.center_found ? rep.center : rep.centroid);
  return out;
}

TiltCenter tilt_center(const Surface& surface, const TubularSweep& sw, double h, const Vec3& v,
                       const SweepConfig& cfg) {
  TiltCenter out = probe_tilted_cut(surface, sw, h, v, cfg);
  if (!out.found) {
    fail(ErrorCode::NotCentral, "tilted cross-cut at height " + fmt(h) + " (tilt " + fmt(out.tilt) +
                                    ") has no center; reflection residual " + fmt(out.residual));
  }
  return out;
}

Straightness axis_straightness(const std::vector<Vec3>& samples) {
  if (samples.size() < 3) fail(ErrorCode::InvalidArgument, "axis straightness needs at least 3 samples");
  const int n = static_cast<int>(samples.size());
  Vec3 mean = Vec3::Zero();
  for (const auto& x : samples) mean += x;
  mean /= n;
  Eigen::MatrixXd A(n, 3);
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    A.row(k) = (samples[k] - mean).transpose();
    scale = std::max(scale, samples[k].cwiseAbs().maxCoeff());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  Vec3 d = svd.matrixV().col(0);
  double lo = kInf, hi = -kInf, dev = 0.0;
  for (int k = 0; k < n; ++k) {
    Vec3 r = samples[k] - mean;
    double t = r.dot(d);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    dev = std::max(dev, (r - t * d).norm());
  }
  Straightness out;
  out.extent = hi - lo;
  if (!(out.extent > 1e-14 * std::max(1.0, scale))) fail(ErrorCode::DegenerateInput, "central curve samples coincide");
  out.value = dev / out.extent;
  out.direction = d;
  out.point = mean;
  return out;
}

CylinderTest cylinder_test(const Surface& surface, const Plane3& plane, double a, const Vec3& v, double tolerance) {
  double len = v.norm();
  if (!(len > 0)) fail(ErrorCode::InvalidArgument, "cylinder direction must be nonzero");
  const Vec3 dir = v / len;
  CylinderTest out;
  out.violation = 0.0;
  auto consider = [&](const Vec3& x, const Vec3& n) {
    ++out.samples;
    double val = std::fabs(n.dot(dir));
    if (val > out.violation) {
      out.violation = val;
      out.worst_point = x;
    }
  };
  if (surface.kind() == Surface::Kind::Mesh) {
    const auto& m = surface.triangles();
    for (std::size_t k = 0; k < m.vertices.size(); ++k)
      if (std::fabs(plane.height(m.vertices[k])) <= a) consider(m.vertices[k], m.normals[k]);
  } else {
    for (const auto& c : surface.charts()) {
      const int cu = 2 * c.cells_u, cv = 2 * c.cells_v;
      const double du = (c.u1 - c.u0) / cu, dv = (c.v1 - c.v0) / cv;
      double best = -1.0;
      Vec2 best_p(0, 0);
      for (int i = 0; i <= cu; ++i)
        for (int j = 0; j <= cv; ++j) {
          double u = c.u0 + du * i, w = c.v0 + dv * j;
          ChartPoint p = c.eval(u, w);
          Vec3 n = p.normal();
          if (n.isZero(0.0) || std::fabs(plane.height(p.position)) > a) continue;
          consider(p.position, n);
          double val = std::fabs(n.dot(dir));
          if (val > best) {
            best = val;
            best_p = Vec2(u, w);
          }
        }
      if (best < 0) continue;
      // Local refinement of the worst sample, staying in the chart and the slab.
      double step = 1.0;
      while (step > 1e-9) {
        bool moved = false;
        for (auto [x, y] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
          Vec2 q(best_p.x() + x * step * du, best_p.y() + y * step * dv);
          if (!c.periodic_u && (q.x() < c.u0 || q.x() > c.u1)) continue;
          if (!c.periodic_v && (q.y() < c.v0 || q.y() > c.v1)) continue;
          ChartPoint p = c.eval(q.x(), q.y());
          Vec3 n = p.normal();
          if (n.isZero(0.0) || std::fabs(plane.height(p.position)) > a) continue;
          double val = std::fabs(n.dot(dir));
          if (val > best) {
            best = val;
            best_p = q;
            moved = true;
            consider(p.position, n);
          }
        }
        if (!moved) step *= 0.5;
      }
    }
  }
  out.flag = out.samples > 0 && out.violation < tolerance;
  return out;
}

}  // namespace xcut
