#include "pipeline.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace xcut {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::CentralCylinder: return "CentralCylinder";
    case Verdict::NotApplicable: return "NotApplicable";
    case Verdict::Inconsistent: return "Inconsistent";
  }
  return "?";
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

template <class F>
auto staged(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
}

bool is_edge_error(const Error& e) {
  return e.code() == ErrorCode::ComponentLost || e.code() == ErrorCode::NonTransverseContact ||
         e.code() == ErrorCode::IndexJump;
}

enum class Outcome { Pass, Fail, Edge };

struct SlabCheck {
  Outcome outcome = Outcome::Pass;
  Verdict verdict = Verdict::CentralCylinder;
  std::string reason;
  std::optional<TubularSweep> sweep;
  Vec3 axis = Vec3::UnitZ();
  Vec3 center = Vec3::Zero();
  double trapping = 0.0;
  double straightness = 0.0;
  double cylinder = 0.0;
  int checked = 0;
  int skipped = 0;
  std::vector<CxSample> samples;
};

SlabCheck check_slab(const Surface& surface, const Plane3& plane, double a, int component,
                     const PipelineConfig& cfg) {
  SlabCheck out;
  auto fail_with = [&](Verdict v, std::string why) {
    out.outcome = Outcome::Fail;
    out.verdict = v;
    out.reason = std::move(why);
    return out;
  };
  try {
    out.sweep = staged("sweep", [&] { return sweep(surface, plane, a, cfg.steps, cfg.sweep, component); });
  } catch (const Error& e) {
    if (!is_edge_error(e)) throw;
    out.outcome = Outcome::Edge;
    out.reason = e.what();
    return out;
  }
  const TubularSweep& sw = *out.sweep;
  for (const auto& st : sw.stations)
    if (st.fallback)
      return fail_with(Verdict::NotApplicable, "CX fails: the cross-cut at height " + fmt(st.height) +
                                                   " has no center (centroid fallback)");

  // Central cross-cut sampling with tilted planes through the central curve.
  const int nh = std::max(1, cfg.cx_heights);
  for (int j = 0; j < nh; ++j) {
    double h = nh == 1 ? 0.0 : -a + 2 * a * j / (nh - 1);
    for (int i = 0; i < cfg.cx_azimuths; ++i) {
      double az = kTwoPi * i / cfg.cx_azimuths;
      for (double tilt : cfg.cx_tilts) {
        CxSample s;
        s.height = h;
        s.tilt = tilt;
        s.azimuth = az;
        Vec3 v = tilt_direction(plane.normal(), tilt, az);
        try {
          TiltCenter tc = staged("cx", [&] { return probe_tilted_cut(surface, sw, h, v, cfg.sweep); });
          s.clean = tc.clean;
          s.central = tc.found;
          s.trap_distance = (tc.center - tc.anchor).norm();
        } catch (const Error& e) {
          if (!is_edge_error(e)) throw;
          s.note = e.what();
        }
        if (!s.note.empty() || !s.clean) {
          ++out.skipped;
        } else {
          ++out.checked;
          if (!s.central) {
            out.samples.push_back(s);
            return fail_with(Verdict::NotApplicable, "CX fails: clean tilted cross-cut at height " + fmt(h) +
                                                         ", tilt " + fmt(tilt) + ", azimuth " + fmt(az) +
                                                         " has no center");
          }
          out.trapping = std::max(out.trapping, s.trap_distance);
        }
        out.samples.push_back(s);
      }
    }
  }
  if (out.trapping > cfg.trapping_tolerance)
    return fail_with(Verdict::Inconsistent, "center trapping: tilted centers move " + fmt(out.trapping) +
                                                " from the central curve");

  Straightness line = staged("axis", [&] { return axis_straightness(sw.central_curve()); });
  out.straightness = line.value;
  if (line.value > cfg.straightness_tolerance)
    return fail_with(Verdict::Inconsistent, "axis straightness " + fmt(line.value));
  out.axis = line.direction.dot(plane.normal()) < 0 ? Vec3(-line.direction) : line.direction;
  out.center = sw.center_at(0.0);

  CylinderTest cyl =
      staged("cylinder", [&] { return cylinder_test(surface, plane, a, out.axis, cfg.cylinder_tolerance); });
  out.cylinder = cyl.violation;
  if (!cyl.flag) return fail_with(Verdict::Inconsistent, "cylinder test: |nu . v| reaches " + fmt(cyl.violation));
  return out;
}

}  // namespace

PipelineResult run_theorem_pipeline(const Surface& surface, const Plane3& plane, const PipelineConfig& cfg) {
  for (double t : cfg.cx_tilts)
    if (!(t > 0 && t < cfg.sweep.tilt_max)) fail(ErrorCode::InvalidArgument, "CX tilts must lie in (0, tilt_max)");
  if (!(cfg.growth > 1)) fail(ErrorCode::InvalidArgument, "continuation growth must exceed 1");

  PipelineResult res;
  auto stage = [&](std::string name, bool ok, double a, std::string detail) {
    res.stages.push_back({std::move(name), ok, a, std::move(detail)});
  };

  // Figure-8 test on the base plane.
  SliceResult base = staged("slice", [&] { return slice(surface, plane, cfg.sweep.slice); });
  res.cuts_in_base = static_cast<int>(base.compact.size());
  int pick = -1;
  double pick_d = std::numeric_limits<double>::infinity();
  std::string seen;
  for (int k = 0; k < res.cuts_in_base; ++k) {
    const CrossCut& cut = base.compact[k];
    std::string desc = cut.is_clean ? "clean" : "unclean";
    if (cut.is_clean) {
      int w = 0;
      std::vector<DoublePoint> dps;
      try {
        w = rotation_index(cut.loop).index;
        dps = find_double_points(cut.loop, cfg.sweep.symmetry.double_points);
      } catch (const Error& e) {
        desc = e.what();
        w = 1;
      }
      desc += ", index " + std::to_string(w) + ", " + std::to_string(dps.size()) + " double point(s)";
      if (w == 0 && dps.size() == 1 && dps[0].simple) {
        double d = (cut.centroid3() - plane.point()).norm();
        if (d < pick_d) {
          pick_d = d;
          pick = k;
          res.figure8_double_point = cut.ambient(dps[0].location);
        }
      }
    }
    seen += (seen.empty() ? "" : "; ") + desc;
  }
  if (pick < 0) {
    res.verdict = Verdict::NotApplicable;
    res.reason = "no clean figure-8 cross-cut in the base plane" + (seen.empty() ? std::string() : " (" + seen + ")");
    stage("figure8", false, 0.0, res.reason);
    return res;
  }
  res.figure8_found = true;
  stage("figure8", true, 0.0, "cut " + std::to_string(pick) + " of " + std::to_string(res.cuts_in_base));

  // Heights of the surface's bounding box above the base plane bound the continuation.
  double limit = 0.0;
  {
    const Vec3 lo = surface.bbox_min(), hi = surface.bbox_max();
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (int c = 0; c < 8; ++c) {
      Vec3 x((c & 1) ? hi.x() : lo.x(), (c & 2) ? hi.y() : lo.y(), (c & 4) ? hi.z() : lo.z());
      hmin = std::min(hmin, plane.height(x));
      hmax = std::max(hmax, plane.height(x));
    }
    limit = std::min(hmax, -hmin);
  }
  double a = cfg.half_width > 0 ? cfg.half_width : 0.25 * base.compact[pick].loop.diameter();
  a = std::min(a, limit);

  bool verified = false;
  for (int iter = 0; iter <= cfg.max_continuation; ++iter) {
    SlabCheck chk = check_slab(surface, plane, a, pick, cfg);
    if (chk.outcome == Outcome::Edge) {
      if (!verified) {
        // The first slab is too wide for a good patch: shrink it.
        stage("slab", false, a, chk.reason + "; shrinking");
        if (iter >= 4) {
          throw Error(ErrorCode::ComponentLost, "continuation: no good slab around the figure-8 cut (" +
                                                    chk.reason + ")");
        }
        a *= 0.5;
        continue;
      }
      stage("continuation", false, a, "stopped: " + chk.reason);
      break;
    }
    res.cx_checked += chk.checked;
    res.cx_skipped += chk.skipped;
    res.cx_samples.insert(res.cx_samples.end(), chk.samples.begin(), chk.samples.end());
    res.trapping_residual = std::max(res.trapping_residual, chk.trapping);
    res.straightness = std::max(res.straightness, chk.straightness);
    res.cylinder_violation = std::max(res.cylinder_violation, chk.cylinder);
    if (chk.outcome == Outcome::Fail) {
      res.verdict = chk.verdict;
      res.reason = chk.reason;
      res.sweep = std::move(chk.sweep);
      stage("slab", false, a, chk.reason);
      return res;
    }
    verified = true;
    res.verified_half_width = a;
    res.axis = chk.axis;
    res.center = chk.center;
    res.sweep = std::move(chk.sweep);
    stage("slab", true, a,
          "trapping " + fmt(chk.trapping) + ", straightness " + fmt(chk.straightness) + ", cylinder " +
              fmt(chk.cylinder) + ", " + std::to_string(chk.checked) + " tilted cuts");
    double next = a * cfg.growth;
    if (next > limit) {
      stage("continuation", true, a, "slab reaches the surface bounds");
      break;
    }
    a = next;
  }
  res.verdict = Verdict::CentralCylinder;
  res.reason = "central cylinder on the slab of half-width " + fmt(res.verified_half_width);
  return res;
}

}  // namespace xcut
