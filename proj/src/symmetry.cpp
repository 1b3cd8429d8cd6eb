#include "symmetry.hpp"

#include "error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xcut {

const char* to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::Preserves: return "Preserves";
    case Orientation::Reverses: return "Reverses";
    case Orientation::None: return "None";
  }
  return "?";
}

const char* to_string(LoopCase c) noexcept {
  switch (c) {
    case LoopCase::CaseA: return "CaseA";
    case LoopCase::CaseB: return "CaseB";
    case LoopCase::NotCentral: return "NotCentral";
    case LoopCase::Unclean: return "Unclean";
  }
  return "?";
}

const char* to_string(CenterMode m) noexcept { return m == CenterMode::Centroid ? "centroid" : "search"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform grid over the segments of a closed polyline for nearest-segment queries.
class PolylineIndex {
 public:
  explicit PolylineIndex(std::vector<Vec2> pts) : pts_(std::move(pts)) {
    const int n = static_cast<int>(pts_.size());
    lo_ = hi_ = pts_[0];
    for (const auto& p : pts_) {
      lo_ = lo_.cwiseMin(p);
      hi_ = hi_.cwiseMax(p);
    }
    Vec2 ext = hi_ - lo_;
    double side = std::max(ext.maxCoeff(), 1e-300);
    dim_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(n))), 4, 256);
    cell_ = side / dim_ * (1 + 1e-9);
    nx_ = std::max(1, static_cast<int>(std::ceil(ext.x() / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(ext.y() / cell_)));
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (int k = 0; k < n; ++k) {
      const Vec2& a = pts_[k];
      const Vec2& b = pts_[(k + 1) % n];
      int x0 = cx(std::min(a.x(), b.x())), x1 = cx(std::max(a.x(), b.x()));
      int y0 = cy(std::min(a.y(), b.y())), y1 = cy(std::max(a.y(), b.y()));
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) cells_[static_cast<std::size_t>(y) * nx_ + x].push_back(k);
    }
    stamp_.assign(n, -1);
  }

  /// Distance from q to the polyline; may return any value <= cutoff as soon
  /// as one segment within cutoff is found.
  double distance(const Vec2& q, double cutoff) {
    ++query_;
    const int n = static_cast<int>(pts_.size());
    int qx = cx(q.x()), qy = cy(q.y());
    Vec2 clamped = q.cwiseMax(lo_).cwiseMin(hi_);
    double outside = (q - clamped).norm();
    double best = kInf;
    for (int r = 0; r <= std::max(nx_, ny_); ++r) {
      double bound = outside + std::max(0, r - 1) * cell_;
      if (bound >= best) break;
      for (int x = qx - r; x <= qx + r; ++x) {
        if (x < 0 || x >= nx_) continue;
        for (int y = qy - r; y <= qy + r; ++y) {
          if (y < 0 || y >= ny_) continue;
          if (std::abs(x - qx) != r && std::abs(y - qy) != r) continue;
          for (int k : cells_[static_cast<std::size_t>(y) * nx_ + x]) {
            if (stamp_[k] == query_) continue;
            stamp_[k] = query_;
            best = std::min(best, segment_distance(q, pts_[k], pts_[(k + 1) % n]));
            if (best <= cutoff) return best;
          }
        }
      }
    }
    return best;
  }

 private:
  static double segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double len2 = d.squaredNorm();
    double s = len2 > 0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (a + s * d - x).norm();
  }
  int cx(double x) const { return std::clamp(static_cast<int>(std::floor((x - lo_.x()) / cell_)), 0, nx_ - 1); }
  int cy(double y) const { return std::clamp(static_cast<int>(std::floor((y - lo_.y()) / cell_)), 0, ny_ - 1); }

  std::vector<Vec2> pts_;
  Vec2 lo_, hi_;
  int dim_ = 0, nx_ = 0, ny_ = 0;
  double cell_ = 0.0;
  std::vector<std::vector<int>> cells_;
  std::vector<int> stamp_;
  int query_ = 0;
};

// Arc-length samples with spacing times max curvature at most 0.05.
int adaptive_samples(const ClosedCurve& curve, int base) {
  double need = max_abs_curvature(curve) * curve.length() / 0.05;
  int n = base;
  while (n < need && n < (1 << 18)) n *= 2;
  return n;
}

std::vector<Vec2> image_samples(const ClosedCurve& curve, int n) {
  std::vector<Vec2> p(n);
  for (int k = 0; k < n; ++k) p[k] = curve.position(kTwoPi * k / n);
  return p;
}

// The two one-sided distances agree: reflecting both sets through c swaps them.
double reflected_residual(PolylineIndex& index, const std::vector<Vec2>& samples, const Vec2& c) {
  double worst = 0.0;
  for (const auto& p : samples) worst = std::max(worst, index.distance(2.0 * c - p, worst));
  return worst;
}

bool clean_or_note(const ClosedCurve& curve, const DoublePointConfig& cfg, std::string& note) {
  CleanReport r = is_clean(curve, cfg);
  if (!r.clean) note = r.message;
  return r.clean;
}

MatchResult match_impl(const ClosedCurve& a, const ClosedCurve& b, const SymmetryConfig& cfg, bool a_clean,
                       bool b_clean) {
  MatchResult out;
  out.advisory = !(a_clean && b_clean);
  if (out.advisory) out.note = "unclean input; result is advisory";
  const double diam = std::max(a.diameter(), b.diameter());
  const double tol = cfg.center_tolerance * diam;
  if (std::fabs(a.length() - b.length()) > 1e-7 * a.length()) {
    out.residual = kInf;
    out.note += (out.note.empty() ? "" : "; ") + std::string("lengths differ");
    return out;
  }
  const int n = adaptive_samples(a, cfg.match_samples);
  ClosedCurve A = arc_length_resample(a, n);
  ClosedCurve B = arc_length_resample(b, n);
  const Vec2 x0 = B.position(0.0);
  const Vec2 t0 = B.velocity(0.0).normalized();
  const double h = kTwoPi / n;
  const double spacing = a.length() / n;

  std::vector<double> dist(n);
  for (int k = 0; k < n; ++k) dist[k] = (A.position(k * h) - x0).norm();

  double best[2] = {kInf, kInf};
  double best_phase[2] = {0.0, 0.0};
  const int checks = 2 * n;
  for (int k = 0; k < n; ++k) {
    double d = dist[k];
    if (d > 4 * spacing || d > dist[(k + n - 1) % n] || d > dist[(k + 1) % n]) continue;
    auto [s0, d0] = golden_minimize([&](double s) { return (A.position(s) - x0).norm(); }, (k - 1) * h, (k + 1) * h,
                                    1e-14);
    if (d0 > 1e-3 * diam) continue;
    double align = A.velocity(s0).normalized().dot(t0);
    if (std::fabs(align) < std::cos(0.1)) continue;
    int o = align > 0 ? 0 : 1;
    double sign = align > 0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (int j = 0; j < checks && worst < best[o]; ++j) {
      double s = kTwoPi * j / checks;
      worst = std::max(worst, (B.position(s) - A.position(s0 + sign * s)).norm());
    }
    if (worst < best[o]) {
      best[o] = worst;
      best_phase[o] = wrap_angle(s0);
    }
  }
  if (best[0] < tol) {
    out.orientation = Orientation::Preserves;
    out.residual = best[0];
    out.phase = best_phase[0];
  } else if (best[1] < tol) {
    out.orientation = Orientation::Reverses;
    out.residual = best[1];
    out.phase = best_phase[1];
  } else {
    out.residual = std::min(best[0], best[1]);
    out.phase = best[0] <= best[1] ? best_phase[0] : best_phase[1];
  }
  return out;
}

double min_distance_to(const ClosedCurve& curve, const Vec2& c) {
  const int m = 4 * curve.resolution();
  const double h = kTwoPi / m;
  double best = kInf;
  int bk = 0;
  for (int k = 0; k < m; ++k) {
    double d = (curve.position(k * h) - c).norm();
    if (d < best) {
      best = d;
      bk = k;
    }
  }
  auto [t, d] = golden_minimize([&](double s) { return (curve.position(s) - c).norm(); }, (bk - 1) * h, (bk + 1) * h,
                                1e-14);
  return std::min(best, d);
}

// Compass search on the reflection residual from `start`.
std::pair<Vec2, double> refine_center(PolylineIndex& index, const std::vector<Vec2>& samples, Vec2 c, double step,
                                      double diam, double give_up) {
  double f = reflected_residual(index, samples, c);
  const Vec2 dirs[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step > 1e-9 * diam) {
    if (step < 1e-2 * diam && f > give_up) break;
    bool moved = false;
    for (const auto& d : dirs) {
      Vec2 cand = c + step * d;
      double g = reflected_residual(index, samples, cand);
      if (g < f) {
        f = g;
        c = cand;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {c, f};
}

// Gauss-Newton on sum_k dist(2c - a(t_k), image)^2 with feet projected onto
// the curve itself. Smooth near a true center, so it converges past the
// polyline resolution of the compass search and commutes with rigid motions.
Vec2 polish_center(const ClosedCurve& curve, Vec2 c) {
  constexpr int kProbes = 256, kFeet = 4096;
  std::vector<Vec2> probe(kProbes), grid(kFeet);
  for (int k = 0; k < kProbes; ++k) probe[k] = curve.position(kTwoPi * (k + 0.5) / kProbes);
  for (int j = 0; j < kFeet; ++j) grid[j] = curve.position(kTwoPi * j / kFeet);
  std::vector<double> foot(kProbes);
  for (int k = 0; k < kProbes; ++k) {
    const Vec2 q = 2.0 * c - probe[k];
    int best = 0;
    for (int j = 1; j < kFeet; ++j)
      if ((grid[j] - q).squaredNorm() < (grid[best] - q).squaredNorm()) best = j;
    foot[k] = kTwoPi * best / kFeet;
  }
  const double diam = (curve.bbox_max() - curve.bbox_min()).norm();
  for (int iter = 0; iter < 20; ++iter) {
    Mat2 normal_eq = Mat2::Zero();
    Vec2 rhs = Vec2::Zero();
    for (int k = 0; k < kProbes; ++k) {
      const Vec2 q = 2.0 * c - probe[k];
      double& t = foot[k];
      for (int n = 0; n < 8; ++n) {
        const CurvePoint p = curve.evaluate(t);
        const Vec2 d = p.position - q;
        const double g1 = d.dot(p.velocity), g2 = p.velocity.squaredNorm() + d.dot(p.acceleration);
        const double dt = g2 > 0 ? g1 / g2 : g1 / p.velocity.squaredNorm();
        t -= dt;
        if (std::fabs(dt) < 1e-15) break;
      }
      const CurvePoint p = curve.evaluate(t);
      const Vec2 n = Vec2(-p.velocity.y(), p.velocity.x()).normalized();
      const double r = n.dot(q - p.position);
      normal_eq += n * n.transpose();
      rhs += n * r;
    }
    const Vec2 delta = -0.5 * normal_eq.ldlt().solve(rhs);
    if (!delta.allFinite()) break;
    c += delta;
    if (delta.norm() < 1e-15 * diam) break;
  }
  return c;
}

}  // namespace

MatchResult match_reparametrization(const ClosedCurve& a, const ClosedCurve& b, const SymmetryConfig& cfg) {
  std::string na, nb;
  bool ca = clean_or_note(a, cfg.double_points, na);
  bool cb = clean_or_note(b, cfg.double_points, nb);
  return match_impl(a, b, cfg, ca, cb);
}

double reflection_residual(const ClosedCurve& curve, const Vec2& c, int n) {
  auto samples = image_samples(curve, n);
  PolylineIndex index(samples);
  return reflected_residual(index, samples, c);
}

SymmetryReport detect_center(const ClosedCurve& curve, CenterMode mode, const SymmetryConfig& cfg) {
  require_immersed(curve);
  SymmetryReport rep;
  rep.mode = mode;
  rep.diameter = curve.diameter();
  const double tol = cfg.center_tolerance * rep.diameter;
  rep.centroid = centroid(curve);
  rep.center = rep.centroid;

  std::string note;
  bool clean = clean_or_note(curve, cfg.double_points, note);
  MatchResult m = match_impl(curve, curve.reflected(rep.centroid), cfg, clean, clean);
  rep.orientation = m.orientation;
  rep.match_residual = m.residual;
  rep.match_advisory = m.advisory;
  rep.residual = reflection_residual(curve, rep.centroid, cfg.hausdorff_samples);
  rep.center_found = m.orientation != Orientation::None && m.residual < tol;
  if (!clean) rep.note = "unclean: " + note;
  if (rep.center_found || mode == CenterMode::Centroid) return rep;

  // Search: coarse grid of candidates over the bounding box, then compass refinement.
  const double accept = cfg.search_tolerance * rep.diameter;
  auto coarse_samples = image_samples(curve, 512);
  PolylineIndex coarse(coarse_samples);
  const int g = std::max(2, cfg.search_grid);
  const Vec2 lo = curve.bbox_min(), hi = curve.bbox_max();
  std::vector<std::pair<double, Vec2>> cands;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      Vec2 c(lo.x() + (hi.x() - lo.x()) * i / (g - 1), lo.y() + (hi.y() - lo.y()) * j / (g - 1));
      cands.emplace_back(reflected_residual(coarse, coarse_samples, c), c);
    }
  cands.emplace_back(reflected_residual(coarse, coarse_samples, rep.centroid), rep.centroid);
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  auto fine_samples = image_samples(curve, 1024);
  PolylineIndex fine(fine_samples);
  const double step0 = (hi - lo).maxCoeff() / (g - 1);
  Vec2 best_c = cands.front().second;
  double best_f = kInf;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, cands.size()); ++i) {
    auto [c, f] = refine_center(fine, fine_samples, cands[i].second, step0, rep.diameter, 10 * accept);
    if (f < best_f) {
      best_f = f;
      best_c = c;
    }
  }
  rep.center = best_c;
  rep.residual = reflection_residual(curve, best_c, cfg.hausdorff_samples);
  // An accepted center is replaced by the least-squares one. Both coincide on
  // an exactly central image; the latter is unique and commutes with rigid
  // motions, while the compass result stops at the polyline resolution.
  if (rep.residual < accept) {
    const Vec2 polished = polish_center(curve, best_c);
    const double r = reflection_residual(curve, polished, cfg.hausdorff_samples);
    if (r < accept) {
      rep.center = polished;
      rep.residual = r;
    }
  }
  rep.center_found = rep.residual < accept;
  if (!rep.center_found) {
    rep.orientation = Orientation::None;
    return rep;
  }
  MatchResult ms = match_impl(curve, curve.reflected(rep.center), cfg, clean, clean);
  rep.orientation = ms.orientation;
  rep.match_residual = ms.residual;
  rep.match_advisory = ms.advisory;
  return rep;
}

double diameter_residual(const ClosedCurve& curve, const Vec2& c, double phase, int samples) {
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    double s = kTwoPi * j / samples;
    worst = std::max(worst, (2.0 * c - curve.position(s) - curve.position(s + phase)).norm());
  }
  return worst;
}

DiameterCentral is_diameter_central(const ClosedCurve& curve, const Vec2& c, const SymmetryConfig& cfg) {
  if (!is_unit_speed(curve, 1e-3)) fail(ErrorCode::NotNormalized, "curve is not unit speed with length 2pi");
  const int P = std::max(16, cfg.phase_samples);
  const int stride = std::max(1, P / 256);
  std::vector<Vec2> q(P);
  for (int k = 0; k < P; ++k) q[k] = curve.position(kTwoPi * k / P);
  int best_k = 0;
  double best = kInf;
  for (int k = 1; k < P; ++k) {
    double worst = 0.0;
    for (int j = 0; j < P && worst < best; j += stride) worst = std::max(worst, (2.0 * c - q[j] - q[(j + k) % P]).norm());
    if (worst < best) {
      best = worst;
      best_k = k;
    }
  }
  const double h = kTwoPi / P;
  auto [l, r] = golden_minimize([&](double x) { return diameter_residual(curve, c, x, 2048); }, (best_k - 1) * h,
                                (best_k + 1) * h, 1e-13);
  DiameterCentral out;
  out.phase = l;
  out.residual = diameter_residual(curve, c, l, 4096);
  out.flag = out.residual < cfg.center_tolerance * curve.diameter();
  return out;
}

SymmetryReport classify_central_loop(const ClosedCurve& curve, const SymmetryConfig& cfg) {
  std::vector<DoublePoint> pts;
  try {
    pts = find_double_points(curve, cfg.double_points);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ContinuumIntersection) fail(ErrorCode::UncleanInput, e.what());
    throw;
  }
  for (const auto& dp : pts)
    if (!dp.clean) fail(ErrorCode::UncleanInput, "tangential double point");

  SymmetryReport rep = detect_center(curve, CenterMode::Centroid, cfg);
  rep.double_points = pts;
  rep.rotation_index = rotation_index(curve).index;
  if (!rep.center_found) {
    rep.loop_case = LoopCase::NotCentral;
    return rep;
  }
  const double tol = cfg.center_tolerance * rep.diameter;
  rep.margin = min_distance_to(curve, rep.center);
  rep.center_double_point_distance = kInf;
  const DoublePoint* at_center = nullptr;
  for (const auto& dp : pts) {
    double d = (dp.location - rep.center).norm();
    if (d < rep.center_double_point_distance) {
      rep.center_double_point_distance = d;
      at_center = &dp;
    }
  }
  const double scale = kTwoPi / curve.length();
  ClosedCurve unit = arc_length_reparametrize(curve, adaptive_samples(curve, cfg.match_samples));
  DiameterCentral dc = is_diameter_central(unit, scale * rep.center, cfg);
  rep.diameter_central = dc.flag;
  rep.phase = dc.phase;

  std::string problems;
  auto require = [&](bool ok, const char* what) {
    if (!ok) problems += std::string(problems.empty() ? "" : ", ") + what;
  };
  if (rep.orientation == Orientation::Preserves) {
    require(rep.rotation_index % 2 != 0, "rotation index is even");
    require(rep.margin > tol, "loop passes through its center");
    require(rep.diameter_central, "not diameter-central");
    rep.loop_case = LoopCase::CaseA;
  } else {
    require(rep.rotation_index == 0, "rotation index is not zero");
    require(at_center && at_center->simple && rep.center_double_point_distance < tol,
            "no simple double point at the center");
    require(!rep.diameter_central, "diameter-central");
    rep.loop_case = LoopCase::CaseB;
  }
  if (!problems.empty()) {
    fail(ErrorCode::DichotomyViolation,
         std::string(to_string(rep.loop_case)) + " (" + to_string(rep.orientation) + ") but " + problems);
  }
  return rep;
}

EvenIndexReport even_index_exclusion_suite(int count, std::uint64_t seed, const std::vector<ClosedCurve>& extra,
                                           const SymmetryConfig& cfg) {
  if (count < 0) fail(ErrorCode::InvalidArgument, "count must be non-negative");
  EvenIndexReport out;
  out.min_relative_residual = kInf;
  auto run = [&](const ClosedCurve& curve, SuiteEntry e) {
    SymmetryReport rep = detect_center(curve, CenterMode::Search, cfg);
    e.center_found = rep.center_found;
    e.residual = rep.residual;
    e.relative_residual = rep.residual / rep.diameter;
    if (e.center_found) ++out.central_found;
    out.min_relative_residual = std::min(out.min_relative_residual, e.relative_residual);
    out.entries.push_back(e);
  };
  for (int i = 0; i < count; ++i) {
    SuiteEntry e;
    e.seed = split_seed(seed, static_cast<std::uint64_t>(i));
    GeneratedLoop loop = random_even_index_loop(e.seed);
    e.label = "even_index#" + std::to_string(i);
    e.rotation_index = rotation_index(loop.curve).index;
    run(loop.curve, e);
  }
  for (std::size_t i = 0; i < extra.size(); ++i) {
    SuiteEntry e;
    e.label = extra[i].name().empty() ? "extra#" + std::to_string(i) : extra[i].name();
    CleanReport cr = is_clean(extra[i], cfg.double_points);
    int w = 0;
    try {
      w = rotation_index(extra[i]).index;
    } catch (const Error&) {
      w = 1;
    }
    e.rotation_index = w;
    if (!cr.clean || w == 0 || w % 2 != 0) {
      e.included = false;
      e.note = !cr.clean ? "excluded: unclean" : "excluded: rotation index not even and nonzero";
      ++out.excluded;
      out.entries.push_back(e);
      continue;
    }
    run(extra[i], e);
  }
  if (out.entries.empty() || out.excluded == static_cast<int>(out.entries.size())) out.min_relative_residual = 0.0;
  return out;
}

DichotomyReport dichotomy_suite(int count_a, int count_b, std::uint64_t seed, const SymmetryConfig& cfg) {
  DichotomyReport out;
  auto run = [&](CentralConstruction kind, int i) {
    SuiteEntry e;
    e.seed = split_seed(seed, static_cast<std::uint64_t>(i) + (kind == CentralConstruction::CaseA ? 0 : 1000000));
    e.label = std::string(kind == CentralConstruction::CaseA ? "caseA#" : "caseB#") + std::to_string(i);
    GeneratedLoop loop = random_central_loop(kind, e.seed);
    try {
      SymmetryReport rep = classify_central_loop(loop.curve, cfg);
      e.rotation_index = rep.rotation_index;
      e.loop_case = rep.loop_case;
      e.center_found = rep.center_found;
      e.residual = (rep.center - loop.center).norm();
      LoopCase expected = kind == CentralConstruction::CaseA ? LoopCase::CaseA : LoopCase::CaseB;
      if (rep.loop_case != expected) {
        e.violation = true;
        e.note = std::string("classified ") + to_string(rep.loop_case);
      }
    } catch (const Error& err) {
      e.violation = true;
      e.note = err.what();
    }
    if (e.violation) ++out.violations;
    if (e.loop_case == LoopCase::CaseA) ++out.case_a;
    if (e.loop_case == LoopCase::CaseB) ++out.case_b;
    out.entries.push_back(e);
  };
  for (int i = 0; i < count_a; ++i) run(CentralConstruction::CaseA, i);
  for (int i = 0; i < count_b; ++i) run(CentralConstruction::CaseB, i);
  return out;
}

}  // namespace xcut
