#include "corpus.hpp"

#include "double_points.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace xcut {

using cd = std::complex<double>;

const std::vector<VariantInfo>& curve_variants() {
  static const std::vector<VariantInfo> variants = {
      {"circle", {{"cx", 0.0}, {"cy", 0.0}, {"r", 1.0}}, "c + r e^{it}"},
      {"ellipse", {{"a", 2.0}, {"b", 1.0}}, "(a cos t, b sin t)"},
      {"figure8", {{"a", 1.0}, {"b", 1.0}}, "(a cos t, b sin 2t)"},
      {"doubled_circle", {{"r", 1.0}}, "r e^{2it}"},
      {"tangent_circles", {{"window", 0.05}, {"samples", 12288}},
       "right unit circle clockwise, left counterclockwise, right clockwise again"},
      {"figure2_unclean", {{"window", 0.05}, {"samples", 8192}}, "big circle, right lobe, left lobe reversed; three tangencies"},
      {"odd_rose", {{"k", 3}, {"eps", 0.5}}, "e^{ikt} + eps e^{it}"},
      {"three_petal", {{"r", 1.0}}, "r (e^{2it} + e^{-it}) / 2; a clean triple point"},
      {"random_fourier", {{"seed", 1}, {"K", 5}, {"decay", 2.0}}, "Gaussian coefficients, variance decay^-|n|"},
      {"perturbed", {{"seed", 1}, {"amplitude", 0.01}, {"K", 6}}, "base + small random Fourier noise"},
  };
  return variants;
}

namespace {

const VariantInfo& info(const std::string& kind) {
  for (const auto& v : curve_variants())
    if (v.kind == kind) return v;
  fail(ErrorCode::InvalidSpec, "unknown curve kind '" + kind + "'");
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidSpec, "parameter " + key + " expects a number, got '" + value + "'");
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

std::mt19937_64 rng_for(double seed, std::uint64_t salt) {
  return std::mt19937_64(split_seed(static_cast<std::uint64_t>(seed), salt));
}

std::vector<Vec2> sample_path(int n, double total, const std::function<Vec2(double)>& path) {
  std::vector<Vec2> pts(n);
  for (int k = 0; k < n; ++k) pts[k] = path(total * k / n);
  return pts;
}

double smootherstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (x * (6 * x - 15) + 10);
}

ClosedCurve tangent_circles(double window, int samples) {
  auto right = [](double s) { return Vec2(1 - std::cos(s), std::sin(s)); };
  auto left = [](double s) { return Vec2(-1 + std::cos(s), std::sin(s)); };
  // Blend the two analytic pieces across each junction at s = 2pi, 4pi.
  auto path = [&](double s) -> Vec2 {
    const double j1 = kTwoPi, j2 = 2 * kTwoPi;
    if (std::fabs(s - j1) < window / 2) {
      double w = smootherstep((s - (j1 - window / 2)) / window);
      return (1 - w) * right(s) + w * left(s);
    }
    if (std::fabs(s - j2) < window / 2) {
      double w = smootherstep((s - (j2 - window / 2)) / window);
      return (1 - w) * left(s) + w * right(s);
    }
    if (s < j1) return right(s);
    if (s < j2) return left(s);
    return right(s);
  };
  return ClosedCurve::from_samples(sample_path(samples, 3 * kTwoPi, path), "tangent_circles");
}

ClosedCurve figure2_unclean(double window, int samples) {
  if (samples % 8 != 0) fail(ErrorCode::InvalidSpec, "figure2_unclean needs a sample count divisible by 8");
  // Arc-length pieces of a path of length 8 pi, each analytic in s. The
  // junctions sit at the tangency points, where neighbouring pieces share
  // position and tangent, so a position blend keeps the contacts exact.
  const double total = 4 * kTwoPi;
  const double starts[4] = {0.0, 2 * kTwoPi, 2 * kTwoPi + kPi, 3 * kTwoPi + kPi};
  auto piece = [](int i, double s) -> Vec2 {
    switch (i) {
      case 0: return 2.0 * Vec2(std::cos(s / 2), std::sin(s / 2));  // outer circle
      case 1: s -= 2 * kTwoPi; return Vec2(1 + std::cos(s), std::sin(s));  // right lobe, upper half
      case 2: s -= 2 * kTwoPi + kPi; return Vec2(-1 + std::cos(s), -std::sin(s));  // left lobe, clockwise
      default: s -= 3 * kTwoPi + kPi; return Vec2(1 + std::cos(kPi + s), std::sin(kPi + s));  // right lobe, lower half
    }
  };
  auto path = [&](double s) -> Vec2 {
    for (int j = 0; j < 4; ++j) {
      double d = s - starts[j];
      if (j == 0 && s > total - window / 2) d = s - total;
      if (std::fabs(d) < window / 2) {
        double w = smootherstep((d + window / 2) / window);
        int prev = (j + 3) % 4;
        double sp = j == 0 ? (d < 0 ? s : s + total) : s;
        double sn = j == 0 ? (d < 0 ? s - total : s) : s;
        return (1 - w) * piece(prev, sp) + w * piece(j, sn);
      }
    }
    int i = 3;
    while (i > 0 && s < starts[i]) --i;
    return piece(i, s);
  };
  return ClosedCurve::from_samples(sample_path(samples, total, path), "figure2_unclean");
}

std::vector<cd> gaussian_coefficients(std::mt19937_64& rng, int K, double decay, double amplitude) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<cd> c(2 * K + 1);
  for (int n = -K; n <= K; ++n) {
    double sigma = amplitude * std::pow(decay, -0.5 * std::abs(n)) / std::sqrt(2.0);
    double re = N(rng), im = N(rng);
    c[n + K] = sigma * cd(re, im);
  }
  return c;
}

bool well_immersed(const ClosedCurve& c) { return c.min_speed() > 0.02 * c.length() / kTwoPi; }

}  // namespace

double CurveSpec::get(const std::string& key) const {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  const auto& d = info(kind).defaults;
  auto jt = d.find(key);
  if (jt == d.end()) fail(ErrorCode::InvalidSpec, "curve kind " + kind + " has no parameter " + key);
  return jt->second;
}

CurveSpec parse_curve_spec(const std::string& text) {
  CurveSpec spec;
  auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  const auto& known = info(spec.kind).defaults;
  if (colon == std::string::npos) return spec;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto eq = rest.find('=', pos);
    if (eq == std::string::npos) fail(ErrorCode::InvalidSpec, "expected key=value in '" + rest.substr(pos) + "'");
    std::string key = rest.substr(pos, eq - pos);
    if (key == "base") {
      if (spec.kind != "perturbed") fail(ErrorCode::InvalidSpec, "only perturbed takes a base curve");
      spec.base = std::make_shared<CurveSpec>(parse_curve_spec(rest.substr(eq + 1)));
      break;
    }
    auto comma = rest.find(',', eq);
    std::string value = rest.substr(eq + 1, comma == std::string::npos ? std::string::npos : comma - eq - 1);
    if (!known.count(key)) fail(ErrorCode::InvalidSpec, "curve kind " + spec.kind + " has no parameter " + key);
    spec.params[key] = parse_number(key, value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

std::string to_string(const CurveSpec& spec) {
  std::string out = spec.kind;
  bool first = true;
  for (const auto& [k, v] : spec.params) {
    out += first ? ":" : ",";
    out += k + "=" + format_number(v);
    first = false;
  }
  if (spec.base) out += std::string(first ? ":" : ",") + "base=" + to_string(*spec.base);
  return out;
}

nlohmann::json to_json(const CurveSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind;
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : info(spec.kind).defaults) p[k] = spec.get(k);
  j["params"] = p;
  if (spec.base) j["base"] = to_json(*spec.base);
  return j;
}

CurveSpec curve_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(ErrorCode::InvalidSpec, "curve spec needs a string field 'kind'");
  CurveSpec spec;
  spec.kind = j["kind"].get<std::string>();
  const auto& known = info(spec.kind).defaults;
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) {
      if (!known.count(k)) fail(ErrorCode::InvalidSpec, "curve kind " + spec.kind + " has no parameter " + k);
      if (!v.is_number()) fail(ErrorCode::InvalidSpec, "parameter " + k + " must be a number");
      spec.params[k] = v.get<double>();
    }
  }
  if (j.contains("base")) spec.base = std::make_shared<CurveSpec>(curve_spec_from_json(j["base"]));
  return spec;
}

ClosedCurve generate(const CurveSpec& spec) {
  const std::string& k = spec.kind;
  const std::string label = to_string(spec);
  auto positive = [&](const char* key) {
    double v = spec.get(key);
    if (!(v > 0) || !std::isfinite(v)) fail(ErrorCode::InvalidSpec, std::string(key) + " must be positive");
    return v;
  };
  ClosedCurve out = [&]() -> ClosedCurve {
    if (k == "circle") {
      double r = positive("r");
      return ClosedCurve::from_fourier(0, {cd(spec.get("cx"), spec.get("cy")), cd(r, 0)}, label);
    }
    if (k == "ellipse") {
      double a = positive("a"), b = positive("b");
      return ClosedCurve::from_fourier(-1, {cd((a - b) / 2, 0), cd(0, 0), cd((a + b) / 2, 0)}, label);
    }
    if (k == "figure8") {
      double a = positive("a"), b = positive("b");
      return ClosedCurve::from_fourier(-2, {cd(-b / 2, 0), cd(a / 2, 0), cd(0, 0), cd(a / 2, 0), cd(b / 2, 0)},
                                       label);
    }
    if (k == "doubled_circle") return ClosedCurve::from_fourier(2, {cd(positive("r"), 0)}, label);
    if (k == "tangent_circles") {
      double w = positive("window");
      double n = positive("samples");
      if (w > 1.0 || !is_integer(n) || n < 1024) fail(ErrorCode::InvalidSpec, "tangent_circles: window <= 1, samples >= 1024");
      return tangent_circles(w, static_cast<int>(n));
    }
    if (k == "figure2_unclean") {
      double w = positive("window");
      double n = positive("samples");
      if (w > 1.0 || !is_integer(n) || n < 1024) fail(ErrorCode::InvalidSpec, "figure2_unclean: window <= 1, samples >= 1024");
      return figure2_unclean(w, static_cast<int>(n));
    }
    if (k == "odd_rose") {
      double kk = spec.get("k"), eps = spec.get("eps");
      if (!is_integer(kk) || static_cast<long>(kk) % 2 == 0 || std::fabs(kk) < 3 || std::fabs(kk) > 99)
        fail(ErrorCode::InvalidSpec, "odd_rose: k must be an odd integer with 3 <= |k| <= 99");
      if (!(eps > 0 && eps < 1)) fail(ErrorCode::InvalidSpec, "odd_rose: 0 < eps < 1");
      int n = static_cast<int>(kk);
      int lo = std::min(1, n), hi = std::max(1, n);
      std::vector<cd> c(hi - lo + 1, cd(0, 0));
      c[n - lo] += 1.0;
      c[1 - lo] += eps;
      return ClosedCurve::from_fourier(lo, std::move(c), label);
    }
    if (k == "three_petal") {
      double r = positive("r");
      return ClosedCurve::from_fourier(-1, {cd(r / 2, 0), cd(0, 0), cd(0, 0), cd(r / 2, 0)}, label);
    }
    if (k == "random_fourier") {
      double K = spec.get("K"), decay = spec.get("decay");
      if (!is_integer(K) || K < 1 || K > 64) fail(ErrorCode::InvalidSpec, "random_fourier: integer 1 <= K <= 64");
      if (!(decay > 1)) fail(ErrorCode::InvalidSpec, "random_fourier: decay > 1");
      for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        auto rng = rng_for(spec.get("seed"), attempt);
        auto c = gaussian_coefficients(rng, static_cast<int>(K), decay, 1.0);
        ClosedCurve curve = ClosedCurve::from_fourier(-static_cast<int>(K), std::move(c), label);
        if (well_immersed(curve)) return curve;
      }
      fail(ErrorCode::GenerationExhausted, "random_fourier: no immersed draw in 100 attempts");
    }
    if (k == "perturbed") {
      if (!spec.base) fail(ErrorCode::InvalidSpec, "perturbed needs a base curve");
      ClosedCurve base = generate(*spec.base);
      double K = spec.get("K"), amp = spec.get("amplitude");
      if (!is_integer(K) || K < 1 || K > 64) fail(ErrorCode::InvalidSpec, "perturbed: integer 1 <= K <= 64");
      if (!(amp >= 0 && amp < 0.5)) fail(ErrorCode::InvalidSpec, "perturbed: 0 <= amplitude < 0.5");
      auto rng = rng_for(spec.get("seed"), 0x9e3779b9);
      int kk = static_cast<int>(K);
      // Noise coefficients fall off like 1/(1+|n|)^2, scaled by the base's size.
      auto noise = gaussian_coefficients(rng, kk, 1.0, amp * base.diameter());
      for (int n = -kk; n <= kk; ++n) noise[n + kk] /= (1.0 + std::abs(n)) * (1.0 + std::abs(n));
      ClosedCurve curve = [&]() {
        if (base.kind() == CurveKind::Fourier) {
          int lo = std::min(base.min_frequency(), -kk);
          int hi = std::max(base.min_frequency() + static_cast<int>(base.coefficients().size()) - 1, kk);
          std::vector<cd> c(hi - lo + 1, cd(0, 0));
          for (std::size_t i = 0; i < base.coefficients().size(); ++i)
            c[base.min_frequency() + static_cast<int>(i) - lo] += base.coefficients()[i];
          for (int n = -kk; n <= kk; ++n) c[n - lo] += noise[n + kk];
          return ClosedCurve::from_fourier(lo, std::move(c), label);
        }
        std::vector<Vec2> pts = base.samples();
        const int m = static_cast<int>(pts.size());
        for (int i = 0; i < m; ++i) {
          double t = kTwoPi * i / m;
          cd z(0, 0);
          for (int n = -kk; n <= kk; ++n) z += noise[n + kk] * std::polar(1.0, n * t);
          pts[i] += Vec2(z.real(), z.imag());
        }
        return ClosedCurve::from_samples(std::move(pts), label);
      }();
      if (!well_immersed(curve)) fail(ErrorCode::InvalidSpec, "perturbation destroys immersion");
      return curve;
    }
    fail(ErrorCode::InvalidSpec, "unknown curve kind '" + k + "'");
  }();
  require_immersed(out);
  return out;
}

std::vector<CurveSpec> named_corpus() {
  std::vector<CurveSpec> out;
  for (const char* text :
       {"circle", "circle:cx=2,cy=3,r=1.5", "ellipse", "figure8", "figure8:a=2,b=0.7", "doubled_circle",
        "tangent_circles", "figure2_unclean", "odd_rose:k=3,eps=0.5", "odd_rose:k=5,eps=0.3", "odd_rose:k=-3,eps=0.4",
        "three_petal", "random_fourier:seed=1", "random_fourier:seed=2,K=4", "random_fourier:seed=3,K=6,decay=3",
        "perturbed:seed=1,amplitude=0.01,base=figure8", "perturbed:seed=2,amplitude=0.02,base=odd_rose:k=3,eps=0.5"})
    out.push_back(parse_curve_spec(text));
  return out;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i) {
  // splitmix64 of a mix of both inputs.
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + i + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

constexpr int kMaxRejections = 100;
constexpr double kSuiteAngle = 0.05;

constexpr double kSuiteCurvature = 40.0;

bool acceptable(const ClosedCurve& curve, std::size_t max_double_points, std::size_t exact_double_points = 0) {
  if (!well_immersed(curve)) return false;
  // Length-normalized curvature bound keeps 4096-sample arc-length splines accurate.
  if (max_abs_curvature(curve) * curve.length() / kTwoPi > kSuiteCurvature) return false;
  try {
    auto pts = find_double_points(curve);
    if (max_double_points && pts.size() > max_double_points) return false;
    if (exact_double_points && pts.size() != exact_double_points) return false;
    for (const auto& dp : pts) {
      if (!dp.simple) return false;
      double a = dp.tangent_angles[0][1];
      if (std::min(a, kPi - a) < kSuiteAngle) return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

GeneratedLoop place(ClosedCurve curve, std::mt19937_64& rng, int attempts) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), shift(-5.0, 5.0), scale(0.5, 3.0);
  double th = angle(rng), s = scale(rng);
  Mat2 R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Vec2 b(shift(rng), shift(rng));
  GeneratedLoop out{curve.transformed(s * R, b), b, attempts};
  return out;
}

}  // namespace

GeneratedLoop random_central_loop(CentralConstruction kind, std::uint64_t seed) {
  std::normal_distribution<double> N(0.0, 1.0);
  for (int attempt = 1; attempt <= kMaxRejections; ++attempt) {
    std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(attempt)));
    if (kind == CentralConstruction::CaseA) {
      static constexpr int dominants[] = {1, -1, 3, -3, 5};
      int d = dominants[std::uniform_int_distribution<int>(0, 4)(rng)];
      const int K = 7;
      std::vector<cd> c(2 * K + 1, cd(0, 0));
      double sigma = std::uniform_real_distribution<double>(0.05, 0.4)(rng);
      for (int n = -K; n <= K; n += 2) {
        double w = sigma / (1.0 + std::abs(n - d));
        c[n + K] = w * cd(N(rng), N(rng));
      }
      c[d + K] = cd(1, 0);
      ClosedCurve curve = ClosedCurve::from_fourier(-K, std::move(c), "central_case_a");
      if (!acceptable(curve, 0)) continue;
      return place(std::move(curve), rng, attempt);
    }
    // Sine series in both coordinates around (sin t, sin 2t).
    const int K = 5;
    std::vector<cd> c(2 * K + 1, cd(0, 0));
    double sigma = std::uniform_real_distribution<double>(0.02, 0.25)(rng);
    for (int n = 1; n <= K; ++n) {
      double a = (n == 1 ? 1.0 : 0.0) + sigma * N(rng) / n;
      double b = (n == 2 ? 1.0 : 0.0) + sigma * N(rng) / n;
      // a sin nt + i b sin nt = (a + ib)(e^{int} - e^{-int}) / 2i
      cd w = cd(a, b) / cd(0, 2);
      c[K + n] += w;
      c[K - n] -= w;
    }
    ClosedCurve curve = ClosedCurve::from_fourier(-K, std::move(c), "central_case_b");
    if (!acceptable(curve, 0, 1)) continue;
    return place(std::move(curve), rng, attempt);
  }
  fail(ErrorCode::GenerationExhausted, "no acceptable central loop in 100 consecutive draws");
}

GeneratedLoop random_even_index_loop(std::uint64_t seed) {
  std::normal_distribution<double> N(0.0, 1.0);
  for (int attempt = 1; attempt <= kMaxRejections; ++attempt) {
    std::mt19937_64 rng(split_seed(seed ^ 0x5bd1e995, static_cast<std::uint64_t>(attempt)));
    int d = std::bernoulli_distribution(0.5)(rng) ? 2 : -2;
    const int K = 5;
    std::vector<cd> c(2 * K + 1, cd(0, 0));
    double sigma = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
    for (int n = -K; n <= K; ++n) c[n + K] = sigma / (1.0 + std::abs(n - d)) * cd(N(rng), N(rng));
    c[d + K] = cd(1, 0);
    ClosedCurve curve = ClosedCurve::from_fourier(-K, std::move(c), "even_index");
    if (!acceptable(curve, 0)) continue;
    try {
      int w = rotation_index(curve).index;
      if (std::abs(w) != 2) continue;
    } catch (const Error&) {
      continue;
    }
    return place(std::move(curve), rng, attempt);
  }
  fail(ErrorCode::GenerationExhausted, "no acceptable even-index loop in 100 consecutive draws");
}


// Surfaces.

const std::vector<VariantInfo>& surface_variants() {
  static const std::vector<VariantInfo> variants = {
      {"sphere", {{"cx", 0.0}, {"cy", 0.0}, {"cz", 0.0}, {"r", 1.0}}, "center (cx, cy, cz), radius r"},
      {"ellipsoid", {{"a", 1.0}, {"b", 1.0}, {"c", 2.0}}, "semi-axes a, b, c along x, y, z"},
      {"cylinder_over",
       {{"dx", 0.0}, {"dy", 0.0}, {"dz", 1.0}, {"z0", -2.0}, {"z1", 2.0}},
       "plane curve in z = 0 swept along the unit vector d over [z0, z1]"},
      {"helical_tube",
       {{"radius", 0.3}, {"omega", 1.0}, {"z0", -2.0}, {"z1", 2.0}},
       "plane curve translated along the helix (radius cos(omega z), radius sin(omega z), z)"},
      {"graph_patch", {{"k", 0.5}, {"w", 1.0}}, "z = k f(x, y) over [-w, w]^2"},
  };
  return variants;
}

const std::vector<std::string>& graph_shapes() {
  static const std::vector<std::string> shapes = {"paraboloid", "saddle", "wave"};
  return shapes;
}

namespace {

const VariantInfo& surface_info(const std::string& kind) {
  for (const auto& v : surface_variants())
    if (v.kind == kind) return v;
  fail(ErrorCode::InvalidSpec, "unknown surface kind '" + kind + "'");
}

bool takes_curve(const std::string& kind) { return kind == "cylinder_over" || kind == "helical_tube"; }

}  // namespace

double SurfaceSpec::get(const std::string& key) const {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  const auto& d = surface_info(kind).defaults;
  auto jt = d.find(key);
  if (jt == d.end()) fail(ErrorCode::InvalidSpec, "surface kind " + kind + " has no parameter " + key);
  return jt->second;
}

SurfaceSpec parse_surface_spec(const std::string& text) {
  if (text == "fig8-cylinder") return parse_surface_spec("cylinder_over:curve=figure8");
  SurfaceSpec spec;
  auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  const auto& known = surface_info(spec.kind).defaults;
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto eq = rest.find('=', pos);
      if (eq == std::string::npos) fail(ErrorCode::InvalidSpec, "expected key=value in '" + rest.substr(pos) + "'");
      std::string key = rest.substr(pos, eq - pos);
      if (key == "curve") {
        if (!takes_curve(spec.kind)) fail(ErrorCode::InvalidSpec, spec.kind + " takes no curve");
        spec.curve = std::make_shared<CurveSpec>(parse_curve_spec(rest.substr(eq + 1)));
        break;
      }
      auto comma = rest.find(',', eq);
      std::string value = rest.substr(eq + 1, comma == std::string::npos ? std::string::npos : comma - eq - 1);
      if (key == "shape") {
        if (spec.kind != "graph_patch") fail(ErrorCode::InvalidSpec, spec.kind + " takes no shape");
        spec.shape = value;
      } else {
        if (!known.count(key)) fail(ErrorCode::InvalidSpec, "surface kind " + spec.kind + " has no parameter " + key);
        spec.params[key] = parse_number(key, value);
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (takes_curve(spec.kind) && !spec.curve) spec.curve = std::make_shared<CurveSpec>(parse_curve_spec("figure8"));
  if (spec.kind == "graph_patch" && spec.shape.empty()) spec.shape = "saddle";
  return spec;
}

std::string to_string(const SurfaceSpec& spec) {
  std::string out = spec.kind;
  bool first = true;
  auto sep = [&]() {
    out += first ? ":" : ",";
    first = false;
  };
  for (const auto& [k, v] : spec.params) {
    sep();
    out += k + "=" + format_number(v);
  }
  if (!spec.shape.empty()) {
    sep();
    out += "shape=" + spec.shape;
  }
  if (spec.curve) {
    sep();
    out += "curve=" + to_string(*spec.curve);
  }
  return out;
}

nlohmann::json to_json(const SurfaceSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind;
  nlohmann::json p = nlohmann::json::object();
  for (const auto& [k, v] : surface_info(spec.kind).defaults) p[k] = spec.get(k);
  j["params"] = p;
  if (!spec.shape.empty()) j["shape"] = spec.shape;
  if (spec.curve) j["curve"] = to_json(*spec.curve);
  return j;
}

SurfaceSpec surface_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    fail(ErrorCode::InvalidSpec, "surface spec needs a string field 'kind'");
  SurfaceSpec spec;
  spec.kind = j["kind"].get<std::string>();
  const auto& known = surface_info(spec.kind).defaults;
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) {
      if (!known.count(k)) fail(ErrorCode::InvalidSpec, "surface kind " + spec.kind + " has no parameter " + k);
      if (!v.is_number()) fail(ErrorCode::InvalidSpec, "parameter " + k + " must be a number");
      spec.params[k] = v.get<double>();
    }
  }
  if (j.contains("shape")) {
    if (!j["shape"].is_string()) fail(ErrorCode::InvalidSpec, "shape must be a string");
    spec.shape = j["shape"].get<std::string>();
  }
  if (j.contains("curve")) spec.curve = std::make_shared<CurveSpec>(curve_spec_from_json(j["curve"]));
  if (takes_curve(spec.kind) && !spec.curve) spec.curve = std::make_shared<CurveSpec>(parse_curve_spec("figure8"));
  if (spec.kind == "graph_patch" && spec.shape.empty()) spec.shape = "saddle";
  return spec;
}

namespace {

// The chart's poles sit at A R (0, 0, +-1) for a fixed generic rotation R, so
// that coordinate planes through the center avoid them.
Chart ellipsoid_chart(const Vec3& center, const Vec3& axes) {
  const Mat3 AR = axes.asDiagonal() * Eigen::AngleAxisd(0.7, Vec3(1.0, 2.0, 0.5).normalized()).toRotationMatrix();
  Chart c;
  c.u0 = 0.0;
  c.u1 = kTwoPi;
  c.v0 = -kPi / 2;
  c.v1 = kPi / 2;
  c.periodic_u = true;
  c.cells_u = 128;
  c.cells_v = 64;
  c.eval = [center, AR](double u, double v) {
    double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    ChartPoint p;
    p.position = center + AR * Vec3(cv * cu, cv * su, sv);
    p.du = AR * Vec3(-cv * su, cv * cu, 0.0);
    p.dv = AR * Vec3(-sv * cu, -sv * su, cv);
    return p;
  };
  return c;
}

void require_range(const SurfaceSpec& spec, const char* key, double lo, double hi) {
  double x = spec.get(key);
  if (!(x > lo && x < hi)) {
    fail(ErrorCode::InvalidSpec, spec.kind + ": " + key + " must lie in (" + format_number(lo) + ", " +
                                     format_number(hi) + ")");
  }
}

}  // namespace

Surface generate_surface(const SurfaceSpec& spec) {
  const std::string& k = spec.kind;
  surface_info(k);
  const double big = 1e6;
  for (const auto& [key, v] : spec.params)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidSpec, "parameter " + key + " must be finite");
  if (k == "sphere") {
    require_range(spec, "r", 0.0, big);
    return Surface::analytic(to_string(spec), {ellipsoid_chart(Vec3(spec.get("cx"), spec.get("cy"), spec.get("cz")),
                                                               Vec3::Constant(spec.get("r")))});
  }
  if (k == "ellipsoid") {
    for (const char* key : {"a", "b", "c"}) require_range(spec, key, 0.0, big);
    return Surface::analytic(to_string(spec),
                             {ellipsoid_chart(Vec3::Zero(), Vec3(spec.get("a"), spec.get("b"), spec.get("c")))});
  }
  if (k == "cylinder_over" || k == "helical_tube") {
    if (!spec.curve) fail(ErrorCode::InvalidSpec, k + " needs a curve");
    auto curve = std::make_shared<const ClosedCurve>(generate(*spec.curve));
    const double z0 = spec.get("z0"), z1 = spec.get("z1");
    if (!(z1 > z0)) fail(ErrorCode::InvalidSpec, k + ": z0 < z1 required");
    Chart c;
    c.u0 = 0.0;
    c.u1 = kTwoPi;
    c.v0 = z0;
    c.v1 = z1;
    c.periodic_u = true;
    c.cells_u = std::max(256, curve->resolution());
    if (k == "cylinder_over") {
      Vec3 d(spec.get("dx"), spec.get("dy"), spec.get("dz"));
      double len = d.norm();
      if (!(len > 0)) fail(ErrorCode::InvalidSpec, "cylinder_over: direction must be nonzero");
      d /= len;
      if (std::fabs(d.z()) < 1e-3) fail(ErrorCode::InvalidSpec, "cylinder_over: direction parallel to the curve plane");
      c.cells_v = 32;
      c.eval = [curve, d](double t, double z) {
        CurvePoint q = curve->evaluate(t);
        return ChartPoint{Vec3(q.position.x(), q.position.y(), 0.0) + z * d,
                          Vec3(q.velocity.x(), q.velocity.y(), 0.0), d};
      };
    } else {
      const double rho = spec.get("radius"), omega = spec.get("omega");
      if (!(rho >= 0 && rho < big) || !(std::fabs(omega) < big))
        fail(ErrorCode::InvalidSpec, "helical_tube: radius >= 0 and finite omega required");
      c.cells_v = 64;
      c.eval = [curve, rho, omega](double t, double z) {
        CurvePoint q = curve->evaluate(t);
        double cz = std::cos(omega * z), sz = std::sin(omega * z);
        return ChartPoint{Vec3(q.position.x() + rho * cz, q.position.y() + rho * sz, z),
                          Vec3(q.velocity.x(), q.velocity.y(), 0.0), Vec3(-rho * omega * sz, rho * omega * cz, 1.0)};
      };
    }
    return Surface::analytic(to_string(spec), {c});
  }
  // graph_patch
  const double kk = spec.get("k"), w = spec.get("w");
  require_range(spec, "w", 0.0, big);
  if (!(std::fabs(kk) < big)) fail(ErrorCode::InvalidSpec, "graph_patch: k out of range");
  const auto& shapes = graph_shapes();
  if (std::find(shapes.begin(), shapes.end(), spec.shape) == shapes.end())
    fail(ErrorCode::InvalidSpec, "graph_patch: unknown shape '" + spec.shape + "'");
  Chart c;
  c.u0 = c.v0 = -w;
  c.u1 = c.v1 = w;
  c.cells_u = c.cells_v = 64;
  const std::string shape = spec.shape;
  c.eval = [kk, shape](double x, double y) {
    double f, fx, fy;
    if (shape == "paraboloid") {
      f = x * x + y * y, fx = 2 * x, fy = 2 * y;
    } else if (shape == "saddle") {
      f = x * x - y * y, fx = 2 * x, fy = -2 * y;
    } else {
      f = std::sin(kPi * x) * std::sin(kPi * y);
      fx = kPi * std::cos(kPi * x) * std::sin(kPi * y);
      fy = kPi * std::sin(kPi * x) * std::cos(kPi * y);
    }
    return ChartPoint{Vec3(x, y, kk * f), Vec3(1.0, 0.0, kk * fx), Vec3(0.0, 1.0, kk * fy)};
  };
  return Surface::analytic(to_string(spec), {c});
}

}  // namespace xcut
