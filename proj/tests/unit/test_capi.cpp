// Exercises the shared library through its C header only.

#include <doctest.h>

#include "xcut/xcut.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string take(char* s) {
  std::string out = s ? s : "";
  xcut_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("capi: status names and last error") {
  CHECK(std::strcmp(xcut_status_name(XCUT_OK), "Ok") == 0);
  CHECK(std::strcmp(xcut_status_name(XCUT_E_PARSE), "ParseError") == 0);
  CHECK(std::strlen(xcut_version()) > 0);
  xcut_curve* c = nullptr;
  CHECK(xcut_curve_generate("no_such_curve", &c) == XCUT_E_INVALID_SPEC);
  CHECK(c == nullptr);
  CHECK(std::string(xcut_last_error()).find("no_such_curve") != std::string::npos);
  CHECK(xcut_curve_generate(nullptr, &c) == XCUT_E_INVALID_ARGUMENT);
  CHECK(xcut_curve_length(nullptr, nullptr) == XCUT_E_INVALID_ARGUMENT);
  xcut_curve_free(nullptr);
  xcut_surface_free(nullptr);
  xcut_sweep_free(nullptr);
}

TEST_CASE("capi: curve from Fourier coefficients") {
  // (cos t, sin 2t): the unit figure-8.
  const double co[] = {-0.5, 0, 0.5, 0, 0, 0, 0.5, 0, 0.5, 0};
  xcut_curve* c = nullptr;
  REQUIRE(xcut_curve_from_fourier(-2, co, 5, &c) == XCUT_OK);
  double e[6];
  REQUIRE(xcut_curve_evaluate(c, kPi / 2, e) == XCUT_OK);
  CHECK(std::hypot(e[0], e[1]) < 1e-15);
  CHECK(std::fabs(e[2] + 1) < 1e-14);
  CHECK(std::fabs(e[3] + 2) < 1e-14);
  int index = 7;
  REQUIRE(xcut_curve_rotation_index(c, &index) == XCUT_OK);
  CHECK(index == 0);
  double g[2];
  REQUIRE(xcut_curve_centroid(c, g) == XCUT_OK);
  CHECK(std::hypot(g[0], g[1]) < 1e-12);

  xcut_symmetry s;
  REQUIRE(xcut_detect_center(c, 0, nullptr, &s) == XCUT_OK);
  CHECK(s.center_found == 1);
  CHECK(s.orientation == XCUT_REVERSES);

  // Translating moves the centroid by the shift.
  const double A[] = {1, 0, 0, 1}, b[] = {2, -3};
  xcut_curve* moved = nullptr;
  REQUIRE(xcut_curve_transform(c, A, b, &moved) == XCUT_OK);
  REQUIRE(xcut_curve_centroid(moved, g) == XCUT_OK);
  CHECK(std::hypot(g[0] - 2, g[1] + 3) < 1e-12);
  char* json = nullptr;
  REQUIRE(xcut_classify_curve(moved, nullptr, nullptr, &json) == XCUT_OK);
  CHECK(take(json).find("\"case\":\"CaseB\"") != std::string::npos);
  xcut_curve_free(moved);
  xcut_curve_free(c);
}

TEST_CASE("capi: curve from samples and a config override") {
  std::vector<double> pts;
  for (int k = 0; k < 200; ++k) {
    const double t = 2 * kPi * k / 200;
    pts.push_back(std::cos(t));
    pts.push_back(std::sin(t));
  }
  xcut_curve* c = nullptr;
  REQUIRE(xcut_curve_from_samples(pts.data(), 200, &c) == XCUT_OK);
  double len = 0;
  REQUIRE(xcut_curve_length(c, &len) == XCUT_OK);
  CHECK(std::fabs(len - 2 * kPi) < 1e-4);
  char* json = nullptr;
  CHECK(xcut_analyze_curve(c, "{\"centre\": 1}", nullptr, &json) == XCUT_E_INVALID_ARGUMENT);
  CHECK(json == nullptr);
  CHECK(xcut_analyze_curve(c, "{not json", nullptr, &json) == XCUT_E_PARSE);
  REQUIRE(xcut_config("{\"center_tolerance\": 2e-6}", &json) == XCUT_OK);
  CHECK(take(json).find("\"center_tolerance\":2e-06") != std::string::npos);
  xcut_curve_free(c);
}

TEST_CASE("capi: sphere sweep and the tilt law") {
  xcut_surface* s = nullptr;
  REQUIRE(xcut_surface_generate("sphere", &s) == XCUT_OK);
  const xcut_plane p{{0, 0, 1}, {0, 0, 0.5}};
  xcut_sweep* w = nullptr;
  REQUIRE(xcut_sweep_create(s, &p, 0.1, 5, -1, nullptr, &w) == XCUT_OK);
  size_t count = 0;
  REQUIRE(xcut_sweep_central_curve(w, nullptr, 0, &count) == XCUT_OK);
  REQUIRE(count == 5);
  std::vector<double> mu(3 * count);
  REQUIRE(xcut_sweep_central_curve(w, mu.data(), count, &count) == XCUT_OK);
  for (size_t k = 0; k < count; ++k) CHECK(std::hypot(mu[3 * k], mu[3 * k + 1]) < 1e-9);
  double straight = 1;
  REQUIRE(xcut_axis_straightness(mu.data(), count, &straight) == XCUT_OK);
  CHECK(straight < 1e-9);

  // Tilting the cut through c = (0, 0, 1/2) by phi moves its center to (v.c) v.
  const double phi = 0.1, v[3] = {std::sin(phi), 0, std::cos(phi)};
  double c[3];
  REQUIRE(xcut_tilt_center(s, w, 0.0, v, nullptr, c) == XCUT_OK);
  const double vc = 0.5 * v[2];
  CHECK(std::fabs(c[0] - vc * v[0]) < 1e-6);
  CHECK(std::fabs(c[2] - vc * v[2]) < 1e-6);
  xcut_sweep_free(w);

  const xcut_plane far{{0, 0, 1}, {0, 0, 3}};
  CHECK(xcut_sweep_create(s, &far, 0.1, 5, -1, nullptr, &w) != XCUT_OK);
  xcut_surface_free(s);
}

TEST_CASE("capi: pipeline result struct") {
  xcut_surface* s = nullptr;
  REQUIRE(xcut_surface_generate("sphere", &s) == XCUT_OK);
  const xcut_plane p{{0, 0, 1}, {0, 0, 0}};
  xcut_pipeline_result r;
  REQUIRE(xcut_run_pipeline(s, &p, nullptr, nullptr, &r, nullptr) == XCUT_OK);
  CHECK(r.verdict == XCUT_NOT_APPLICABLE);
  xcut_surface_free(s);
}

TEST_CASE("capi: demo and unknown demo") {
  char* json = nullptr;
  REQUIRE(xcut_demo("reflections", nullptr, nullptr, nullptr, &json) == XCUT_OK);
  std::string r = take(json);
  CHECK(r.find("Preserves") != std::string::npos);
  CHECK(r.find("Reverses") != std::string::npos);
  CHECK(xcut_demo("nope", nullptr, nullptr, nullptr, &json) == XCUT_E_INVALID_ARGUMENT);
}
