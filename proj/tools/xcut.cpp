// Command-line front end over the C API. Reports are JSON documents (see
// docs/report-format.md); exit codes: 0 result produced, 1 Inconsistent
// verdict, failed cross-check or computational error, 2 usage or input error.

#include "xcut/xcut.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kDefaultSeed = 20240601;

// Raised when a C API call fails; carries the status for the exit code.
struct ApiError {
  xcut_status status;
  std::string message;
};

void check(xcut_status s) {
  if (s != XCUT_OK) throw ApiError{s, xcut_last_error()};
}

bool is_input_error(xcut_status s) {
  return s == XCUT_E_INVALID_ARGUMENT || s == XCUT_E_INVALID_SPEC || s == XCUT_E_IO || s == XCUT_E_PARSE;
}

json take_json(char* text) {
  std::unique_ptr<char, decltype(&xcut_string_free)> owned(text, &xcut_string_free);
  return json::parse(owned.get());
}

using Curve = std::unique_ptr<xcut_curve, decltype(&xcut_curve_free)>;
using Surf = std::unique_ptr<xcut_surface, decltype(&xcut_surface_free)>;
using Sweep = std::unique_ptr<xcut_sweep, decltype(&xcut_sweep_free)>;

struct CurveSource {
  std::string gen, path;
  void add(CLI::App* app, const std::string& prefix = "") {
    auto* g = app->add_option("--" + prefix + "gen", gen, "corpus curve spec, e.g. figure8 or odd_rose:k=3,eps=0.5");
    auto* f = app->add_option("--" + prefix + "curve", path, "curve file (xcut-curve JSON)");
    g->excludes(f);
  }
  bool empty() const { return gen.empty() && path.empty(); }
  json describe() const { return gen.empty() ? json{{"curve", path}} : json{{"gen", gen}}; }
  Curve load() const {
    xcut_curve* c = nullptr;
    check(gen.empty() ? xcut_curve_read(path.c_str(), &c) : xcut_curve_generate(gen.c_str(), &c));
    return Curve(c, &xcut_curve_free);
  }
};

struct SurfaceSource {
  std::string gen, path;
  std::vector<double> normal{0, 0, 1}, point{0, 0, 0};
  void add(CLI::App* app) {
    auto* g = app->add_option("--gen", gen, "corpus surface spec, e.g. fig8-cylinder, sphere, ellipsoid:c=2");
    auto* f = app->add_option("--surface", path, "surface file (.obj mesh or xcut-surface JSON)");
    g->excludes(f);
    app->add_option("--normal", normal, "cutting plane normal")->expected(3)->delimiter(',');
    app->add_option("--point", point, "cutting plane base point")->expected(3)->delimiter(',');
  }
  bool empty() const { return gen.empty() && path.empty(); }
  json describe() const {
    json j = gen.empty() ? json{{"surface", path}} : json{{"gen", gen}};
    j["plane"] = {{"normal", normal}, {"point", point}};
    return j;
  }
  Surf load() const {
    xcut_surface* s = nullptr;
    check(gen.empty() ? xcut_surface_read(path.c_str(), &s) : xcut_surface_generate(gen.c_str(), &s));
    return Surf(s, &xcut_surface_free);
  }
  xcut_plane plane() const {
    xcut_plane p;
    for (int i = 0; i < 3; ++i) {
      p.normal[i] = normal[i];
      p.point[i] = point[i];
    }
    return p;
  }
};

// Tolerance overrides; unset options keep the library defaults.
struct Overrides {
  std::optional<double> center_tolerance, search_tolerance, angle_tolerance, transversality_tolerance, tilt_max;
  std::optional<int> samples, slice_samples;
  std::string config_file;

  void add(CLI::App* app) {
    app->add_option("--center-tolerance", center_tolerance, "relative center tolerance");
    app->add_option("--search-tolerance", search_tolerance, "relative search-mode acceptance");
    app->add_option("--angle-tolerance", angle_tolerance, "cleanness angle (radians)");
    app->add_option("--transversality-tolerance", transversality_tolerance, "minimum |nu x u| on a cut");
    app->add_option("--tilt-max", tilt_max, "largest tilt angle (radians)");
    app->add_option("--samples", samples, "match and Hausdorff sample count");
    app->add_option("--slice-samples", slice_samples, "spline knots per cross-cut");
    app->add_option("--config", config_file, "JSON file of further overrides")->check(CLI::ExistingFile);
  }

  json to_json() const {
    json j = json::object();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw ApiError{XCUT_E_PARSE, "config file: " + std::string(e.what())};
      }
      if (!j.is_object()) throw ApiError{XCUT_E_PARSE, "config file must hold a JSON object"};
    }
    if (center_tolerance) j["center_tolerance"] = *center_tolerance;
    if (search_tolerance) j["search_tolerance"] = *search_tolerance;
    if (angle_tolerance) j["angle_tolerance"] = *angle_tolerance;
    if (transversality_tolerance) j["transversality_tolerance"] = *transversality_tolerance;
    if (tilt_max) j["tilt_max"] = *tilt_max;
    if (samples) {
      j["match_samples"] = *samples;
      j["hausdorff_samples"] = *samples;
    }
    if (slice_samples) j["slice_samples"] = *slice_samples;
    return j;
  }
};

// Non-finite numbers arrive as null.
std::string fmt(const json& x) {
  if (!x.is_number()) return "n/a";
  std::ostringstream os;
  os.precision(6);
  os << x.get<double>();
  return os.str();
}

// One line per command for the terminal.
std::string summary(const std::string& command, const json& r) {
  if (command == "analyze-curve") {
    return r.value("name", std::string("curve")) + ": index " + std::to_string(r.at("rotation_index").get<int>()) +
           (r.at("clean").get<bool>() ? ", clean, " : ", unclean, ") + std::to_string(r.at("double_points").size()) +
           " double point(s), " + (r.at("center_found").get<bool>() ? "central" : "no center at the centroid");
  }
  if (command == "match") return "orientation " + r.at("orientation").get<std::string>() + ", residual " + fmt(r.at("residual"));
  if (command == "classify-curve") return "case " + r.at("case").get<std::string>();
  if (command == "slice")
    return std::to_string(r.at("compact").size()) + " compact cross-cut(s), " + std::to_string(r.at("open").size()) +
           " open component(s)";
  if (command == "sweep")
    return std::to_string(r.at("stations").size()) + " stations, rotation index " +
           std::to_string(r.at("rotation_index").get<int>()) +
           (r.at("any_fallback").get<bool>() ? ", centroid fallback used" : "");
  if (command == "classify-surface") return "verdict " + r.at("verdict").get<std::string>() + ": " + r.at("reason").get<std::string>();
  if (command == "demo sphere-tilt")
    return "center displacement " + fmt(r.at("displacement")) + " (lambda sin phi = " +
           fmt(r.at("expected_displacement")) + ")";
  if (command == "demo dichotomy")
    return std::to_string(r.at("case_a").get<int>()) + " CaseA, " + std::to_string(r.at("case_b").get<int>()) +
           " CaseB, " + std::to_string(r.at("violations").get<int>()) + " violation(s)";
  if (command == "demo even-index")
    return std::to_string(r.at("central_found").get<int>()) + " central loop(s) of even index among " +
           std::to_string(r.at("entries").size());
  if (command == "demo reflections")
    return "circle " + r["circle"].at("orientation").get<std::string>() + ", figure-8 " +
           r["figure8"].at("orientation").get<std::string>();
  if (command == "demo unclean-loop")
    return "reflection match " + r["match"].at("orientation").get<std::string>() + ", clean " +
           (r.at("clean").get<bool>() ? "yes" : "no");
  return command;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xcut: central symmetry of plane loops and central cross-cuts of surfaces"};
  app.require_subcommand(1);
  std::string report_path = "-", plot_path;
  bool timing = false;
  std::uint64_t seed = kDefaultSeed;
  Overrides over;

  auto common = [&](CLI::App* sub, bool plots = true) {
    sub->add_option("--report", report_path, "report file ('-' for stdout)");
    if (plots) sub->add_option("--plot", plot_path, "SVG file to write");
    sub->add_flag("--timing", timing, "add wall-clock timing to the report");
    over.add(sub);
  };

  CurveSource curve, curve_b;
  std::vector<double> reflect;
  auto* analyze = app.add_subcommand("analyze-curve", "index, double points, cleanness and centroid of a curve");
  curve.add(analyze);
  common(analyze);
  auto* match = app.add_subcommand("match", "decide whether curve b reparametrizes curve a");
  curve.add(match, "a-");
  curve_b.add(match, "b-");
  match->add_option("--reflect", reflect, "use the reflection of a through this point as b")->expected(2)->delimiter(',');
  common(match);
  auto* classify = app.add_subcommand("classify-curve", "central-symmetry detection and the CaseA/CaseB dichotomy");
  curve.add(classify);
  common(classify);

  std::string gen_kind, gen_spec, gen_out;
  double gen_scale = 1.0;
  auto* gen = app.add_subcommand("gen", "write a corpus curve or surface to a file");
  gen->add_option("kind", gen_kind, "curve or surface")->required()->check(CLI::IsMember({"curve", "surface"}));
  gen->add_option("spec", gen_spec, "corpus spec")->required();
  gen->add_option("-o,--output", gen_out, "output file (surfaces: .json record or .obj tessellation)")->required();
  gen->add_option("--scale", gen_scale, "tessellation density for .obj output");

  SurfaceSource surface;
  auto* slice = app.add_subcommand("slice", "cross-cuts of a surface by a plane");
  surface.add(slice);
  common(slice);
  double half_width = 0.5;
  int steps = 9, component = -1;
  auto* sweep = app.add_subcommand("sweep", "track one cross-cut through parallel planes");
  surface.add(sweep);
  sweep->add_option("--half-width", half_width, "slab half-width a");
  sweep->add_option("--steps", steps, "number of heights in [-a, a]");
  sweep->add_option("--component", component, "index of the base cut (default: nearest the plane point)");
  common(sweep);
  auto* csurf = app.add_subcommand("classify-surface", "figure-8 test, CX sampling, trapping, axis and cylinder checks");
  surface.add(csurf);
  std::optional<double> pipe_half_width;
  csurf->add_option("--half-width", pipe_half_width, "initial slab half-width (default: a quarter of the cut diameter)");
  common(csurf);

  std::string demo_name;
  double lambda = 0.5, phi = 0.1, azimuth = 0.0;
  int count = 100, count_a = 100, count_b = 100;
  auto* demo = app.add_subcommand("demo", "experiments: sphere-tilt, reflections, unclean-loop, dichotomy, even-index");
  demo->add_option("name", demo_name, "demo name")
      ->required()
      ->check(CLI::IsMember({"sphere-tilt", "reflections", "unclean-loop", "dichotomy", "even-index"}));
  demo->add_option("--lambda", lambda, "sphere-tilt: height of c on the axis");
  demo->add_option("--phi", phi, "sphere-tilt: tilt angle");
  demo->add_option("--azimuth", azimuth, "sphere-tilt: tilt azimuth");
  demo->add_option("--count", count, "even-index: number of loops");
  demo->add_option("--count-a", count_a, "dichotomy: CaseA loops");
  demo->add_option("--count-b", count_b, "dichotomy: CaseB loops");
  demo->add_option("--seed", seed, "suite seed");
  common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    CLI::App* at = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << "error: " << e.what() << "\n\n" << at->help();
    return kExitUsage;
  }

  auto usage = [&](const std::string& msg) {
    std::cerr << "error: " << msg << "\n\n" << app.help();
    return kExitUsage;
  };

  CLI::App* sub = app.get_subcommands().front();
  std::string command = sub->get_name();
  if (command == "demo") command += " " + demo_name;
  json report = {{"schema_version", 1},
                 {"command", command},
                 {"inputs", json::object()},
                 {"config", json::object()},
                 {"results", json::object()},
                 {"oracle", json::array()},
                 {"errors", json::array()}};
  const char* plot = plot_path.empty() ? nullptr : plot_path.c_str();
  const auto t0 = std::chrono::steady_clock::now();
  int rc = kExitOk;

  try {
    if (sub == gen) {
      if (gen_kind == "curve") {
        xcut_curve* c = nullptr;
        check(xcut_curve_generate(gen_spec.c_str(), &c));
        Curve owned(c, &xcut_curve_free);
        check(xcut_curve_write(c, gen_out.c_str()));
      } else {
        check(xcut_surface_spec_write(gen_spec.c_str(), gen_scale, gen_out.c_str()));
      }
      std::cerr << "wrote " << gen_out << "\n";
      return kExitOk;
    }

    const std::string cfg_text = over.to_json().dump();
    char* effective = nullptr;
    check(xcut_config(cfg_text.c_str(), &effective));
    report["config"] = take_json(effective);
    if (sub == demo) report["config"]["seed"] = seed;

    char* out = nullptr;
    if (sub == analyze || sub == classify) {
      if (curve.empty()) return usage("give --gen or --curve");
      report["inputs"] = curve.describe();
      Curve c = curve.load();
      check(sub == analyze ? xcut_analyze_curve(c.get(), cfg_text.c_str(), plot, &out)
                           : xcut_classify_curve(c.get(), cfg_text.c_str(), plot, &out));
    } else if (sub == match) {
      if (curve.empty()) return usage("give --a-gen or --a-curve");
      if (curve_b.empty() == reflect.empty()) return usage("give exactly one of --b-gen, --b-curve, --reflect");
      report["inputs"] = {{"a", curve.describe()}};
      Curve a = curve.load();
      Curve b(nullptr, &xcut_curve_free);
      if (!reflect.empty()) {
        report["inputs"]["b"] = {{"reflection_of_a_through", reflect}};
        const double A[4] = {-1, 0, 0, -1}, shift[2] = {2 * reflect[0], 2 * reflect[1]};
        xcut_curve* r = nullptr;
        check(xcut_curve_transform(a.get(), A, shift, &r));
        b.reset(r);
      } else {
        report["inputs"]["b"] = curve_b.describe();
        b = curve_b.load();
      }
      check(xcut_match(a.get(), b.get(), cfg_text.c_str(), plot, &out));
    } else if (sub == slice || sub == sweep || sub == csurf) {
      if (surface.empty()) return usage("give --gen or --surface");
      report["inputs"] = surface.describe();
      Surf s = surface.load();
      xcut_plane p = surface.plane();
      if (sub == slice) {
        check(xcut_slice(s.get(), &p, cfg_text.c_str(), plot, &out));
      } else if (sub == sweep) {
        report["inputs"]["half_width"] = half_width;
        report["inputs"]["steps"] = steps;
        if (component >= 0) report["inputs"]["component"] = component;
        xcut_sweep* w = nullptr;
        check(xcut_sweep_create(s.get(), &p, half_width, steps, component, cfg_text.c_str(), &w));
        Sweep owned(w, &xcut_sweep_free);
        check(xcut_sweep_report(w, plot, &out));
      } else {
        json cfg = json::parse(cfg_text);
        if (pipe_half_width) cfg["half_width"] = *pipe_half_width;
        check(xcut_run_pipeline(s.get(), &p, cfg.dump().c_str(), plot, nullptr, &out));
      }
    } else if (sub == demo) {
      json params = json::object();
      if (demo_name == "sphere-tilt") params = {{"lambda", lambda}, {"phi", phi}, {"azimuth", azimuth}};
      if (demo_name == "dichotomy") params = {{"count_a", count_a}, {"count_b", count_b}, {"seed", seed}};
      if (demo_name == "even-index") params = {{"count", count}, {"seed", seed}};
      report["inputs"] = params;
      check(xcut_demo(demo_name.c_str(), params.dump().c_str(), cfg_text.c_str(), plot, &out));
    }
    json an = take_json(out);
    report["results"] = an["results"];
    report["oracle"] = an["oracle"];
    if (an["violation"].get<bool>()) rc = kExitViolation;
    std::ostream& line = report_path == "-" ? std::cerr : std::cout;
    line << summary(command, report["results"]) << (rc == kExitViolation ? " [violation]" : "") << "\n";
  } catch (const ApiError& e) {
    report["errors"].push_back({{"status", xcut_status_name(e.status)}, {"message", e.message}});
    std::cerr << "error: " << e.message << "\n";
    rc = is_input_error(e.status) ? kExitUsage : kExitViolation;
  }

  if (timing) {
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report["timing"] = {{"elapsed_seconds", dt}};
  }
  std::string text = report.dump(2) + "\n";
  if (report_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(report_path);
    if (!f) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return kExitUsage;
    }
    f << text;
  }
  return rc;
}
