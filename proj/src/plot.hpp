#pragma once

#include "slice.hpp"
#include "sweep.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xcut {

/// A self-contained SVG figure in data coordinates (y up).
class SvgPlot {
 public:
  enum class Marker { Dot, Ring, Cross };

  explicit SvgPlot(std::string title = {}) : title_(std::move(title)) {}

  void path(std::vector<Vec2> points, bool closed, std::string color, double width = 1.5);
  void mark(const Vec2& at, Marker shape, std::string color, std::string label = {});

  /// Throws InvalidArgument for an empty figure.
  std::string render(int pixels = 640) const;
  /// Throws IoError.
  void write(const std::string& file, int pixels = 640) const;

 private:
  struct Path {
    std::vector<Vec2> points;
    bool closed;
    std::string color;
    double width;
  };
  struct Mark {
    Vec2 at;
    Marker shape;
    std::string color;
    std::string label;
  };
  std::string title_;
  std::vector<Path> paths_;
  std::vector<Mark> marks_;
};

/// Trace with its double points (rings, simple; crosses, higher order) and the
/// center, when given.
SvgPlot plot_curve(const ClosedCurve& curve, const std::optional<Vec2>& center, const std::string& title = {});

/// Oblique view of 3D data in the frame of `base`: in-plane coordinates (x, y)
/// and height z map to (x + 0.4 y, z + 0.4 y).
Vec2 oblique(const Plane3& base, const Vec3& x);

/// Stacked cross-sections of a sweep with the central curve overlaid.
/// Throws InvalidArgument for an empty sweep.
SvgPlot plot_sweep(const TubularSweep& sweep, const std::string& title = {});

/// Cross-cuts in the oblique view of `base`, each with its center marked.
SvgPlot plot_cuts(const Plane3& base, const std::vector<CrossCut>& cuts, const std::vector<Vec3>& centers,
                  const std::string& title = {});

}  // namespace xcut
