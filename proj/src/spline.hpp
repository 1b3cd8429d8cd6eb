#pragma once

#include "geometry.hpp"

#include <vector>

namespace xcut {

/// C2 periodic cubic spline through points placed at uniform knots
/// t_k = 2 pi k / N on [0, 2 pi).
class PeriodicSpline {
 public:
  explicit PeriodicSpline(std::vector<Vec2> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec2>& points() const { return points_; }
  double knot_spacing() const { return h_; }

  /// Position, first and second derivative at t (any real t).
  void evaluate(double t, Vec2* p, Vec2* d1, Vec2* d2) const;

 private:
  std::vector<Vec2> points_;
  std::vector<Vec2> moments_;  // second derivatives at the knots
  double h_;
};

/// Solves the cyclic system with 1, 4, 1 stencil: x[k-1] + 4 x[k] + x[k+1] = r[k].
std::vector<Vec2> solve_cyclic_141(const std::vector<Vec2>& rhs);

}  // namespace xcut
