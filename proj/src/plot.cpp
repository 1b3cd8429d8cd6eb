#include "plot.hpp"

#include "double_points.hpp"
#include "error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace xcut {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed precision keeps the output byte-stable.
std::string f2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::vector<Vec2> trace(const ClosedCurve& c, int n) {
  std::vector<Vec2> out(n);
  for (int k = 0; k < n; ++k) out[k] = c.position(kTwoPi * k / n);
  return out;
}

}  // namespace

void SvgPlot::path(std::vector<Vec2> points, bool closed, std::string color, double width) {
  paths_.push_back({std::move(points), closed, std::move(color), width});
}

void SvgPlot::mark(const Vec2& at, Marker shape, std::string color, std::string label) {
  marks_.push_back({at, shape, std::move(color), std::move(label)});
}

std::string SvgPlot::render(int pixels) const {
  if (paths_.empty() && marks_.empty()) fail(ErrorCode::InvalidArgument, "nothing to plot");
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  auto grow = [&](const Vec2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const auto& p : paths_)
    for (const auto& q : p.points) grow(q);
  for (const auto& m : marks_) grow(m.at);
  double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-9});
  const double margin = 0.08 * pixels, top = title_.empty() ? 0.0 : 28.0;
  const double scale = (pixels - 2 * margin) / span;
  const Vec2 mid = 0.5 * (lo + hi);
  auto px = [&](const Vec2& p) { return 0.5 * pixels + (p.x() - mid.x()) * scale; };
  auto py = [&](const Vec2& p) { return top + 0.5 * pixels - (p.y() - mid.y()) * scale; };
  auto X = [&](const Vec2& p) { return f2(px(p)); };
  auto Y = [&](const Vec2& p) { return f2(py(p)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels + top
     << "\" viewBox=\"0 0 " << pixels << " " << pixels + top << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title_.empty())
    os << "<text x=\"" << pixels / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"15\">" << escape(title_) << "</text>\n";
  for (const auto& p : paths_) {
    if (p.points.empty()) continue;
    os << "<path fill=\"none\" stroke=\"" << p.color << "\" stroke-width=\"" << f2(p.width)
       << "\" stroke-linejoin=\"round\" d=\"M";
    for (std::size_t k = 0; k < p.points.size(); ++k) os << (k ? " L" : "") << X(p.points[k]) << "," << Y(p.points[k]);
    os << (p.closed ? " Z" : "") << "\"/>\n";
  }
  for (const auto& m : marks_) {
    const double mx = px(m.at), my = py(m.at);
    const std::string x = f2(mx), y = f2(my);
    switch (m.shape) {
      case Marker::Dot:
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3.5\" fill=\"" << m.color << "\"/>\n";
        break;
      case Marker::Ring:
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"6\" fill=\"none\" stroke=\"" << m.color
           << "\" stroke-width=\"2\"/>\n";
        break;
      case Marker::Cross:
        os << "<path stroke=\"" << m.color << "\" stroke-width=\"2\" d=\"M" << f2(mx - 6) << "," << f2(my - 6)
           << " l12,12 m0,-12 l-12,12\"/>\n";
        break;
    }
    if (!m.label.empty())
      os << "<text x=\"" << f2(mx + 9) << "\" y=\"" << f2(my - 9)
         << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << m.color << "\">" << escape(m.label)
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void SvgPlot::write(const std::string& file, int pixels) const {
  std::string text = render(pixels);
  std::ofstream out(file);
  if (!out) fail(ErrorCode::IoError, "cannot write " + file);
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + file);
}

SvgPlot plot_curve(const ClosedCurve& curve, const std::optional<Vec2>& center, const std::string& title) {
  SvgPlot plot(title.empty() ? curve.name() : title);
  plot.path(trace(curve, 2048), true, kPalette[0]);
  try {
    for (const auto& d : find_double_points(curve))
      plot.mark(d.location, d.simple ? SvgPlot::Marker::Ring : SvgPlot::Marker::Cross, "#ff7f0e",
                d.simple ? "double point" : std::to_string(d.preimages.size()) + "-fold point");
  } catch (const Error&) {
    // A retraced arc has no finite set of double points to mark.
  }
  if (center) plot.mark(*center, SvgPlot::Marker::Cross, kPalette[1], "center");
  return plot;
}

Vec2 oblique(const Plane3& base, const Vec3& x) {
  Vec2 q = base.to_plane(x);
  double z = base.height(x);
  return {q.x() + 0.4 * q.y(), z + 0.4 * q.y()};
}

SvgPlot plot_sweep(const TubularSweep& sweep, const std::string& title) {
  if (sweep.stations.empty()) fail(ErrorCode::InvalidArgument, "empty sweep");
  SvgPlot plot(title);
  for (const auto& st : sweep.stations) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 512; ++k) pts.push_back(oblique(sweep.base, st.cut.ambient(st.cut.loop.position(kTwoPi * k / 512))));
    plot.path(std::move(pts), true, st.fallback ? kPalette[4] : kPalette[0], 1.0);
  }
  std::vector<Vec2> mu;
  for (const auto& c : sweep.central_curve()) mu.push_back(oblique(sweep.base, c));
  plot.path(mu, false, kPalette[1], 2.0);
  for (const auto& m : mu) plot.mark(m, SvgPlot::Marker::Dot, kPalette[1]);
  return plot;
}

SvgPlot plot_cuts(const Plane3& base, const std::vector<CrossCut>& cuts, const std::vector<Vec3>& centers,
                  const std::string& title) {
  if (cuts.empty()) fail(ErrorCode::InvalidArgument, "no cross-cuts to plot");
  SvgPlot plot(title);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const char* color = kPalette[i % 7];
    std::vector<Vec2> pts;
    for (int k = 0; k < 512; ++k) pts.push_back(oblique(base, cuts[i].ambient(cuts[i].loop.position(kTwoPi * k / 512))));
    plot.path(std::move(pts), true, color);
    if (i < centers.size()) plot.mark(oblique(base, centers[i]), SvgPlot::Marker::Cross, color);
  }
  return plot;
}

}  // namespace xcut
