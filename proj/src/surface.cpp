#include "surface.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace xcut {

Vec3 ChartPoint::normal() const {
  Vec3 n = du.cross(dv);
  double len = n.norm();
  return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

void TriangleMesh::compute_normals() {
  normals.assign(vertices.size(), Vec3::Zero());
  for (const auto& f : faces) {
    Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
    for (int k : f) normals[k] += n;
  }
  for (auto& n : normals) {
    double len = n.norm();
    if (len > 0) n /= len;
  }
}

namespace {

// Grid sizes along one chart direction: points and cells.
struct Axis {
  double lo, hi;
  int cells;
  bool periodic;
  int points() const { return periodic ? cells : cells + 1; }
  double at(int i) const { return lo + (hi - lo) * i / cells; }
  int wrap(int i) const { return periodic ? ((i % cells) + cells) % cells : i; }
};

}  // namespace

Surface Surface::analytic(std::string name, std::vector<Chart> charts) {
  if (charts.empty()) fail(ErrorCode::InvalidArgument, "surface needs at least one chart");
  for (const auto& c : charts) {
    if (!c.eval || !(c.u1 > c.u0) || !(c.v1 > c.v0) || c.cells_u < 2 || c.cells_v < 1)
      fail(ErrorCode::InvalidArgument, "malformed chart");
  }
  Surface s;
  s.kind_ = Kind::Analytic;
  s.name_ = std::move(name);
  s.charts_ = std::make_shared<const std::vector<Chart>>(std::move(charts));
  s.compute_bbox();
  return s;
}

Surface Surface::mesh(std::string name, TriangleMesh mesh) {
  if (mesh.vertices.empty() || mesh.faces.empty()) fail(ErrorCode::InvalidArgument, "mesh is empty");
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces)
    for (int k : f)
      if (k < 0 || k >= n) fail(ErrorCode::InvalidArgument, "face index out of range");
  if (mesh.normals.size() != mesh.vertices.size()) mesh.compute_normals();
  Surface s;
  s.kind_ = Kind::Mesh;
  s.name_ = std::move(name);
  s.mesh_ = std::make_shared<const TriangleMesh>(std::move(mesh));
  s.compute_bbox();
  return s;
}

void Surface::compute_bbox() {
  const double inf = std::numeric_limits<double>::infinity();
  lo_ = Vec3::Constant(inf);
  hi_ = Vec3::Constant(-inf);
  auto add = [&](const Vec3& x) {
    lo_ = lo_.cwiseMin(x);
    hi_ = hi_.cwiseMax(x);
  };
  if (kind_ == Kind::Mesh) {
    for (const auto& v : mesh_->vertices) add(v);
    return;
  }
  for (const auto& c : *charts_) {
    Axis au{c.u0, c.u1, 2 * c.cells_u, c.periodic_u}, av{c.v0, c.v1, 2 * c.cells_v, c.periodic_v};
    for (int i = 0; i < au.points(); ++i)
      for (int j = 0; j < av.points(); ++j) add(c.eval(au.at(i), av.at(j)).position);
  }
}

Surface Surface::transformed(const RigidMotion& motion) const {
  if (kind_ == Kind::Mesh) {
    TriangleMesh m = *mesh_;
    for (auto& v : m.vertices) v = motion.apply(v);
    for (auto& n : m.normals) n = motion.apply_vector(n);
    return mesh(name_, std::move(m));
  }
  std::vector<Chart> out = *charts_;
  for (auto& c : out) {
    auto inner = c.eval;
    c.eval = [inner, motion](double u, double v) {
      ChartPoint p = inner(u, v);
      return ChartPoint{motion.apply(p.position), motion.apply_vector(p.du), motion.apply_vector(p.dv)};
    };
  }
  return analytic(name_, std::move(out));
}

TriangleMesh Surface::tessellate(double scale) const {
  if (kind_ == Kind::Mesh) return *mesh_;
  if (!(scale > 0)) fail(ErrorCode::InvalidArgument, "tessellation scale must be positive");
  TriangleMesh m;
  for (const auto& c : *charts_) {
    Axis au{c.u0, c.u1, std::max(2, static_cast<int>(std::lround(c.cells_u * scale))), c.periodic_u};
    Axis av{c.v0, c.v1, std::max(1, static_cast<int>(std::lround(c.cells_v * scale))), c.periodic_v};
    const int base = static_cast<int>(m.vertices.size());
    const int pu = au.points(), pv = av.points();
    for (int j = 0; j < pv; ++j)
      for (int i = 0; i < pu; ++i) {
        ChartPoint p = c.eval(au.at(i), av.at(j));
        m.vertices.push_back(p.position);
        m.normals.push_back(p.normal());
      }
    auto id = [&](int i, int j) { return base + av.wrap(j) * pu + au.wrap(i); };
    for (int j = 0; j < av.cells; ++j)
      for (int i = 0; i < au.cells; ++i) {
        m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
  }
  // Degenerate chart points (poles) get normals from the triangulation.
  bool missing = std::any_of(m.normals.begin(), m.normals.end(), [](const Vec3& n) { return n.isZero(0.0); });
  if (missing) {
    TriangleMesh tmp = m;
    tmp.compute_normals();
    for (std::size_t k = 0; k < m.normals.size(); ++k)
      if (m.normals[k].isZero(0.0)) m.normals[k] = tmp.normals[k];
  }
  return m;
}

std::vector<double> Surface::critical_heights(const Plane3& plane) const {
  std::vector<double> out;
  if (kind_ == Kind::Mesh) {
    const auto& m = *mesh_;
    const int n = static_cast<int>(m.vertices.size());
    std::vector<double> h(n);
    for (int k = 0; k < n; ++k) h[k] = plane.height(m.vertices[k]);
    std::vector<char> is_max(n, 1), is_min(n, 1);
    for (const auto& f : m.faces)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          if (h[f[b]] > h[f[a]]) is_max[f[a]] = 0;
          if (h[f[b]] < h[f[a]]) is_min[f[a]] = 0;
        }
    for (int k = 0; k < n; ++k)
      if (is_max[k] || is_min[k]) out.push_back(h[k]);
  } else {
    for (const auto& c : *charts_) {
      Axis au{c.u0, c.u1, c.cells_u, c.periodic_u}, av{c.v0, c.v1, c.cells_v, c.periodic_v};
      const int pu = au.points(), pv = av.points();
      std::vector<Vec3> x(static_cast<std::size_t>(pu) * pv);
      std::vector<double> h(x.size());
      for (int j = 0; j < pv; ++j)
        for (int i = 0; i < pu; ++i) {
          x[j * pu + i] = c.eval(au.at(i), av.at(j)).position;
          h[j * pu + i] = plane.height(x[j * pu + i]);
        }
      // A chart edge that maps to a single point is a pole, not a boundary.
      const double eps = 1e-12 * std::max(1.0, diagonal());
      auto collapsed = [&](bool along_u, int fixed) {
        const int count = along_u ? pu : pv;
        const Vec3& first = along_u ? x[fixed * pu] : x[fixed];
        for (int k = 1; k < count; ++k)
          if (((along_u ? x[fixed * pu + k] : x[k * pu + fixed]) - first).norm() > eps) return false;
        return true;
      };
      const bool open_v0 = !c.periodic_v && !collapsed(true, 0);
      const bool open_v1 = !c.periodic_v && !collapsed(true, pv - 1);
      const bool open_u0 = !c.periodic_u && !collapsed(false, 0);
      const bool open_u1 = !c.periodic_u && !collapsed(false, pu - 1);
      for (int j = 0; j < pv; ++j)
        for (int i = 0; i < pu; ++i) {
          bool mx = true, mn = true;
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
              int ii = i + di, jj = j + dj;
              if (!c.periodic_u && (ii < 0 || ii >= pu)) continue;
              if (!c.periodic_v && (jj < 0 || jj >= pv)) continue;
              double other = h[av.wrap(jj) * pu + au.wrap(ii)];
              if (other > h[j * pu + i]) mx = false;
              if (other < h[j * pu + i]) mn = false;
            }
          bool on_boundary = (j == 0 && open_v0) || (j == pv - 1 && open_v1) || (i == 0 && open_u0) ||
                             (i == pu - 1 && open_u1);
          if ((mx || mn) && !on_boundary) out.push_back(h[j * pu + i]);
        }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
            out.end());
  return out;
}

TriangleMesh read_obj(std::istream& in) {
  TriangleMesh m;
  std::vector<Vec3> vn;
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& what) {
    fail(ErrorCode::ParseError, "obj line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v" || tag == "vn") {
      double x, y, z;
      if (!(ss >> x >> y >> z) || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
        bad("expected three finite coordinates");
      (tag == "v" ? m.vertices : vn).emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        int k = 0;
        try {
          std::size_t used = 0;
          k = std::stoi(tok, &used);
          if (used < tok.size() && tok[used] != '/') bad("malformed face index '" + tok + "'");
        } catch (const std::logic_error&) {
          bad("malformed face index '" + tok + "'");
        }
        const int n = static_cast<int>(m.vertices.size());
        if (k < 0) k = n + k + 1;
        if (k < 1 || k > n) bad("face index out of range");
        idx.push_back(k - 1);
      }
      if (idx.size() < 3) bad("face needs at least three vertices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) m.faces.push_back({idx[0], idx[k], idx[k + 1]});
    }
    // Other records (vt, o, g, s, usemtl, mtllib, ...) are ignored.
  }
  if (m.vertices.empty() || m.faces.empty()) fail(ErrorCode::ParseError, "obj has no vertices or faces");
  if (vn.size() == m.vertices.size()) {
    for (auto& n : vn) {
      double len = n.norm();
      if (!(len > 0)) fail(ErrorCode::ParseError, "zero normal");
      n /= len;
    }
    m.normals = std::move(vn);
  } else {
    m.compute_normals();
  }
  return m;
}

TriangleMesh read_obj_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return read_obj(in);
}

void write_obj(std::ostream& out, const TriangleMesh& mesh, const std::string& comment) {
  out.precision(17);
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  const bool normals = mesh.normals.size() == mesh.vertices.size();
  if (normals)
    for (const auto& n : mesh.normals) out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << '\n';
  for (const auto& f : mesh.faces) {
    out << 'f';
    for (int k : f) {
      out << ' ' << k + 1;
      if (normals) out << "//" << k + 1;
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::IoError, "failed writing obj");
}

}  // namespace xcut
