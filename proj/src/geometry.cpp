#include "vemt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace vemt {

double signed_area(std::span<const Point> polygon) {
  const size_t n = polygon.size();
  double a = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Point polygon_centroid(std::span<const Point> polygon) {
  const size_t n = polygon.size();
  // shift to the first vertex to limit cancellation
  const Point o = polygon[0];
  double a = 0.0;
  Point c = Point::Zero();
  for (size_t i = 0; i < n; ++i) {
    const Point p = polygon[i] - o;
    const Point q = polygon[(i + 1) % n] - o;
    const double w = p.x() * q.y() - q.x() * p.y();
    a += w;
    c += w * (p + q);
  }
  if (a == 0.0) throw GeometryError("polygon_centroid: zero-area polygon");
  return o + c / (3.0 * a);
}

double polygon_diameter(std::span<const Point> polygon) {
  double d = 0.0;
  for (size_t i = 0; i < polygon.size(); ++i)
    for (size_t j = i + 1; j < polygon.size(); ++j) d = std::max(d, (polygon[i] - polygon[j]).norm());
  return d;
}

namespace {

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

bool polygon_is_simple(std::span<const Point> polygon) {
  const size_t n = polygon.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if ((polygon[i] - polygon[(i + 1) % n]).norm() == 0.0) return false;
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool polygon_is_convex(std::span<const Point> polygon, double tol) {
  const size_t n = polygon.size();
  const double scale = polygon_diameter(polygon);
  for (size_t i = 0; i < n; ++i) {
    if (orient(polygon[i], polygon[(i + 1) % n], polygon[(i + 2) % n]) < -tol * scale * scale) return false;
  }
  return true;
}

std::vector<Point> clip_halfplane(std::span<const Point> polygon, const Point& normal, double rhs) {
  std::vector<Point> out;
  const size_t n = polygon.size();
  out.reserve(n + 1);
  for (size_t i = 0; i < n; ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % n];
    const double fp = normal.dot(p) - rhs;
    const double fq = normal.dot(q) - rhs;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double s = fp / (fp - fq);
      out.push_back(p + s * (q - p));
    }
  }
  return out;
}

PolyMesh PolyMesh::from_cells(std::vector<Point> vertices, const std::vector<std::vector<int>>& cells) {
  PolyMesh m;
  m.vertices_ = std::move(vertices);
  const int nv = m.num_vertices();

  std::map<std::pair<int, int>, int> edge_index;
  for (size_t c = 0; c < cells.size(); ++c) {
    const auto& loop = cells[c];
    if (loop.size() < 3) throw GeometryError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    std::vector<Point> poly;
    poly.reserve(loop.size());
    for (int v : loop) {
      if (v < 0 || v >= nv) throw GeometryError("cell " + std::to_string(c) + " references an invalid vertex");
      poly.push_back(m.vertices_[v]);
    }
    const double area = signed_area(poly);
    if (!(area > 0.0)) throw GeometryError("cell " + std::to_string(c) + " is not counter-clockwise");
    if (!polygon_is_simple(poly)) throw GeometryError("cell " + std::to_string(c) + " is not a simple polygon");

    for (size_t j = 0; j < loop.size(); ++j) {
      const int a = loop[j];
      const int b = loop[(j + 1) % loop.size()];
      const auto key = std::minmax(a, b);
      auto it = edge_index.find(key);
      int e;
      bool reversed = false;
      if (it == edge_index.end()) {
        e = static_cast<int>(m.edges_.size());
        edge_index.emplace(key, e);
        m.edges_.push_back({a, b, static_cast<int>(c), -1});
      } else {
        e = it->second;
        MeshEdge& edge = m.edges_[e];
        if (edge.right >= 0) throw GeometryError("edge shared by more than two cells");
        if (edge.v0 != b || edge.v1 != a) throw GeometryError("inconsistent cell orientation across an edge");
        edge.right = static_cast<int>(c);
        reversed = true;
      }
      m.cell_loop_.push_back(a);
      m.cell_edge_.push_back(e);
      m.cell_edge_reversed_.push_back(reversed ? 1 : 0);
    }
    m.cell_offsets_.push_back(static_cast<int>(m.cell_loop_.size()));
    m.cell_area_.push_back(area);
    m.cell_centroid_.push_back(polygon_centroid(poly));
    const double d = polygon_diameter(poly);
    m.cell_diameter_.push_back(d);
    m.mesh_size_ = std::max(m.mesh_size_, d);
  }

  m.edge_length_.resize(m.edges_.size());
  m.marker_.assign(m.edges_.size(), 0);
  for (size_t e = 0; e < m.edges_.size(); ++e) {
    m.edge_length_[e] = (m.vertices_[m.edges_[e].v1] - m.vertices_[m.edges_[e].v0]).norm();
    if (m.edges_[e].right < 0) m.boundary_edges_.push_back(static_cast<int>(e));
  }
  return m;
}

std::vector<Point> PolyMesh::cell_polygon(int c) const {
  std::vector<Point> poly;
  for (int v : cell_vertices(c)) poly.push_back(vertices_[v]);
  return poly;
}

Point PolyMesh::edge_normal(int e) const {
  const Point t = vertices_[edges_[e].v1] - vertices_[edges_[e].v0];
  return Point(t.y(), -t.x()) / edge_length_[e];
}

void PolyMesh::set_boundary_marker(int e, int marker) {
  if (!is_boundary_edge(e)) throw GeometryError("set_boundary_marker: edge is interior");
  marker_[e] = marker;
}

double PolyMesh::total_area() const {
  double a = 0.0;
  for (double x : cell_area_) a += x;
  return a;
}

}  // namespace vemt
