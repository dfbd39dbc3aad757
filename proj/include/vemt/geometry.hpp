#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vemt {

using Point = Eigen::Vector2d;

/// Thrown for malformed meshes and invalid geometric input.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected mesh edge. The edge is oriented v0 -> v1 as seen by its
/// `left` cell when that cell is traversed counter-clockwise; `right` is -1
/// on the boundary.
struct MeshEdge {
  int v0 = -1;
  int v1 = -1;
  int left = -1;
  int right = -1;
};

/// Planar polygonal tessellation.
///
/// Cells are counter-clockwise vertex loops. Local edge j of a cell joins
/// loop vertex j to loop vertex j+1 (cyclic). Normals are the edge tangent
/// rotated by -90 degrees, which makes them outward for the left cell.
/// Immutable after construction.
class PolyMesh {
 public:
  PolyMesh() = default;

  /// Builds adjacency from vertex coordinates and CCW cell loops.
  /// Throws GeometryError on non-positive area, self-intersection,
  /// non-manifold or inconsistently oriented edges.
  static PolyMesh from_cells(std::vector<Point> vertices, const std::vector<std::vector<int>>& cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cell_offsets_.size()) - 1; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }

  std::span<const int> cell_vertices(int c) const {
    return {cell_loop_.data() + cell_offsets_[c], static_cast<size_t>(cell_offsets_[c + 1] - cell_offsets_[c])};
  }
  std::span<const int> cell_edges(int c) const {
    return {cell_edge_.data() + cell_offsets_[c], static_cast<size_t>(cell_offsets_[c + 1] - cell_offsets_[c])};
  }
  int cell_size(int c) const { return cell_offsets_[c + 1] - cell_offsets_[c]; }
  /// True when local edge j of cell c runs opposite to the global orientation.
  bool edge_reversed(int c, int j) const { return cell_edge_reversed_[cell_offsets_[c] + j] != 0; }
  std::vector<Point> cell_polygon(int c) const;

  const MeshEdge& edge(int e) const { return edges_[e]; }
  bool is_boundary_edge(int e) const { return edges_[e].right < 0; }
  double edge_length(int e) const { return edge_length_[e]; }
  Point edge_midpoint(int e) const { return 0.5 * (vertices_[edges_[e].v0] + vertices_[edges_[e].v1]); }
  /// Unit normal, outward for the left cell.
  Point edge_normal(int e) const;
  /// Point at parameter s in [0, 1] along v0 -> v1.
  Point edge_point(int e, double s) const {
    return vertices_[edges_[e].v0] + s * (vertices_[edges_[e].v1] - vertices_[edges_[e].v0]);
  }

  const std::vector<int>& boundary_edges() const { return boundary_edges_; }
  int boundary_marker(int e) const { return marker_[e]; }
  void set_boundary_marker(int e, int marker);

  double cell_area(int c) const { return cell_area_[c]; }
  const Point& cell_centroid(int c) const { return cell_centroid_[c]; }
  double cell_diameter(int c) const { return cell_diameter_[c]; }
  double mesh_size() const { return mesh_size_; }
  double total_area() const;

  /// Euler characteristic V - E + F for the bounded faces.
  int euler_characteristic() const { return num_vertices() - num_edges() + num_cells(); }

 private:
  std::vector<Point> vertices_;
  std::vector<int> cell_offsets_{0};
  std::vector<int> cell_loop_;
  std::vector<int> cell_edge_;
  std::vector<std::uint8_t> cell_edge_reversed_;
  std::vector<MeshEdge> edges_;
  std::vector<double> edge_length_;
  std::vector<int> boundary_edges_;
  std::vector<int> marker_;
  std::vector<double> cell_area_;
  std::vector<Point> cell_centroid_;
  std::vector<double> cell_diameter_;
  double mesh_size_ = 0.0;
};

double signed_area(std::span<const Point> polygon);
Point polygon_centroid(std::span<const Point> polygon);
/// Maximum vertex-vertex distance.
double polygon_diameter(std::span<const Point> polygon);
bool polygon_is_simple(std::span<const Point> polygon);
bool polygon_is_convex(std::span<const Point> polygon, double tol = 1e-12);

/// Cross product z-component of (b - a) x (c - a).
inline double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

/// Keeps the part of a polygon where n . x <= rhs (Sutherland-Hodgman step).
std::vector<Point> clip_halfplane(std::span<const Point> polygon, const Point& normal, double rhs);

}  // namespace vemt
