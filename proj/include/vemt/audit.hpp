#pragma once

#include <span>
#include <vector>

#include "vemt/geometry.hpp"

namespace vemt {

inline constexpr double kDefaultGamma0 = 0.1;
inline constexpr int kDefaultN0 = 16;

struct CellAudit {
  /// Radius of the largest ball the cell is star-shaped with respect to,
  /// divided by the cell diameter.
  double rho_over_h = 0.0;
  int num_edges = 0;
  double min_edge_over_h = 0.0;
  bool convex = false;
  bool pass = false;
};

struct AuditReport {
  std::vector<CellAudit> cells;
  double min_rho_over_h = 0.0;
  int max_edges = 0;
  double min_edge_over_h = 0.0;
  int failures = 0;
  bool all_pass() const { return failures == 0; }
};

struct Ball {
  Point center = Point::Zero();
  double radius = 0.0;
};

/// Largest inscribed ball of a convex polygon (Chebyshev center). Every
/// triple of edge lines is tried as the active set.
Ball chebyshev_ball(std::span<const Point> convex_polygon);

/// Kernel of a CCW polygon: the set of points the polygon is star-shaped
/// with respect to. Empty when the polygon is not star-shaped.
std::vector<Point> kernel_polygon(std::span<const Point> polygon);

CellAudit audit_cell(std::span<const Point> polygon, double gamma0 = kDefaultGamma0, int N0 = kDefaultN0);

AuditReport audit_mesh(const PolyMesh& mesh, double gamma0 = kDefaultGamma0, int N0 = kDefaultN0);

}  // namespace vemt
