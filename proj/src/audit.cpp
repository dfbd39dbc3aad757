#include "vemt/audit.hpp"

#include <algorithm>
#include <cmath>

namespace vemt {

Ball chebyshev_ball(std::span<const Point> poly) {
  const size_t n = poly.size();
  // outward unit normals and offsets: n_i . x <= b_i
  std::vector<Point> nrm(n);
  std::vector<double> rhs(n);
  std::vector<bool> valid(n, true);
  for (size_t i = 0; i < n; ++i) {
    const Point t = poly[(i + 1) % n] - poly[i];
    const double len = t.norm();
    if (len == 0.0) {
      valid[i] = false;
      continue;
    }
    nrm[i] = Point(t.y(), -t.x()) / len;
    rhs[i] = nrm[i].dot(poly[i]);
  }
  const double scale = polygon_diameter(poly);
  Ball best;
  best.radius = -1.0;
  for (size_t a = 0; a < n; ++a) {
    if (!valid[a]) continue;
    for (size_t b = a + 1; b < n; ++b) {
      if (!valid[b]) continue;
      for (size_t c = b + 1; c < n; ++c) {
        if (!valid[c]) continue;
        Eigen::Matrix3d m;
        Eigen::Vector3d r;
        const size_t idx[3] = {a, b, c};
        for (int row = 0; row < 3; ++row) {
          m(row, 0) = nrm[idx[row]].x();
          m(row, 1) = nrm[idx[row]].y();
          m(row, 2) = 1.0;
          r(row) = rhs[idx[row]];
        }
        const double det = m.determinant();
        if (std::abs(det) < 1e-12) continue;
        const Eigen::Vector3d sol = m.partialPivLu().solve(r);
        const double radius = sol(2);
        if (radius <= best.radius) continue;
        const Point center(sol(0), sol(1));
        bool feasible = true;
        for (size_t i = 0; i < n && feasible; ++i) {
          if (valid[i] && nrm[i].dot(center) + radius > rhs[i] + 1e-12 * scale) feasible = false;
        }
        if (feasible) best = {center, radius};
      }
    }
  }
  if (best.radius < 0.0) best.radius = 0.0;
  return best;
}

std::vector<Point> kernel_polygon(std::span<const Point> poly) {
  const size_t n = poly.size();
  Point lo = poly[0], hi = poly[0];
  for (const Point& p : poly) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<Point> kernel = {lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())};
  for (size_t i = 0; i < n && !kernel.empty(); ++i) {
    const Point t = poly[(i + 1) % n] - poly[i];
    if (t.norm() == 0.0) continue;
    const Point nrm(t.y(), -t.x());
    kernel = clip_halfplane(kernel, nrm, nrm.dot(poly[i]));
  }
  if (kernel.size() < 3 || signed_area(kernel) <= 0.0) return {};
  return kernel;
}

CellAudit audit_cell(std::span<const Point> poly, double gamma0, int N0) {
  CellAudit a;
  const double h = polygon_diameter(poly);
  a.num_edges = static_cast<int>(poly.size());
  a.convex = polygon_is_convex(poly);
  double min_edge = h;
  for (size_t i = 0; i < poly.size(); ++i) min_edge = std::min(min_edge, (poly[(i + 1) % poly.size()] - poly[i]).norm());
  a.min_edge_over_h = min_edge / h;
  if (a.convex) {
    a.rho_over_h = chebyshev_ball(poly).radius / h;
  } else {
    const auto kernel = kernel_polygon(poly);
    a.rho_over_h = kernel.empty() ? 0.0 : chebyshev_ball(kernel).radius / h;
  }
  a.pass = a.rho_over_h >= gamma0 && a.num_edges <= N0;
  return a;
}

AuditReport audit_mesh(const PolyMesh& mesh, double gamma0, int N0) {
  AuditReport r;
  r.cells.resize(mesh.num_cells());
  r.min_rho_over_h = 1.0;
  r.min_edge_over_h = 1.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto poly = mesh.cell_polygon(c);
    r.cells[c] = audit_cell(poly, gamma0, N0);
    r.min_rho_over_h = std::min(r.min_rho_over_h, r.cells[c].rho_over_h);
    r.min_edge_over_h = std::min(r.min_edge_over_h, r.cells[c].min_edge_over_h);
    r.max_edges = std::max(r.max_edges, r.cells[c].num_edges);
    if (!r.cells[c].pass) ++r.failures;
  }
  return r;
}

}  // namespace vemt
