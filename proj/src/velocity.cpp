#include "vemt/velocity.hpp"

#include <cmath>

#include "vemt/quadrature.hpp"

namespace vemt {

Eigen::MatrixXd edge_monomial_gram(int k) {
  Eigen::MatrixXd g(k + 1, k + 1);
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) {
      const int p = a + b;
      g(a, b) = (p % 2 == 1) ? 0.0 : 1.0 / (std::pow(2.0, p) * (p + 1));
    }
  return g;
}

Eigen::VectorXd project_edge(const std::function<double(double)>& g, int k) {
  const LineRule& r = gauss_legendre_for_degree(2 * k + 8);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (size_t q = 0; q < r.points.size(); ++q) {
    const double v = g(r.points[q]);
    double m = 1.0;
    for (int a = 0; a <= k; ++a) {
      rhs(a) += r.weights[q] * v * m;
      m *= r.points[q] - 0.5;
    }
  }
  return edge_monomial_gram(k).ldlt().solve(rhs);
}

double DiscreteVelocity::normal_flux(int e, double s) const {
  const Eigen::VectorXd& c = edge_flux[e];
  double v = 0.0, m = 1.0;
  for (int a = 0; a < c.size(); ++a) {
    v += c(a) * m;
    m *= s - 0.5;
  }
  return v;
}

double DiscreteVelocity::mean_normal_flux(int e) const {
  const Eigen::VectorXd& c = edge_flux[e];
  double v = 0.0;
  for (int a = 0; a < c.size(); a += 2) v += c(a) / (std::pow(2.0, a) * (a + 1));
  return v;
}

Point DiscreteVelocity::cell_velocity(const PolyMesh& mesh, int c, const Point& x) const {
  const ScaledMonomials b(degree, mesh.cell_centroid(c), mesh.cell_diameter(c));
  const Eigen::VectorXd m = b.values(x);
  return Point(m.dot(cell_ux[c]), m.dot(cell_uy[c]));
}

double DiscreteVelocity::cell_divergence(const PolyMesh& mesh, int c, const Point& x) const {
  if (cell_div.empty()) throw std::logic_error("cell_divergence: field has no divergence data");
  const ScaledMonomials b(degree, mesh.cell_centroid(c), mesh.cell_diameter(c));
  return b.values(x).dot(cell_div[c]);
}

DiscreteVelocity DiscreteVelocity::scaled(double alpha) const {
  DiscreteVelocity s = *this;
  for (auto& v : s.edge_flux) v *= alpha;
  for (auto& v : s.cell_ux) v *= alpha;
  for (auto& v : s.cell_uy) v *= alpha;
  for (auto& v : s.cell_div) v *= alpha;
  return s;
}

DiscreteVelocity analytic_velocity(const PolyMesh& mesh, const std::function<Point(const Point&)>& u, int k) {
  if (k < 0) throw std::invalid_argument("analytic_velocity: negative degree");
  DiscreteVelocity v;
  v.kind = DiscreteVelocity::Kind::analytic;
  v.degree = k;
  v.edge_flux.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Point n = mesh.edge_normal(e);
    v.edge_flux[e] = project_edge([&](double s) { return u(mesh.edge_point(e, s)).dot(n); }, k);
  }
  v.cell_ux.resize(mesh.num_cells());
  v.cell_uy.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<Point> poly = mesh.cell_polygon(c);
    const ScaledMonomials b(k, mesh.cell_centroid(c), mesh.cell_diameter(c));
    const PolygonRule r = polygon_rule(poly, 2 * k + 6);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(b.size(), b.size());
    Eigen::VectorXd rx = Eigen::VectorXd::Zero(b.size()), ry = rx;
    for (size_t q = 0; q < r.points.size(); ++q) {
      const Eigen::VectorXd m = b.values(r.points[q]);
      const Point uq = u(r.points[q]);
      h.noalias() += r.weights[q] * m * m.transpose();
      rx += r.weights[q] * uq.x() * m;
      ry += r.weights[q] * uq.y() * m;
    }
    const Eigen::LDLT<Eigen::MatrixXd> ch(h);
    v.cell_ux[c] = ch.solve(rx);
    v.cell_uy[c] = ch.solve(ry);
  }
  return v;
}

BoundaryPartition classify_boundary(const PolyMesh& mesh, const DiscreteVelocity& u,
                                    const std::vector<int>& darcy_neumann) {
  BoundaryPartition p;
  std::vector<char> neu(mesh.num_edges(), 0);
  for (int e : darcy_neumann) {
    if (e < 0 || e >= mesh.num_edges() || !mesh.is_boundary_edge(e))
      throw std::invalid_argument("classify_boundary: Neumann edge is not a boundary edge");
    neu[e] = 1;
  }
  for (int e : mesh.boundary_edges()) {
    (neu[e] ? p.darcy_neumann : p.darcy_dirichlet).push_back(e);
    (u.mean_normal_flux(e) < 0.0 ? p.inflow : p.outflow).push_back(e);
  }
  return p;
}

}  // namespace vemt
