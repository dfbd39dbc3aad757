#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vemt/geometry.hpp"
#include "vemt/monomials.hpp"

namespace vemt {

/// Velocity field handed to the transport solver.
///
/// Edge normal fluxes are stored per global edge as coefficients of
/// u.n_e in the basis (s - 1/2)^a, a = 0..k, where s in [0, 1] runs
/// v0 -> v1 and n_e is the global edge normal (outward on the boundary).
/// Cell velocities are polynomials of degree k in the cell's scaled
/// monomial basis (centre = centroid, scale = diameter).
struct DiscreteVelocity {
  enum class Kind { analytic, mixed_vem };
  Kind kind = Kind::analytic;
  int degree = 0;
  std::vector<Eigen::VectorXd> edge_flux;
  std::vector<Eigen::VectorXd> cell_ux;
  std::vector<Eigen::VectorXd> cell_uy;
  /// Divergence per cell (mixed kind only; empty otherwise).
  std::vector<Eigen::VectorXd> cell_div;

  /// u_h . n_e at parameter s on edge e.
  double normal_flux(int e, double s) const;
  /// Mean of u_h . n_e over edge e.
  double mean_normal_flux(int e) const;
  Point cell_velocity(const PolyMesh& mesh, int c, const Point& x) const;
  double cell_divergence(const PolyMesh& mesh, int c, const Point& x) const;
  /// Same field scaled by alpha.
  DiscreteVelocity scaled(double alpha) const;
};

/// Edge L2 projections of u.n onto P_k(e) and cell L2 projections onto
/// [P_k(K)]^2, both by quadrature.
DiscreteVelocity analytic_velocity(const PolyMesh& mesh, const std::function<Point(const Point&)>& u, int k);

/// Coefficients of the L2(e) projection of g onto P_k(e) in the basis
/// (s - 1/2)^a. g is sampled at parameter s.
Eigen::VectorXd project_edge(const std::function<double(double s)>& g, int k);
/// Gram matrix int_0^1 (s-1/2)^a (s-1/2)^b ds.
Eigen::MatrixXd edge_monomial_gram(int k);

struct BoundaryPartition {
  std::vector<int> darcy_dirichlet;
  std::vector<int> darcy_neumann;
  std::vector<int> inflow;
  std::vector<int> outflow;
};

/// Inflow where the edge mean of u.n is negative, outflow otherwise
/// (ties go to outflow). Edges listed in `darcy_neumann` form Gamma_N, the
/// remaining boundary edges Gamma_D.
BoundaryPartition classify_boundary(const PolyMesh& mesh, const DiscreteVelocity& u,
                                    const std::vector<int>& darcy_neumann = {});

}  // namespace vemt
