#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vemt/exec.hpp"
#include "vemt/geometry.hpp"
#include "vemt/linalg.hpp"
#include "vemt/monomials.hpp"
#include "vemt/velocity.hpp"

namespace vemt {

class DarcyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// u = (K/mu) grad p, div u = f, p = g_D on Gamma_D, u.n = g_N on Gamma_N.
/// The sign convention has no minus on purpose.
struct DarcyProblem {
  double permeability = 1.0;
  double viscosity = 1.0;
  std::function<double(const Point&)> source;
  std::function<double(const Point&)> dirichlet;
  /// Outward normal flux; arguments are the point and the outward normal.
  std::function<double(const Point&, const Point&)> neumann;
  /// Boundary edges on Gamma_N; all other boundary edges are Dirichlet.
  std::vector<int> neumann_edges;
  /// Relative tolerance of the check int f = int g_N when Gamma_D is empty.
  double compatibility_tolerance = 1e-10;
  /// Degree of the cell rule integrating the source; -1 means 2k + 4.
  int source_quadrature_degree = -1;
};

/// Local rot-free H(div) virtual element of degree k >= 0 on one cell.
///
/// Local dofs: per local edge j and a = 0..k, (1/|e|) int_e v.n_j (s-1/2)^a
/// with n_j the outward normal and s along the local direction; then
/// (1/|E|) int_E v . h_E grad m_b for b = 1..dim P_k - 1. The projection is
/// the L2 projection onto grad P_{k+1}.
class MixedVemElement {
 public:
  MixedVemElement(std::vector<Point> polygon, int k);

  int degree() const { return k_; }
  int num_edges() const { return static_cast<int>(polygon_.size()); }
  int num_dofs() const { return ndof_; }
  int edge_dof(int j, int a) const { return j * (k_ + 1) + a; }
  int interior_dof(int b) const { return num_edges() * (k_ + 1) + b - 1; }
  const ScaledMonomials& basis() const { return basis_; }  // degree k + 1

  /// Divergence coefficients (degree k) of a dof vector: dim P_k x ndof.
  const Eigen::MatrixXd& divergence() const { return div_; }
  /// (div v, m_b) for the pressure basis m_b of degree k: dim P_k x ndof.
  const Eigen::MatrixXd& divergence_pairing() const { return bdiv_; }
  /// Coefficients of p in P_{k+1}/R with Pi v = grad p: (dim P_{k+1} - 1) x ndof.
  const Eigen::MatrixXd& projection() const { return proj_; }
  /// Pi v as [P_k]^2 coefficients (x and y components) in the degree-k basis.
  Eigen::MatrixXd projection_x() const;
  Eigen::MatrixXd projection_y() const;
  /// Dofs of grad m_g, g = 1..dim P_{k+1} - 1: ndof x (dim P_{k+1} - 1).
  const Eigen::MatrixXd& gradient_dofs() const { return dgrad_; }
  /// int_E u . v with the dofi-dofi stabilization scaled by |E|.
  Eigen::MatrixXd mass() const;
  /// Dof vector of a smooth field (edge and interior moments by quadrature).
  Eigen::VectorXd interpolate(const std::function<Point(const Point&)>& u) const;
  /// Gram of the degree-k pressure basis.
  Eigen::MatrixXd pressure_gram() const { return gram_.topLeftCorner(poly_dim(k_), poly_dim(k_)); }

 private:
  std::vector<Point> polygon_;
  int k_;
  int ndof_;
  double area_;
  ScaledMonomials basis_;
  Eigen::MatrixXd gram_;   // degree k+1
  Eigen::MatrixXd ggrad_;  // int grad m_a . grad m_b, a, b >= 1, degree k+1
  Eigen::MatrixXd div_;
  Eigen::MatrixXd bdiv_;
  Eigen::MatrixXd proj_;
  Eigen::MatrixXd dgrad_;
};

struct DarcySolution {
  DiscreteVelocity velocity;
  /// Pressure per cell in the degree-k scaled monomial basis.
  std::vector<Eigen::VectorXd> pressure;
  int degree = 0;
  /// Zero-mean multiplier (pure Neumann only).
  double multiplier = 0.0;
  /// int f - int g_N, checked before solving when Gamma_D is empty.
  double compatibility_defect = 0.0;
  SolveReport report;
};

/// Mixed VEM solve of degree k >= 0. With Gamma_D empty the pressure gets a
/// zero-mean gauge and a DarcyError is thrown unless int f = int g_N.
DarcySolution solve_darcy_mixed(const PolyMesh& mesh, const DarcyProblem& problem, int k,
                                ExecPolicy policy = ExecPolicy::parallel, const SolverConfig& solver = {});

/// ||u - Pi u_h||_{L2}.
double darcy_velocity_error(const PolyMesh& mesh, const DarcySolution& sol,
                            const std::function<Point(const Point&)>& u_exact);
/// ||p - p_h||_{L2}.
double darcy_pressure_error(const PolyMesh& mesh, const DarcySolution& sol,
                            const std::function<double(const Point&)>& p_exact);

}  // namespace vemt
