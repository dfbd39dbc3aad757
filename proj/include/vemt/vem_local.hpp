#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vemt/geometry.hpp"
#include "vemt/monomials.hpp"
#include "vemt/quadrature.hpp"

namespace vemt {

class VemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VemOptions {
  /// Degree of the L2 projection of gradients relative to k: 0 projects
  /// onto P_k (the convection form as written), -1 onto P_{k-1}.
  int gradient_degree_offset = 0;
  /// Extra polynomial degree for the rules integrating non-polynomial data
  /// (reaction weight, loads, interpolation moments).
  int data_quadrature_extra = 0;
};

/// Nodal virtual element space V_k(K) on one polygon, with its projectors
/// and local bilinear forms.
///
/// Local dof layout: the N vertex values, then k-1 uniformly spaced point
/// values per edge (edge j runs from loop vertex j to j+1), then the
/// moments (1/|K|) int_K v m_s for |s| <= k-2. Projector matrices map a
/// dof vector to coefficients in the scaled monomial basis of degree k.
/// Moments of degree k-1 and k are identified with those of the
/// H1-projection (enhanced space), which makes Pi0 computable for every k.
class LocalVemElement {
 public:
  LocalVemElement(std::vector<Point> polygon, int k, VemOptions options = {});

  int degree() const { return k_; }
  int num_vertices() const { return static_cast<int>(polygon_.size()); }
  int num_dofs() const { return ndof_; }
  const std::vector<Point>& polygon() const { return polygon_; }
  double area() const { return area_; }
  double diameter() const { return basis_.scale(); }
  const Point& centroid() const { return basis_.center(); }
  const ScaledMonomials& basis() const { return basis_; }
  int gradient_degree() const { return kg_; }

  int vertex_dof(int j) const { return j; }
  int edge_dof(int j, int m) const { return num_vertices() + j * (k_ - 1) + m; }
  int moment_dof(int s) const { return num_vertices() * k_ + s; }
  int num_point_dofs() const { return num_vertices() * k_; }
  /// Local dofs along edge j in its local direction: k+1 entries.
  std::vector<int> edge_dofs(int j) const;
  /// Location of point dof i (vertex or edge point).
  Point dof_point(int i) const;
  /// Outward unit normal of local edge j.
  Point edge_normal(int j) const;
  double edge_length(int j) const;

  /// Pi^{nabla,k}: n_k x ndof.
  const Eigen::MatrixXd& pi_nabla() const { return pi_nabla_; }
  /// Pi^{0,k}: n_k x ndof.
  const Eigen::MatrixXd& pi0() const { return pi0_; }
  /// Pi^{0,kg} of d/dx (direction 0) or d/dy (1): poly_dim(kg) x ndof.
  const Eigen::MatrixXd& grad_pi0(int direction) const { return grad_pi0_[direction]; }
  /// Dof vectors of the scaled monomials: ndof x n_k.
  const Eigen::MatrixXd& monomial_dofs() const { return dmat_; }
  /// Gram matrix int_K m_a m_b.
  const Eigen::MatrixXd& gram() const { return gram_; }

  /// m_h^K with S_m = |K| (I - Pi0)^T (I - Pi0) on dofs.
  Eigen::MatrixXd mass() const;
  /// a_h^K with S_a = (I - Pi_nabla)^T (I - Pi_nabla) on dofs, times D.
  Eigen::MatrixXd stiffness(double diffusion) const;
  /// K(i, j) = int_K (u . Pi0 grad phi_j) Pi0 phi_i; `velocity` is the
  /// element's projected velocity, of polynomial degree `velocity_degree`.
  Eigen::MatrixXd convection(const std::function<Point(const Point&)>& velocity, int velocity_degree) const;
  /// R(i, j) = int_K w Pi0 phi_j Pi0 phi_i with w evaluated pointwise.
  Eigen::MatrixXd reaction(const std::function<double(const Point&)>& weight) const;
  /// int_K g Pi0 phi_i.
  Eigen::VectorXd load(const std::function<double(const Point&)>& g) const;
  /// (k+1) x (k+1) edge Gram matrix int_e w(s) l_a l_b on edge j, indexed
  /// like edge_dofs(j); s in [0, 1] along the local direction.
  Eigen::MatrixXd edge_mass(int j, const std::function<double(double s, const Point& x)>& weight) const;
  /// int_e g(s) l_a on edge j.
  Eigen::VectorXd edge_load(int j, const std::function<double(double s, const Point& x)>& g) const;

  Eigen::VectorXd interpolate(const std::function<double(const Point&)>& g) const;

  /// Quadrature rule on the cell exact to `degree` (cached for the common
  /// degrees).
  PolygonRule rule(int degree) const;

  /// Lagrange basis of the k+1 uniform edge points evaluated at s.
  Eigen::VectorXd edge_lagrange(double s) const;

 private:
  std::vector<Point> polygon_;
  int k_;
  int kg_;
  int data_extra_ = 0;
  int ndof_;
  double area_;
  ScaledMonomials basis_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd dmat_;
  Eigen::MatrixXd pi_nabla_;
  Eigen::MatrixXd pi0_;
  Eigen::MatrixXd grad_pi0_[2];
  Eigen::MatrixXd g_nabla_;  // int grad m_a . grad m_b
  PolygonRule rule_2k_;
  PolygonRule rule_load_;
};

}  // namespace vemt
