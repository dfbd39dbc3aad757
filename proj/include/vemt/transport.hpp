#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vemt/exec.hpp"
#include "vemt/geometry.hpp"
#include "vemt/linalg.hpp"
#include "vemt/vem_local.hpp"
#include "vemt/velocity.hpp"

namespace vemt {

/// Global numbering of V_k: vertices, then k-1 points per edge ordered
/// along v0 -> v1, then dim P_{k-2} moments per cell.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const PolyMesh& mesh, int k);

  int degree() const { return k_; }
  int num_dofs() const { return ndof_; }
  int num_vertex_dofs() const { return nv_; }
  int vertex_dof(int v) const { return v; }
  int edge_dof(int e, int m) const { return nv_ + e * (k_ - 1) + m; }
  int moment_dof(int c, int s) const { return nv_ + ne_ * (k_ - 1) + c * poly_dim(k_ - 2) + s; }
  /// Global index of every local dof of cell c, in LocalVemElement order.
  std::span<const int> cell_dofs(int c) const {
    return {dofs_.data() + offsets_[c], static_cast<size_t>(offsets_[c + 1] - offsets_[c])};
  }
  const std::vector<std::vector<int>>& cell_dof_lists() const { return lists_; }

 private:
  int k_ = 1;
  int nv_ = 0;
  int ne_ = 0;
  int ndof_ = 0;
  std::vector<int> offsets_{0};
  std::vector<int> dofs_;
  std::vector<std::vector<int>> lists_;
};

using SpaceTimeField = std::function<double(double t, const Point& x)>;

/// c_t + div(u c - D grad c) = f c* with the skew-symmetrized weak form.
struct TransportProblem {
  double diffusion = 1.0;
  DiscreteVelocity velocity;
  /// f(t, x); its positive part injects c~, its modulus enters R_h.
  SpaceTimeField reaction;
  /// c~(t, x).
  SpaceTimeField injected;
  /// c_I(t, x, n) on inflow edges, n the outward normal.
  std::function<double(double t, const Point& x, const Point& n)> inflow;
  std::function<double(const Point& x)> initial;
  /// When false, A0 is assembled once and the slab factorization reused.
  bool reaction_depends_on_time = false;
};

/// Element data for all cells plus assembly of the global operators.
class TransportAssembler {
 public:
  TransportAssembler(const PolyMesh& mesh, int k, VemOptions options = {}, ExecPolicy policy = ExecPolicy::parallel);

  const PolyMesh& mesh() const { return *mesh_; }
  int degree() const { return k_; }
  const DofMap& dofs() const { return dofs_; }
  const LocalVemElement& element(int c) const { return elements_[c]; }
  ExecPolicy policy() const { return policy_; }
  int num_dofs() const { return dofs_.num_dofs(); }

  /// Zero matrix with the cell-coupling pattern shared by every operator.
  SparseMatrix empty_matrix() const { return SparseMatrix(pattern_); }

  const SparseMatrix& mass() const { return mass_; }
  SparseMatrix stiffness(double diffusion) const;
  /// K_h(u; w, v), rows are test functions.
  SparseMatrix convection(const DiscreteVelocity& u) const;
  /// b+_h = (K - K^T) / 2.
  SparseMatrix skew_convection(const DiscreteVelocity& u) const;
  /// Lambda_h on all boundary edges.
  SparseMatrix boundary_lambda(const DiscreteVelocity& u) const;
  /// R_h with weight |f(x)|.
  SparseMatrix reaction(const std::function<double(const Point&)>& f) const;
  /// A0 = A + b+ + (Lambda + R) / 2 at time t.
  SparseMatrix a0(const TransportProblem& problem, double t) const;

  /// F+(t): int max(0, f) c~ Pi0 v.
  Eigen::VectorXd source_rhs(const TransportProblem& problem, double t) const;
  /// G_I(t): -int_dOmega min(0, u_h.n) c_I v.
  Eigen::VectorXd inflow_rhs(const TransportProblem& problem, double t) const;

  /// Global dof interpolant (c_h^0 = Pi_h c0).
  Eigen::VectorXd interpolate(const std::function<double(const Point&)>& g) const;

 private:
  template <class LocalFn>
  SparseMatrix assemble(LocalFn&& local) const;

  const PolyMesh* mesh_;
  int k_;
  ExecPolicy policy_;
  DofMap dofs_;
  std::vector<LocalVemElement> elements_;
  SparseMatrix pattern_;
  SparseMatrix mass_;
};

}  // namespace vemt
