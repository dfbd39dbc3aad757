#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vemt/linalg.hpp"
#include "vemt/quadrature.hpp"
#include "vemt/transport.hpp"

namespace vemt {

/// 0 = t_0 < t_1 < ... < t_N = T.
struct TimePartition {
  std::vector<double> times;

  static TimePartition uniform(double final_time, double step);
  static TimePartition from_times(std::vector<double> times);
  int num_slabs() const { return static_cast<int>(times.size()) - 1; }
  double tau(int n) const { return times[n + 1] - times[n]; }
  double max_tau() const;
  double final_time() const { return times.back(); }
};

/// Lagrange basis on the Radau nodes of one slab, in the reference
/// variable xi in [0, 1].
class RadauLagrange {
 public:
  explicit RadauLagrange(const RadauRule& rule);
  int size() const { return static_cast<int>(nodes_.size()); }
  const RadauRule& rule() const { return rule_; }
  double value(int i, double xi) const;
  double derivative(int i, double xi) const;
  Eigen::VectorXd values(double xi) const;

 private:
  RadauRule rule_;
  std::vector<double> nodes_;
  std::vector<double> denom_;
};

/// Solution on one slab (t0, t1]: column i holds the spatial dofs at
/// t0 + tau * xi_i. The outgoing trace is the last column.
struct SlabSolution {
  int index = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  Eigen::MatrixXd values;
  Eigen::VectorXd carry_in;

  Eigen::VectorXd trace() const { return values.col(values.cols() - 1); }
  Eigen::VectorXd evaluate(const RadauLagrange& basis, double t) const;
};

/// Block system of one slab.
///
/// Block (j, i) = w_j l_i'(xi_j) M + delta_ij tau w_j A0(t_j) + l_i(0) l_j(0) M,
/// right-hand side j = tau w_j F(t_j) + l_j(0) M carry. `a0` holds one
/// operator per node or a single operator used at every node; `loads` one
/// vector per node. M and A0 must share a sparsity pattern.
struct SlabSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};
SlabSystem build_slab_system(const SparseMatrix& mass, const std::vector<const SparseMatrix*>& a0,
                             const std::vector<Eigen::VectorXd>& loads, const RadauLagrange& basis, double tau,
                             const Eigen::VectorXd& carry);
/// Slab matrix only.
SparseMatrix build_slab_matrix(const SparseMatrix& mass, const std::vector<const SparseMatrix*>& a0,
                               const RadauLagrange& basis, double tau);
/// Slab right-hand side only.
Eigen::VectorXd build_slab_rhs(const SparseMatrix& mass, const std::vector<Eigen::VectorXd>& loads,
                               const RadauLagrange& basis, double tau, const Eigen::VectorXd& carry);

class TimeSteppingError : public std::runtime_error {
 public:
  TimeSteppingError(int slab, const std::string& what)
      : std::runtime_error("slab " + std::to_string(slab) + ": " + what), slab_(slab) {}
  int slab() const { return slab_; }

 private:
  int slab_;
};

struct AdvanceOptions {
  SolverConfig solver;
  /// Keep every slab in the result (needed for space-time error norms).
  bool keep_slabs = true;
  /// Called after each slab.
  std::function<void(const SlabSolution&)> observer;
};

struct TransportRun {
  Eigen::VectorXd initial;
  std::vector<SlabSolution> slabs;
  Eigen::VectorXd final_trace;
  int factorizations = 0;
};

/// Slab-by-slab DG-in-time solve of the transport problem with q + 1
/// Radau nodes per slab; c^{-,0} is the dof interpolant of c0.
TransportRun advance(const TransportAssembler& assembler, const TransportProblem& problem,
                     const TimePartition& partition, int q, const AdvanceOptions& options = {});

/// Nodal values of L_tau v: v(t_i) / xi_i.
Eigen::VectorXd l_tau(const RadauRule& rule, const Eigen::VectorXd& nodal);
/// Value at the left end point (xi = 0) of the degree-q polynomial with the
/// given Radau nodal values.
double left_value(const RadauLagrange& basis, const Eigen::VectorXd& nodal);
/// Smallest C with (L_tau v(t_{n-1}^+))^2 <= C tau^{-1} int_{I_n} v^2 for all
/// v in P_q; it does not depend on tau.
double l_tau_bound_constant(const RadauRule& rule);

/// Radau nodal values of Pi^tau v on (t0, t1]: int (Pi v - v) w = 0 for
/// w in P_{q-1} and Pi v(t1) = v(t1).
Eigen::VectorXd pi_tau(const std::function<double(double)>& v, const RadauLagrange& basis, double t0, double t1);

}  // namespace vemt
