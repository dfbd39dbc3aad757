#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vemt {

/// Compressed-row sparse matrix with a fixed sparsity pattern.
///
/// The pattern is symbolic and decided once (usually from the cell dof
/// lists); scatter_add accumulates into it and throws std::logic_error if a
/// target entry is not in the pattern.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Column indices per row must be sorted and unique.
  SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> col_indices);

  /// Square pattern coupling every pair of dofs that share a list.
  static SparseMatrix from_dof_lists(int n, const std::vector<std::vector<int>>& lists);
  /// Pattern and values from (row, col, value) entries; duplicates are summed.
  static SparseMatrix from_triplets(int rows, int cols, const std::vector<Eigen::Triplet<double>>& entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(cols_idx_.size()); }
  const std::vector<int>& row_offsets() const { return offsets_; }
  const std::vector<int>& col_indices() const { return cols_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Position of (r, c) in values(), or -1.
  int find(int r, int c) const;
  double coeff(int r, int c) const;

  void scatter_add(const Eigen::Ref<const Eigen::MatrixXd>& block, std::span<const int> dofs);
  void scatter_add(const Eigen::Ref<const Eigen::MatrixXd>& block, std::span<const int> row_dofs,
                   std::span<const int> col_dofs);

  void set_zero();
  bool same_pattern(const SparseMatrix& other) const;
  /// this += alpha * other (identical patterns).
  void add_scaled(double alpha, const SparseMatrix& other);
  SparseMatrix transpose() const;

  Eigen::VectorXd multiply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::SparseMatrix<double, Eigen::ColMajor> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> offsets_{0};
  std::vector<int> cols_idx_;
  std::vector<double> values_;
};

enum class SolverMethod { direct, iterative };

struct SolverConfig {
  SolverMethod method = SolverMethod::direct;
  /// Relative residual accepted from the direct solver.
  double direct_tolerance = 1e-10;
  /// Relative residual target of GMRES.
  double iterative_tolerance = 1e-10;
  int max_iterations = 2000;
  int restart = 60;
  double ilut_drop = 1e-5;
  int ilut_fill = 30;
};

struct SolveReport {
  SolverMethod method = SolverMethod::direct;
  double relative_residual = 0.0;
  bool reused_factorization = false;
  int iterations = 0;
  double seconds = 0.0;
};

class LinearSolverError : public std::runtime_error {
 public:
  enum class Kind { structural_singularity, numerical_breakdown, not_converged, shape };
  LinearSolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Factorize once, solve many times.
class LinearSolver {
 public:
  explicit LinearSolver(SolverConfig config = {});
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Throws LinearSolverError (structural_singularity for an empty row or
  /// column, numerical_breakdown for a zero pivot).
  void factorize(const SparseMatrix& a);
  bool factorized() const;
  /// Solves with the last factorization. The first solve after factorize
  /// reports reused_factorization = false.
  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& b, SolveReport* report = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around LinearSolver.
Eigen::VectorXd solve(const SparseMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                      const SolverConfig& config = {}, SolveReport* report = nullptr);

/// Matrix Market coordinate real general format.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

}  // namespace vemt
