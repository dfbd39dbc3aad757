#include "vemt/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace vemt {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> col_indices)
    : rows_(rows), cols_(cols), offsets_(std::move(row_offsets)), cols_idx_(std::move(col_indices)) {
  if (rows < 0 || cols < 0 || static_cast<int>(offsets_.size()) != rows + 1 || offsets_.front() != 0 ||
      offsets_.back() != static_cast<int>(cols_idx_.size()))
    throw std::invalid_argument("SparseMatrix: inconsistent row offsets");
  for (int r = 0; r < rows; ++r)
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) {
      if (cols_idx_[p] < 0 || cols_idx_[p] >= cols) throw std::invalid_argument("SparseMatrix: column out of range");
      if (p > offsets_[r] && cols_idx_[p] <= cols_idx_[p - 1])
        throw std::invalid_argument("SparseMatrix: columns must be sorted and unique");
    }
  values_.assign(cols_idx_.size(), 0.0);
}

SparseMatrix SparseMatrix::from_dof_lists(int n, const std::vector<std::vector<int>>& lists) {
  std::vector<std::vector<int>> rows(n);
  for (const auto& l : lists)
    for (int r : l) {
      if (r < 0 || r >= n) throw std::invalid_argument("from_dof_lists: dof out of range");
      rows[r].insert(rows[r].end(), l.begin(), l.end());
    }
  std::vector<int> offsets(n + 1, 0), cols;
  for (int r = 0; r < n; ++r) {
    auto& v = rows[r];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    cols.insert(cols.end(), v.begin(), v.end());
    offsets[r + 1] = static_cast<int>(cols.size());
  }
  return SparseMatrix(n, n, std::move(offsets), std::move(cols));
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Eigen::Triplet<double>>& entries) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  std::vector<int> offsets(m.outerIndexPtr(), m.outerIndexPtr() + rows + 1);
  std::vector<int> idx(m.innerIndexPtr(), m.innerIndexPtr() + m.nonZeros());
  SparseMatrix s(rows, cols, std::move(offsets), std::move(idx));
  std::copy(m.valuePtr(), m.valuePtr() + m.nonZeros(), s.values_.begin());
  return s;
}

int SparseMatrix::find(int r, int c) const {
  if (r < 0 || r >= rows_) return -1;
  const auto b = cols_idx_.begin() + offsets_[r];
  const auto e = cols_idx_.begin() + offsets_[r + 1];
  const auto it = std::lower_bound(b, e, c);
  return (it != e && *it == c) ? static_cast<int>(it - cols_idx_.begin()) : -1;
}

double SparseMatrix::coeff(int r, int c) const {
  const int p = find(r, c);
  return p < 0 ? 0.0 : values_[p];
}

void SparseMatrix::scatter_add(const Eigen::Ref<const Eigen::MatrixXd>& block, std::span<const int> dofs) {
  scatter_add(block, dofs, dofs);
}

void SparseMatrix::scatter_add(const Eigen::Ref<const Eigen::MatrixXd>& block, std::span<const int> row_dofs,
                               std::span<const int> col_dofs) {
  if (block.rows() != static_cast<Eigen::Index>(row_dofs.size()) ||
      block.cols() != static_cast<Eigen::Index>(col_dofs.size()))
    throw std::logic_error("scatter_add: block shape does not match dof lists");
  for (size_t i = 0; i < row_dofs.size(); ++i)
    for (size_t j = 0; j < col_dofs.size(); ++j) {
      const int p = find(row_dofs[i], col_dofs[j]);
      if (p < 0)
        throw std::logic_error("scatter_add: entry (" + std::to_string(row_dofs[i]) + ", " +
                               std::to_string(col_dofs[j]) + ") outside the sparsity pattern");
      values_[p] += block(i, j);
    }
}

void SparseMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

bool SparseMatrix::same_pattern(const SparseMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && offsets_ == o.offsets_ && cols_idx_ == o.cols_idx_;
}

void SparseMatrix::add_scaled(double alpha, const SparseMatrix& other) {
  if (!same_pattern(other)) throw std::logic_error("add_scaled: patterns differ");
  for (size_t p = 0; p < values_.size(); ++p) values_[p] += alpha * other.values_[p];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) t.emplace_back(cols_idx_[p], r, values_[p]);
  SparseMatrix s = from_triplets(cols_, rows_, t);
  return s;
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("multiply: size mismatch");
  Eigen::VectorXd y(rows_);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) s += values_[p] * x(cols_idx_[p]);
    y(r) = s;
  }
  return y;
}

double SparseMatrix::quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& x) const { return x.dot(multiply(x)); }

Eigen::SparseMatrix<double, Eigen::ColMajor> SparseMatrix::to_eigen() const {
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor>> m(rows_, cols_, nnz(), offsets_.data(),
                                                                   cols_idx_.data(), values_.data());
  Eigen::SparseMatrix<double, Eigen::ColMajor> c = m;
  c.makeCompressed();
  return c;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int p = offsets_[r]; p < offsets_[r + 1]; ++p) d(r, cols_idx_[p]) = values_[p];
  return d;
}

struct LinearSolver::Impl {
  SolverConfig config;
  Eigen::SparseMatrix<double> a;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> gmres;
  bool ready = false;
  bool used = false;
};

LinearSolver::LinearSolver(SolverConfig config) : impl_(std::make_unique<Impl>()) { impl_->config = config; }
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

bool LinearSolver::factorized() const { return impl_->ready; }

void LinearSolver::factorize(const SparseMatrix& a) {
  using K = LinearSolverError::Kind;
  if (a.rows() != a.cols()) throw LinearSolverError(K::shape, "factorize: matrix is not square");
  impl_->ready = false;
  // an empty row or column makes the matrix singular whatever the values
  std::vector<char> col_hit(a.cols(), 0);
  for (int r = 0; r < a.rows(); ++r) {
    bool row_hit = false;
    for (int p = a.row_offsets()[r]; p < a.row_offsets()[r + 1]; ++p)
      if (a.values()[p] != 0.0) {
        row_hit = true;
        col_hit[a.col_indices()[p]] = 1;
      }
    if (!row_hit) throw LinearSolverError(K::structural_singularity, "structurally singular: row " + std::to_string(r) + " is empty");
  }
  for (int c = 0; c < a.cols(); ++c)
    if (!col_hit[c]) throw LinearSolverError(K::structural_singularity, "structurally singular: column " + std::to_string(c) + " is empty");

  impl_->a = a.to_eigen();
  if (impl_->config.method == SolverMethod::direct) {
    impl_->lu.analyzePattern(impl_->a);
    impl_->lu.factorize(impl_->a);
    if (impl_->lu.info() != Eigen::Success)
      throw LinearSolverError(K::numerical_breakdown, "numerical breakdown in LU: " + impl_->lu.lastErrorMessage());
  } else {
    auto& g = impl_->gmres;
    g.preconditioner().setDroptol(impl_->config.ilut_drop);
    g.preconditioner().setFillfactor(impl_->config.ilut_fill);
    g.set_restart(impl_->config.restart);
    g.setMaxIterations(impl_->config.max_iterations);
    g.setTolerance(impl_->config.iterative_tolerance);
    g.compute(impl_->a);
    if (g.info() != Eigen::Success) throw LinearSolverError(K::numerical_breakdown, "numerical breakdown in ILUT");
  }
  impl_->ready = true;
  impl_->used = false;
}

Eigen::VectorXd LinearSolver::solve(const Eigen::Ref<const Eigen::VectorXd>& b, SolveReport* report) {
  using K = LinearSolverError::Kind;
  if (!impl_->ready) throw std::logic_error("LinearSolver::solve before factorize");
  if (b.size() != impl_->a.rows()) throw LinearSolverError(K::shape, "solve: right-hand side size mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  Eigen::VectorXd x;
  SolveReport rep;
  rep.method = impl_->config.method;
  rep.reused_factorization = impl_->used;
  const double bn = b.norm();
  if (impl_->config.method == SolverMethod::direct) {
    x = impl_->lu.solve(b);
    Eigen::VectorXd r = b - impl_->a * x;
    // one step of iterative refinement if the first residual is marginal
    if (bn > 0.0 && r.norm() > 1e-3 * impl_->config.direct_tolerance * bn) {
      x += impl_->lu.solve(r);
      r = b - impl_->a * x;
    }
    rep.relative_residual = bn > 0.0 ? r.norm() / bn : r.norm();
    if (!x.allFinite()) throw LinearSolverError(K::numerical_breakdown, "direct solve produced non-finite values");
    if (rep.relative_residual > impl_->config.direct_tolerance)
      throw LinearSolverError(K::numerical_breakdown,
                              "direct solve residual " + std::to_string(rep.relative_residual) + " above tolerance");
  } else {
    x = impl_->gmres.solve(b);
    rep.iterations = static_cast<int>(impl_->gmres.iterations());
    const Eigen::VectorXd r = b - impl_->a * x;
    rep.relative_residual = bn > 0.0 ? r.norm() / bn : r.norm();
    if (impl_->gmres.info() != Eigen::Success || rep.relative_residual > 10.0 * impl_->config.iterative_tolerance)
      throw LinearSolverError(K::not_converged, "GMRES did not converge (relative residual " +
                                                    std::to_string(rep.relative_residual) + ")");
  }
  impl_->used = true;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (report) *report = rep;
  return x;
}

Eigen::VectorXd solve(const SparseMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& b, const SolverConfig& config,
                      SolveReport* report) {
  LinearSolver s(config);
  s.factorize(a);
  return s.solve(b, report);
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < a.rows(); ++r)
    for (int p = a.row_offsets()[r]; p < a.row_offsets()[r + 1]; ++p)
      out << r + 1 << ' ' << a.col_indices()[p] + 1 << ' ' << a.values()[p] << '\n';
}

}  // namespace vemt
