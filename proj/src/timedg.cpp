#include "vemt/timedg.hpp"

#include <algorithm>
#include <cmath>

namespace vemt {

TimePartition TimePartition::uniform(double final_time, double step) {
  if (!(final_time > 0.0) || !(step > 0.0)) throw std::invalid_argument("TimePartition::uniform: need T > 0, step > 0");
  const double ratio = final_time / step;
  const int n = static_cast<int>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("TimePartition::uniform: step does not divide the final time");
  TimePartition p;
  p.times.resize(n + 1);
  for (int i = 0; i <= n; ++i) p.times[i] = final_time * i / n;
  return p;
}

TimePartition TimePartition::from_times(std::vector<double> times) {
  if (times.size() < 2 || times.front() != 0.0) throw std::invalid_argument("TimePartition: must start at 0 with >= 1 slab");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("TimePartition: times must increase strictly");
  TimePartition p;
  p.times = std::move(times);
  return p;
}

double TimePartition::max_tau() const {
  double m = 0.0;
  for (int n = 0; n < num_slabs(); ++n) m = std::max(m, tau(n));
  return m;
}

RadauLagrange::RadauLagrange(const RadauRule& rule) : rule_(rule), nodes_(rule.nodes) {
  const int s = size();
  denom_.assign(s, 1.0);
  for (int i = 0; i < s; ++i)
    for (int m = 0; m < s; ++m)
      if (m != i) denom_[i] *= nodes_[i] - nodes_[m];
}

double RadauLagrange::value(int i, double xi) const {
  double v = 1.0;
  for (int m = 0; m < size(); ++m)
    if (m != i) v *= xi - nodes_[m];
  return v / denom_[i];
}

double RadauLagrange::derivative(int i, double xi) const {
  double d = 0.0;
  for (int m = 0; m < size(); ++m) {
    if (m == i) continue;
    double p = 1.0;
    for (int r = 0; r < size(); ++r)
      if (r != i && r != m) p *= xi - nodes_[r];
    d += p;
  }
  return d / denom_[i];
}

Eigen::VectorXd RadauLagrange::values(double xi) const {
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v(i) = value(i, xi);
  return v;
}

Eigen::VectorXd SlabSolution::evaluate(const RadauLagrange& basis, double t) const {
  const double xi = (t - t0) / (t1 - t0);
  return values * basis.values(xi);
}

SparseMatrix build_slab_matrix(const SparseMatrix& mass, const std::vector<const SparseMatrix*>& a0,
                               const RadauLagrange& basis, double tau) {
  const int s = basis.size();
  const int n = mass.rows();
  if (a0.size() != 1 && static_cast<int>(a0.size()) != s)
    throw std::invalid_argument("build_slab_matrix: need one A0 or one per Radau node");
  for (const SparseMatrix* a : a0)
    if (!a->same_pattern(mass)) throw std::invalid_argument("build_slab_matrix: A0 and M patterns differ");
  const auto& w = basis.rule().weights;
  const auto& xi = basis.rule().nodes;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(s) * s * mass.nnz());
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      const double cm = w[j] * basis.derivative(i, xi[j]) + basis.value(i, 0.0) * basis.value(j, 0.0);
      const double ca = (i == j) ? tau * w[j] : 0.0;
      const SparseMatrix& a = *a0[a0.size() == 1 ? 0 : j];
      for (int r = 0; r < n; ++r)
        for (int p = mass.row_offsets()[r]; p < mass.row_offsets()[r + 1]; ++p)
          t.emplace_back(j * n + r, i * n + mass.col_indices()[p], cm * mass.values()[p] + ca * a.values()[p]);
    }
  return SparseMatrix::from_triplets(s * n, s * n, t);
}

Eigen::VectorXd build_slab_rhs(const SparseMatrix& mass, const std::vector<Eigen::VectorXd>& loads,
                               const RadauLagrange& basis, double tau, const Eigen::VectorXd& carry) {
  const int s = basis.size();
  const int n = mass.rows();
  if (static_cast<int>(loads.size()) != s) throw std::invalid_argument("build_slab_rhs: need one load per Radau node");
  const Eigen::VectorXd mc = mass.multiply(carry);
  Eigen::VectorXd rhs(s * n);
  for (int j = 0; j < s; ++j) rhs.segment(j * n, n) = tau * basis.rule().weights[j] * loads[j] + basis.value(j, 0.0) * mc;
  return rhs;
}

SlabSystem build_slab_system(const SparseMatrix& mass, const std::vector<const SparseMatrix*>& a0,
                             const std::vector<Eigen::VectorXd>& loads, const RadauLagrange& basis, double tau,
                             const Eigen::VectorXd& carry) {
  return {build_slab_matrix(mass, a0, basis, tau), build_slab_rhs(mass, loads, basis, tau, carry)};
}

TransportRun advance(const TransportAssembler& assembler, const TransportProblem& problem,
                     const TimePartition& partition, int q, const AdvanceOptions& options) {
  const RadauLagrange basis(gauss_radau(q));
  const int s = q + 1;
  const int n = assembler.num_dofs();
  const SparseMatrix& mass = assembler.mass();

  TransportRun run;
  run.initial = problem.initial ? assembler.interpolate(problem.initial) : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd carry = run.initial;

  SparseMatrix a_const;
  if (!problem.reaction_depends_on_time) a_const = assembler.a0(problem, 0.0);

  LinearSolver solver(options.solver);
  double factored_tau = -1.0;
  for (int k = 0; k < partition.num_slabs(); ++k) {
    const double t0 = partition.times[k];
    const double tau = partition.tau(k);
    std::vector<double> tn(s);
    for (int j = 0; j < s; ++j) tn[j] = t0 + tau * basis.rule().nodes[j];
    tn.back() = partition.times[k + 1];

    std::vector<Eigen::VectorXd> loads(s);
    for (int j = 0; j < s; ++j) loads[j] = assembler.source_rhs(problem, tn[j]) + assembler.inflow_rhs(problem, tn[j]);

    try {
      if (problem.reaction_depends_on_time) {
        std::vector<SparseMatrix> a(s);
        std::vector<const SparseMatrix*> ap(s);
        for (int j = 0; j < s; ++j) {
          a[j] = assembler.a0(problem, tn[j]);
          ap[j] = &a[j];
        }
        solver.factorize(build_slab_matrix(mass, ap, basis, tau));
        ++run.factorizations;
      } else if (std::abs(tau - factored_tau) > 1e-13 * tau) {
        solver.factorize(build_slab_matrix(mass, {&a_const}, basis, tau));
        factored_tau = tau;
        ++run.factorizations;
      }
      const Eigen::VectorXd x = solver.solve(build_slab_rhs(mass, loads, basis, tau, carry));
      SlabSolution slab;
      slab.index = k;
      slab.t0 = t0;
      slab.t1 = partition.times[k + 1];
      slab.values = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, s);
      slab.carry_in = carry;
      carry = slab.trace();
      if (options.observer) options.observer(slab);
      if (options.keep_slabs) run.slabs.push_back(std::move(slab));
    } catch (const LinearSolverError& e) {
      throw TimeSteppingError(k, e.what());
    }
  }
  run.final_trace = carry;
  return run;
}

Eigen::VectorXd l_tau(const RadauRule& rule, const Eigen::VectorXd& nodal) {
  Eigen::VectorXd v(nodal.size());
  for (int i = 0; i < nodal.size(); ++i) v(i) = nodal(i) / rule.nodes[i];
  return v;
}

double left_value(const RadauLagrange& basis, const Eigen::VectorXd& nodal) { return basis.values(0.0).dot(nodal); }

double l_tau_bound_constant(const RadauRule& rule) {
  const RadauLagrange b(rule);
  double c = 0.0;
  for (int i = 0; i < b.size(); ++i) {
    const double a = b.value(i, 0.0) / rule.nodes[i];
    c += a * a / rule.weights[i];
  }
  return c;
}

Eigen::VectorXd pi_tau(const std::function<double(double)>& v, const RadauLagrange& basis, double t0, double t1) {
  const int s = basis.size();
  const double tau = t1 - t0;
  const LineRule& g = gauss_legendre(std::min(64, s + 20));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s, s);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s);
  for (size_t m = 0; m < g.points.size(); ++m) {
    const double xi = g.points[m];
    const double vm = v(t0 + tau * xi);
    const Eigen::VectorXd l = basis.values(xi);
    for (int j = 0; j < s - 1; ++j) {
      double p, dp;
      legendre(j, 2.0 * xi - 1.0, p, dp);
      a.row(j) += g.weights[m] * p * l.transpose();
      b(j) += g.weights[m] * p * vm;
    }
  }
  a(s - 1, s - 1) = 1.0;
  b(s - 1) = v(t1);
  return a.fullPivLu().solve(b);
}

}  // namespace vemt
