#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "vemt/experiment.hpp"
#include "vemt/mesh_generators.hpp"
#include "vemt/transport.hpp"

using namespace vemt;

namespace {

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = N(rng);
  return v;
}

TransportProblem constant_problem(const PolyMesh& m, int k, double D) {
  TransportProblem p;
  p.diffusion = D;
  p.velocity = analytic_velocity(m, [](const Point&) { return Point(1, 0); }, k);
  p.reaction = [](double, const Point&) { return 0.0; };
  p.injected = [](double, const Point&) { return 0.0; };
  p.inflow = [](double, const Point&, const Point&) { return 1.0; };
  p.initial = [](const Point&) { return 1.0; };
  return p;
}

}  // namespace

TEST(DofMap, NumberingAndSharing) {
  const PolyMesh m = generate_quad(2);
  const DofMap d(m, 3);
  EXPECT_EQ(d.num_dofs(), m.num_vertices() + 2 * m.num_edges() + 3 * m.num_cells());
  // a shared edge carries the same global dofs, reversed for the right cell
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.is_boundary_edge(e)) continue;
    const int L = m.edge(e).left, R = m.edge(e).right;
    auto local_points = [&](int c) {
      const LocalVemElement el(m.cell_polygon(c), 3);
      std::map<std::pair<long, long>, int> pts;
      const auto dofs = d.cell_dofs(c);
      for (int i = 0; i < el.num_point_dofs(); ++i) {
        const Point x = el.dof_point(i);
        pts[{std::lround(x.x() * 1e9), std::lround(x.y() * 1e9)}] = dofs[i];
      }
      return pts;
    };
    const auto a = local_points(L), b = local_points(R);
    for (const auto& [x, dof] : a)
      if (b.count(x)) {
        EXPECT_EQ(b.at(x), dof);
      }
  }
}

TEST(Transport, MassExamples) {
  const PolyMesh m = family_mesh(MeshFamily::quad, 1);
  for (int k = 1; k <= 3; ++k) {
    const TransportAssembler as(m, k);
    const Eigen::VectorXd one = as.interpolate([](const Point&) { return 1.0; });
    EXPECT_NEAR(as.mass().quadratic_form(one), 1.0, 1e-10);
  }
  const TransportAssembler as(m, 1);
  const Eigen::MatrixXd M = as.mass().to_dense();
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues()(0), 0.0);
  // vertices (0,0) and (1,1) share no cell
  Eigen::VectorXd a = Eigen::VectorXd::Zero(as.num_dofs()), b = a;
  int v00 = -1, v11 = -1;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.vertex(v).norm() < 1e-14) v00 = v;
    if ((m.vertex(v) - Point(1, 1)).norm() < 1e-14) v11 = v;
  }
  a(v00) = 1;
  b(v11) = 1;
  EXPECT_EQ(a.dot(as.mass().multiply(b)), 0.0);
}

TEST(Transport, PureDiffusionWhenNoFlowNoReaction) {
  const PolyMesh m = family_mesh(MeshFamily::hexa, 1);
  const TransportAssembler as(m, 2);
  TransportProblem p;
  p.diffusion = 0.3;
  p.velocity = analytic_velocity(m, [](const Point&) { return Point(0, 0); }, 2);
  p.reaction = [](double, const Point&) { return 0.0; };
  const SparseMatrix a0 = as.a0(p, 0.0);
  const SparseMatrix A = as.stiffness(0.3);
  for (int i = 0; i < a0.nnz(); ++i) EXPECT_NEAR(a0.values()[i], A.values()[i], 1e-15);
}

TEST(Transport, SkewAndCoercivityIdentities) {
  const PolyMesh m = family_mesh(MeshFamily::hexa, 1);
  std::mt19937_64 rng(4);
  for (int k = 1; k <= 2; ++k) {
    const TransportAssembler as(m, k);
    const TransportProblem p = manufactured_problem(manufactured_velocity(m, "darcy", k, ExecPolicy::serial, {}), 0.01);
    const SparseMatrix b = as.skew_convection(p.velocity);
    const SparseMatrix A = as.stiffness(0.01), L = as.boundary_lambda(p.velocity);
    const SparseMatrix R = as.reaction([&](const Point& x) { return p.reaction(0.0, x); });
    const SparseMatrix a0 = as.a0(p, 0.0);
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd v = random_vector(as.num_dofs(), rng);
      const double scale = a0.quadratic_form(v);
      EXPECT_LT(std::abs(b.quadratic_form(v)), 1e-12 * scale);
      const double rhs = A.quadratic_form(v) + 0.5 * (L.quadratic_form(v) + R.quadratic_form(v));
      EXPECT_LT(std::abs(scale - rhs), 1e-12 * scale);
      EXPECT_GE(L.quadratic_form(v), 0.0);
      EXPECT_GE(R.quadratic_form(v), 0.0);
    }
  }
}

TEST(Transport, LambdaExamples) {
  const PolyMesh m = generate_quad(1);
  const TransportAssembler as(m, 1);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(4);
  const DiscreteVelocity u = analytic_velocity(m, [](const Point&) { return Point(1, 0); }, 1);
  EXPECT_NEAR(as.boundary_lambda(u).quadratic_form(one), 2.0, 1e-14);
  const SparseMatrix L2 = as.boundary_lambda(u.scaled(2.0)), L1 = as.boundary_lambda(u);
  for (int i = 0; i < L1.nnz(); ++i) EXPECT_EQ(L2.values()[i], 2 * L1.values()[i]);
  // u.n = 0 on every side of the square
  const DiscreteVelocity uy =
      analytic_velocity(m, [](const Point& x) { return Point(x.x() * (1 - x.x()), x.y() * (1 - x.y())); }, 2);
  EXPECT_NEAR(as.boundary_lambda(uy).to_dense().norm(), 0.0, 1e-15);
}

TEST(Transport, ConstantStateA0AndRhs) {
  const PolyMesh m = family_mesh(MeshFamily::quad, 1);
  const TransportAssembler as(m, 1);
  const TransportProblem p = constant_problem(m, 1, 0.7);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(as.num_dofs());
  EXPECT_NEAR(as.a0(p, 0.0).quadratic_form(one), 1.0, 1e-13);
  EXPECT_NEAR(one.dot(as.inflow_rhs(p, 0.0)), 1.0, 1e-13);
  // the constant is a stationary discrete state: A0 1 = G_I
  EXPECT_LT((as.a0(p, 0.0).multiply(one) - as.inflow_rhs(p, 0.0)).norm(), 1e-13);
}

TEST(Transport, SourceAndInflowVanishWhenInactive) {
  const PolyMesh m = family_mesh(MeshFamily::voro, 1);
  const TransportAssembler as(m, 2);
  TransportProblem p;
  p.velocity = analytic_velocity(m, [](const Point& x) { return Point(x.x(), x.y()); }, 2);
  p.reaction = [](double, const Point& x) { return -1.0 - x.x(); };
  p.injected = [](double, const Point&) { return 5.0; };
  p.inflow = [](double, const Point&, const Point&) { return 3.0; };
  EXPECT_EQ(as.source_rhs(p, 0.2).norm(), 0.0);
  EXPECT_EQ(as.inflow_rhs(p, 0.2).norm(), 0.0);
}

TEST(Transport, SerialAndParallelAssemblyBitIdentical) {
  const PolyMesh m = family_mesh(MeshFamily::voro, 2);
  const TransportAssembler s(m, 2, {}, ExecPolicy::serial), q(m, 2, {}, ExecPolicy::parallel);
  const TransportProblem p = manufactured_problem(analytic_velocity(m, manufactured::velocity, 2), 0.1);
  EXPECT_EQ(s.mass().values(), q.mass().values());
  EXPECT_EQ(s.a0(p, 0.5).values(), q.a0(p, 0.5).values());
  EXPECT_EQ(s.source_rhs(p, 0.5), q.source_rhs(p, 0.5));
  EXPECT_EQ(s.inflow_rhs(p, 0.5), q.inflow_rhs(p, 0.5));
}

TEST(Transport, NormEquivalenceBracketBounded) {
  // (|v|_1^2 + v.Lambda v) / ||v||_1^2 stays in a bounded bracket as h drops
  std::mt19937_64 rng(12);
  double lo = 1e300, hi = 0;
  for (int l = 1; l <= 3; ++l) {
    const PolyMesh m = family_mesh(MeshFamily::quad, l);
    const TransportAssembler as(m, 1);
    const DiscreteVelocity u = analytic_velocity(m, manufactured::velocity, 1);
    const SparseMatrix A = as.stiffness(1.0), L = as.boundary_lambda(u);
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd v = random_vector(as.num_dofs(), rng);
      const double h1 = A.quadratic_form(v) + as.mass().quadratic_form(v);
      const double r = (A.quadratic_form(v) + L.quadratic_form(v)) / h1;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 10.0);
}
