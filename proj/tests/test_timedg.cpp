#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "vemt/experiment.hpp"
#include "vemt/postproc.hpp"
#include "vemt/timedg.hpp"

#include "oracles.hpp"

using namespace vemt;
using namespace vemt::testing;

TEST(TimePartition, UniformAndValidation) {
  const TimePartition p = TimePartition::uniform(1.0, 1.0 / 3.0);
  EXPECT_EQ(p.num_slabs(), 3);
  EXPECT_EQ(p.final_time(), 1.0);
  EXPECT_NEAR(p.max_tau(), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(TimePartition::from_times({0.0, 0.5, 0.4}), std::invalid_argument);
}

TEST(RadauLagrange, CardinalAtNodes) {
  for (int q = 0; q <= 5; ++q) {
    const RadauRule r = gauss_radau(q);
    const RadauLagrange b(r);
    for (int i = 0; i <= q; ++i)
      for (int j = 0; j <= q; ++j) EXPECT_NEAR(b.value(i, r.nodes[j]), i == j ? 1.0 : 0.0, 1e-13);
    // derivative of sum l_i is zero
    double d = 0;
    for (int i = 0; i <= q; ++i) d += b.derivative(i, 0.37);
    EXPECT_NEAR(d, 0.0, 1e-11);
  }
}

TEST(Slab, ImplicitEulerForQZero) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  for (int t = 0; t < 5; ++t) {
    const int n = 6;
    Eigen::MatrixXd B = Eigen::MatrixXd::Random(n, n), M = B * B.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n) + n * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd carry(n), f(n);
    for (int i = 0; i < n; ++i) carry(i) = N(rng), f(i) = N(rng);
    const double tau = 0.37;
    const Eigen::MatrixXd x = slab_solve(M, A, {f}, 0, tau, carry);
    const Eigen::VectorXd ref = (M + tau * A).lu().solve(tau * f + M * carry);
    EXPECT_LT((x.col(0) - ref).norm(), 1e-12 * ref.norm());
  }
}

TEST(Slab, ScalarTwoStageValue) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const Eigen::MatrixXd x = slab_solve(one, one, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)}, 1, 1.0,
                                       Eigen::VectorXd::Ones(1));
  EXPECT_NEAR(x(0, 1), 4.0 / 11.0, 1e-14);
}

TEST(Slab, NoDynamicsKeepsCarry) {
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3) * 2.0, A = Eigen::MatrixXd::Zero(3, 3);
  const Eigen::VectorXd carry = Eigen::Vector3d(1, -2, 0.5);
  for (int q = 0; q <= 4; ++q) {
    const Eigen::MatrixXd x = slab_solve(M, A, std::vector<Eigen::VectorXd>(q + 1, Eigen::VectorXd::Zero(3)), q, 0.3, carry);
    for (int i = 0; i <= q; ++i) EXPECT_LT((x.col(i) - carry).norm(), 1e-13);
  }
}

TEST(Slab, MatchesRadauIIARungeKutta) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  const int n = 10;
  for (int q = 0; q <= 3; ++q) {
    const RadauIIA rk = radau_iia(q + 1);
    const int s = q + 1;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Random(n, n);
      const Eigen::MatrixXd M = B * B.transpose() + n * Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd A = Eigen::MatrixXd::Random(n, n) + 2 * Eigen::MatrixXd::Identity(n, n);
      Eigen::VectorXd y0(n);
      for (int i = 0; i < n; ++i) y0(i) = N(rng);
      std::vector<Eigen::VectorXd> F(s, Eigen::VectorXd(n));
      for (auto& f : F)
        for (int i = 0; i < n; ++i) f(i) = N(rng);
      const double tau = 0.25;
      // stages: M (Y_i - y0) = tau sum_j a_ij (F_j - A Y_j)
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(s * n, s * n);
      Eigen::VectorXd rhs(s * n);
      for (int i = 0; i < s; ++i) {
        rhs.segment(i * n, n) = M * y0;
        S.block(i * n, i * n, n, n) += M;
        for (int j = 0; j < s; ++j) {
          S.block(i * n, j * n, n, n) += tau * rk.a(i, j) * A;
          rhs.segment(i * n, n) += tau * rk.a(i, j) * F[j];
        }
      }
      const Eigen::VectorXd Y = S.fullPivLu().solve(rhs);
      const Eigen::MatrixXd x = slab_solve(M, A, F, q, tau, y0);
      for (int i = 0; i < s; ++i) {
        const Eigen::VectorXd yi = Y.segment(i * n, n);
        EXPECT_LT((x.col(i) - yi).norm(), 1e-10 * std::max(1.0, yi.norm())) << "q=" << q;
      }
    }
  }
}

TEST(Slab, TemporalOrderOnScalarDecay) {
  for (int q = 0; q <= 2; ++q) {
    const RadauLagrange basis(gauss_radau(q));
    std::vector<double> h, e_trace, e_l2;
    for (int N : {2, 4, 8, 16}) {
      const double tau = 1.0 / N;
      const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
      Eigen::VectorXd carry = Eigen::VectorXd::Ones(1);
      double l2 = 0;
      for (int n = 0; n < N; ++n) {
        const Eigen::MatrixXd x = slab_solve(one, one, std::vector<Eigen::VectorXd>(q + 1, Eigen::VectorXd::Zero(1)), q, tau, carry);
        const LineRule& g = gauss_legendre(q + 4);
        for (size_t m = 0; m < g.points.size(); ++m) {
          const double d = basis.values(g.points[m]).dot(x.row(0).transpose()) - std::exp(-(n + g.points[m]) * tau);
          l2 += tau * g.weights[m] * d * d;
        }
        carry = x.col(q);
      }
      h.push_back(tau);
      e_trace.push_back(std::abs(carry(0) - std::exp(-1.0)));
      e_l2.push_back(std::sqrt(l2));
    }
    EXPECT_NEAR(fitted_rate(h, e_trace), 2 * q + 1, 0.3) << "q=" << q;
    EXPECT_NEAR(fitted_rate(h, e_l2), q + 1, 0.3) << "q=" << q;
  }
}

TEST(LTau, NodalScalingExample) {
  const RadauRule r = gauss_radau(1);
  const Eigen::VectorXd l = l_tau(r, Eigen::VectorXd::Ones(2));
  EXPECT_NEAR(l(0), 3.0, 1e-14);
  EXPECT_NEAR(l(1), 1.0, 1e-14);
}

TEST(LTau, IdentityOnRandomPolynomials) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> N;
  for (int q = 0; q <= 4; ++q) {
    const RadauRule r = gauss_radau(q);
    const RadauLagrange b(r);
    const LineRule& g = gauss_legendre(q + 3);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd v(q + 1);
      for (int i = 0; i <= q; ++i) v(i) = N(rng);
      const Eigen::VectorXd lv = l_tau(r, v);
      double lhs = left_value(b, v) * left_value(b, lv);
      for (size_t m = 0; m < g.points.size(); ++m) {
        double dv = 0;
        for (int i = 0; i <= q; ++i) dv += b.derivative(i, g.points[m]) * v(i);
        lhs += g.weights[m] * dv * b.values(g.points[m]).dot(lv);
      }
      // nodal sum carries xi_i^{-1} v_i * L v_i = xi_i^{-2} v_i^2
      double rhs = v(q) * v(q);
      for (int i = 0; i <= q; ++i) rhs += r.weights[i] / r.nodes[i] * v(i) * lv(i);
      rhs *= 0.5;
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(LTau, BoundConstantIsSharpAndTauIndependent) {
  for (int q = 0; q <= 4; ++q) {
    const RadauRule r = gauss_radau(q);
    const RadauLagrange b(r);
    const double C = l_tau_bound_constant(r);
    for (double tau : {1.0, 0.1, 1e-3}) {
      // oracle: largest generalized eigenvalue of (a a^T, tau^{-1} G)
      const LineRule& g = gauss_legendre(q + 2);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(q + 1, q + 1);
      for (size_t m = 0; m < g.points.size(); ++m) {
        const Eigen::VectorXd l = b.values(g.points[m]);
        G += tau * g.weights[m] * l * l.transpose();
      }
      Eigen::VectorXd a(q + 1);
      for (int i = 0; i <= q; ++i) a(i) = b.value(i, 0.0) / r.nodes[i];
      const double sharp = a.dot(G.ldlt().solve(a)) * tau;
      EXPECT_NEAR(sharp, C, 1e-10 * C) << "q=" << q << " tau=" << tau;
    }
  }
}

TEST(PiTau, ConsistencyEndpointAndRate) {
  for (int q = 0; q <= 3; ++q) {
    const RadauRule r = gauss_radau(q);
    const RadauLagrange b(r);
    auto p = [q](double t) { return std::pow(t - 0.2, q) - 0.3 * t; };
    const Eigen::VectorXd pv = pi_tau(p, b, 0.5, 0.9);
    for (int i = 0; i <= q; ++i) EXPECT_NEAR(pv(i), p(0.5 + 0.4 * r.nodes[i]), 1e-12);
    auto v = [q](double t) { return std::pow(t, q + 1); };
    std::vector<double> h, e;
    for (double tau : {0.5, 0.25, 0.125, 0.0625}) {
      const Eigen::VectorXd pi = pi_tau(v, b, 0.0, tau);
      EXPECT_NEAR(pi(q), v(tau), 1e-14);
      const LineRule& g = gauss_legendre(q + 4);
      double e2 = 0;
      for (size_t m = 0; m < g.points.size(); ++m) {
        const double d = b.values(g.points[m]).dot(pi) - v(tau * g.points[m]);
        e2 += tau * g.weights[m] * d * d;
      }
      h.push_back(tau);
      e.push_back(std::sqrt(e2) / std::sqrt(tau));  // per unit time, rate q+1
    }
    EXPECT_NEAR(fitted_rate(h, e), q + 1, 0.3);
  }
}

TEST(Advance, ZeroDataGivesZero) {
  const PolyMesh m = family_mesh(MeshFamily::voro, 1);
  const TransportAssembler as(m, 2);
  TransportProblem p;
  p.velocity = analytic_velocity(m, manufactured::velocity, 2);
  p.reaction = [](double, const Point& x) { return x.x() - 0.5; };
  p.injected = [](double, const Point&) { return 0.0; };
  p.inflow = [](double, const Point&, const Point&) { return 0.0; };
  p.initial = [](const Point&) { return 0.0; };
  const TransportRun run = advance(as, p, TimePartition::uniform(1.0, 0.25), 2);
  for (const auto& s : run.slabs) EXPECT_EQ(s.values.norm(), 0.0);
  EXPECT_EQ(run.factorizations, 1);
}

TEST(Advance, ConstantStatePreserved) {
  const PolyMesh m = family_mesh(MeshFamily::hexa, 1);
  for (int k = 1; k <= 2; ++k)
    for (double D : {1.0, 1e-4}) {
      const TransportAssembler as(m, k);
      TransportProblem p;
      p.diffusion = D;
      p.velocity = analytic_velocity(m, [](const Point&) { return Point(1, 0); }, k);
      p.reaction = [](double, const Point&) { return 0.0; };
      p.injected = [](double, const Point&) { return 0.0; };
      p.inflow = [](double, const Point&, const Point&) { return 1.0; };
      p.initial = [](const Point&) { return 1.0; };
      const TransportRun run = advance(as, p, TimePartition::uniform(1.0, 0.1), k);
      ASSERT_EQ(run.slabs.size(), 10u);
      for (const auto& s : run.slabs)
        for (int i = 0; i < s.values.cols(); ++i) EXPECT_LT((s.values.col(i) - run.initial).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Advance, TraceIsPolynomialValueAtSlabEnd) {
  const PolyMesh m = family_mesh(MeshFamily::quad, 1);
  const TransportAssembler as(m, 1);
  const TransportProblem p = manufactured_problem(analytic_velocity(m, manufactured::velocity, 1), 0.1);
  const RadauLagrange b(gauss_radau(2));
  const TransportRun run = advance(as, p, TimePartition::uniform(1.0, 0.25), 2);
  for (const auto& s : run.slabs) EXPECT_EQ(s.evaluate(b, s.t1), s.trace());
  for (size_t n = 1; n < run.slabs.size(); ++n) EXPECT_EQ(run.slabs[n].carry_in, run.slabs[n - 1].trace());
  EXPECT_EQ(run.final_trace, run.slabs.back().trace());
}

TEST(Advance, ManufacturedErrorDecreasesWithRefinement) {
  ExperimentConfig c;
  const ErrorReport r1 = run_manufactured(c, MeshFamily::quad, 1, 1, 1, 1.0);
  const ErrorReport r2 = run_manufactured(c, MeshFamily::quad, 2, 1, 1, 1.0);
  EXPECT_TRUE(std::isfinite(r2.err));
  EXPECT_LT(r2.err, r1.err);
}

TEST(Advance, TimeDependentReactionReassembles) {
  const PolyMesh m = family_mesh(MeshFamily::quad, 1);
  const TransportAssembler as(m, 1);
  TransportProblem p = manufactured_problem(analytic_velocity(m, manufactured::velocity, 1), 0.1);
  p.reaction_depends_on_time = true;
  const TransportRun a = advance(as, p, TimePartition::uniform(1.0, 0.25), 1);
  p.reaction_depends_on_time = false;
  const TransportRun b = advance(as, p, TimePartition::uniform(1.0, 0.25), 1);
  EXPECT_GT(a.factorizations, b.factorizations);
  EXPECT_LT((a.final_trace - b.final_trace).norm(), 1e-10 * b.final_trace.norm());
}
