#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vemt/vem_local.hpp"

using namespace vemt;
using vemt::testing::RandomPolynomial;
using vemt::testing::random_polygons;
using vemt::testing::unit_square;

namespace {

const MeshFamily kFamilies[] = {MeshFamily::quad, MeshFamily::hexa, MeshFamily::voro, MeshFamily::rand};

// Reference integral of f * g over the polygon with a high-order rule.
template <class F>
double integrate(const std::vector<Point>& p, F&& f) {
  const PolygonRule r = polygon_rule(p, 14);
  double s = 0;
  for (size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * f(r.points[i]);
  return s;
}

}  // namespace

TEST(LocalVem, DofCounts) {
  for (int k = 1; k <= 4; ++k) {
    const LocalVemElement el(unit_square(), k);
    EXPECT_EQ(el.num_dofs(), 4 * k + (k - 1) * k / 2);
    EXPECT_EQ(static_cast<int>(el.edge_dofs(0).size()), k + 1);
  }
}

TEST(LocalVem, UnitSquareHandExamples) {
  const LocalVemElement el(unit_square(), 1);
  const Eigen::VectorXd x2 = el.interpolate([](const Point& x) { return x.x() * x.x(); });
  // vertex values (0, 1, 1, 0): the boundary trace is linear, so the
  // projection is x (slope from int_dK v n_x = 1, constant from int_dK).
  const Eigen::VectorXd p = el.pi_nabla() * x2;
  const ScaledMonomials& b = el.basis();
  for (const Point& q : {Point(0.1, 0.7), Point(0.9, 0.2), Point(0.5, 0.5)})
    EXPECT_NEAR(b.evaluate(p, q), q.x(), 1e-14);
  // Pi0 of d/dx is the cell mean of the x-derivative: int_dK v n_x = 1
  const Eigen::VectorXd gx = el.grad_pi0(0) * x2;
  EXPECT_NEAR(ScaledMonomials(el.gradient_degree(), b.center(), b.scale()).evaluate(gx, {0.3, 0.4}), 1.0, 1e-14);

  const Eigen::VectorXd one = Eigen::VectorXd::Ones(4);
  EXPECT_NEAR(one.dot(el.mass() * one), 1.0, 1e-14);
  EXPECT_LT((el.stiffness(1.0) * one).norm(), 1e-14);
  const Eigen::VectorXd x = el.interpolate([](const Point& q) { return q.x(); });
  EXPECT_NEAR(x.dot(el.stiffness(2.5) * x), 2.5, 1e-14);

  const Eigen::MatrixXd K = el.convection([](const Point&) { return Point(1, 0); }, 0);
  EXPECT_NEAR(one.dot(K * x), 1.0, 1e-14);
  EXPECT_LT(el.convection([](const Point&) { return Point(0, 0); }, 0).norm(), 1e-15);

  EXPECT_NEAR(one.dot(el.reaction([](const Point&) { return 2.0; }) * one), 2.0, 1e-14);
  EXPECT_LT(el.reaction([](const Point&) { return 0.0; }).norm(), 1e-15);
  // non-polynomial weight: default rule is accurate to ~1e-6, extra degree to round-off
  const auto w = [](const Point& q) { return std::exp(q.x()) + std::exp(q.y()); };
  EXPECT_NEAR(one.dot(el.reaction(w) * one), 2 * (std::exp(1.0) - 1), 1e-6);
  const LocalVemElement fine(unit_square(), 1, VemOptions{0, 8});
  EXPECT_NEAR(one.dot(fine.reaction(w) * one), 2 * (std::exp(1.0) - 1), 1e-13);
}

TEST(LocalVem, InterpolateConstantsAndZero) {
  for (int k = 1; k <= 4; ++k) {
    const LocalVemElement el(unit_square(), k);
    const Eigen::VectorXd one = el.interpolate([](const Point&) { return 1.0; });
    for (int i = 0; i < el.num_point_dofs(); ++i) EXPECT_DOUBLE_EQ(one(i), 1.0);
    if (k >= 2) {
      EXPECT_NEAR(one(el.moment_dof(0)), 1.0, 1e-14);
    }
    const Eigen::VectorXd p = el.pi_nabla() * one;
    EXPECT_NEAR(p(0), 1.0, 1e-12);
    EXPECT_LT(p.tail(p.size() - 1).norm(), 1e-11);
    const Eigen::VectorXd z = el.interpolate([](const Point& x) { return std::sin(0.0) * std::exp(x.x()); });
    EXPECT_EQ(z.norm(), 0.0);
  }
}

// Projector consistency on random polygons of every family.
TEST(LocalVem, ProjectorsReproducePolynomials) {
  std::mt19937_64 rng(5);
  for (MeshFamily f : kFamilies)
    for (const auto& poly : random_polygons(f, 12, 31)) {
      for (int k = 1; k <= 3; ++k) {
        const LocalVemElement el(poly, k);
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(el.basis().size(), el.basis().size());
        EXPECT_LT((el.pi_nabla() * el.monomial_dofs() - I).norm(), 1e-10);
        EXPECT_LT((el.pi0() * el.monomial_dofs() - I).norm(), 1e-10);
        // idempotent on dof space
        const Eigen::MatrixXd Pn = el.monomial_dofs() * el.pi_nabla();
        const Eigen::MatrixXd P0 = el.monomial_dofs() * el.pi0();
        EXPECT_LT((Pn * Pn - Pn).norm(), 1e-9 * std::max(1.0, Pn.norm()));
        EXPECT_LT((P0 * P0 - P0).norm(), 1e-9 * std::max(1.0, P0.norm()));
        // interpolant of a random polynomial is projected back onto itself
        const RandomPolynomial p(k, el.centroid(), rng);
        const Eigen::VectorXd d = el.interpolate(p);
        const Eigen::VectorXd c = el.pi0() * d;
        for (const Point& x : poly) EXPECT_NEAR(el.basis().evaluate(c, x), p(x), 1e-10);
      }
    }
}

TEST(LocalVem, PolynomialConsistencyOfForms) {
  std::mt19937_64 rng(9);
  for (MeshFamily f : kFamilies)
    for (const auto& poly : random_polygons(f, 6, 77))
      for (int k = 1; k <= 3; ++k) {
        const LocalVemElement el(poly, k);
        const RandomPolynomial p(k, el.centroid(), rng), r(k, el.centroid(), rng);
        const Eigen::VectorXd dp = el.interpolate(p), dr = el.interpolate(r);
        const double a = dp.dot(el.stiffness(0.7) * dr);
        const double a_ref = 0.7 * integrate(poly, [&](const Point& x) { return p.gradient(x).dot(r.gradient(x)); });
        EXPECT_NEAR(a, a_ref, 1e-11 * std::max(1.0, std::abs(a_ref)));
        const double m = dp.dot(el.mass() * dr);
        const double m_ref = integrate(poly, [&](const Point& x) { return p(x) * r(x); });
        EXPECT_NEAR(m, m_ref, 1e-11 * std::max(1.0, std::abs(m_ref)));
        // stabilization kernel: polynomial dofs are untouched by (I - Pi)
        const Eigen::VectorXd res = dp - el.monomial_dofs() * (el.pi_nabla() * dp);
        EXPECT_LT(res.norm(), 1e-10 * std::max(1.0, dp.norm()));
      }
}

TEST(LocalVem, MassAndStiffnessSpectra) {
  for (MeshFamily f : kFamilies)
    for (const auto& poly : random_polygons(f, 4, 3))
      for (int k = 1; k <= 3; ++k) {
        const LocalVemElement el(poly, k);
        const Eigen::MatrixXd M = el.mass(), A = el.stiffness(1.0);
        EXPECT_LT((M - M.transpose()).norm(), 1e-14 * M.norm());
        EXPECT_LT((A - A.transpose()).norm(), 1e-13 * A.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M), ea(A);
        EXPECT_GT(em.eigenvalues()(0), 0.0);
        const auto& ev = ea.eigenvalues();
        EXPECT_NEAR(ev(0), 0.0, 1e-12 * ev(ev.size() - 1));
        EXPECT_GT(ev(1), 1e-8 * ev(ev.size() - 1));  // kernel is the constants only
      }
}

TEST(LocalVem, ScalingOfForms) {
  // mass scales like s^2, stiffness is scale invariant: the stability
  // constants do not depend on h for a fixed shape.
  const auto poly = random_polygons(MeshFamily::voro, 1, 4).front();
  for (int k = 1; k <= 3; ++k) {
    const LocalVemElement el(poly, k);
    for (double s : {0.5, 0.125}) {
      auto small = poly;
      for (Point& x : small) x *= s;
      const LocalVemElement es(small, k);
      EXPECT_LT((es.mass() - s * s * el.mass()).norm(), 1e-12 * s * s * el.mass().norm());
      EXPECT_LT((es.stiffness(1.0) - el.stiffness(1.0)).norm(), 1e-11 * el.stiffness(1.0).norm());
    }
  }
}

TEST(LocalVem, ConvectionSkewPartVanishesOnDiagonal) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  const auto poly = random_polygons(MeshFamily::hexa, 1, 8).front();
  const LocalVemElement el(poly, 2);
  const Eigen::MatrixXd K = el.convection([](const Point& x) { return Point(1 + x.y(), -x.x()); }, 1);
  const Eigen::MatrixXd S = 0.5 * (K - K.transpose());
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd v(el.num_dofs());
    for (int i = 0; i < v.size(); ++i) v(i) = N(rng);
    EXPECT_LT(std::abs(v.dot(S * v)), 1e-14 * v.squaredNorm() * std::max(1.0, K.norm()));
  }
}

TEST(LocalVem, GradientDegreeSwitch) {
  VemOptions opt;
  opt.gradient_degree_offset = -1;
  const LocalVemElement el(unit_square(), 2, opt);
  EXPECT_EQ(el.gradient_degree(), 1);
  EXPECT_EQ(el.grad_pi0(0).rows(), 3);
}

TEST(LocalVem, RejectsDegenerateInput) {
  EXPECT_THROW(LocalVemElement(unit_square(), 0), VemError);
}
