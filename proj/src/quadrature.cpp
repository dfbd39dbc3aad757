#include "vemt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "vemt/audit.hpp"

namespace vemt {

void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  // derivative from the standard identity; valid away from |x| = 1
  if (std::abs(x) < 1.0)
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  else
    dp = 0.5 * n * (n + 1.0) * std::pow(x, n + 1);
}

namespace {

LineRule build_gauss_legendre(int n) {
  LineRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    r.points[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

constexpr int kMaxLinePoints = 64;

}  // namespace

const LineRule& gauss_legendre(int npoints) {
  static const std::vector<LineRule> table = [] {
    std::vector<LineRule> t(kMaxLinePoints + 1);
    for (int n = 1; n <= kMaxLinePoints; ++n) t[n] = build_gauss_legendre(n);
    return t;
  }();
  if (npoints < 1 || npoints > kMaxLinePoints) throw QuadratureError("gauss_legendre: unsupported point count");
  return table[npoints];
}

const LineRule& gauss_legendre_for_degree(int degree) { return gauss_legendre(std::max(1, degree / 2 + 1)); }

EdgeRule edge_rule(const Point& a, const Point& b, int degree) {
  const double len = (b - a).norm();
  if (!(len > 0.0)) throw QuadratureError("edge_rule: zero-length edge");
  const LineRule& g = gauss_legendre_for_degree(degree);
  EdgeRule r;
  r.points.reserve(g.points.size());
  for (size_t i = 0; i < g.points.size(); ++i) {
    r.points.push_back(a + g.points[i] * (b - a));
    r.params.push_back(g.points[i]);
    r.weights.push_back(g.weights[i] * len);
  }
  return r;
}

namespace {

bool sees_all_edges(std::span<const Point> polygon, const Point& c) {
  const size_t n = polygon.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    const double scale = (b - a).squaredNorm();
    if (orient(c, a, b) <= 1e-14 * scale) return false;
  }
  return true;
}

}  // namespace

PolygonRule polygon_rule(std::span<const Point> polygon, int degree) {
  if (degree < 0) throw QuadratureError("polygon_rule: negative degree");
  Point apex = polygon_centroid(polygon);
  if (!sees_all_edges(polygon, apex)) {
    const auto kernel = kernel_polygon(polygon);
    if (kernel.empty()) throw QuadratureError("polygon_rule: cell is not star-shaped");
    apex = chebyshev_ball(kernel).center;
    if (!sees_all_edges(polygon, apex)) throw QuadratureError("polygon_rule: no interior kernel point");
  }
  // collapsed product rule: int_T F = 2|T| int_0^1 int_0^1 F(u, (1-u) v) (1-u) dv du
  const LineRule& gu = gauss_legendre_for_degree(degree + 1);
  const LineRule& gv = gauss_legendre_for_degree(degree);
  PolygonRule r;
  r.exact_degree = degree;
  const size_t n = polygon.size();
  r.points.reserve(n * gu.points.size() * gv.points.size());
  r.weights.reserve(r.points.capacity());
  for (size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    const double area2 = orient(apex, a, b);
    for (size_t iu = 0; iu < gu.points.size(); ++iu) {
      const double u = gu.points[iu];
      for (size_t iv = 0; iv < gv.points.size(); ++iv) {
        const double v = gv.points[iv];
        // vertex apex at u = 1 (collapsed corner)
        const double s = (1.0 - u) * (1.0 - v);
        const double t = (1.0 - u) * v;
        r.points.push_back(apex + s * (a - apex) + t * (b - apex));
        r.weights.push_back(area2 * gu.weights[iu] * gv.weights[iv] * (1.0 - u));
      }
    }
  }
  return r;
}

RadauRule gauss_radau(int q) {
  if (q < 0 || q > 10) throw QuadratureError("gauss_radau: q must be in [0, 10]");
  RadauRule rule;
  rule.q = q;
  if (q == 0) {
    rule.nodes = {1.0};
    rule.weights = {1.0};
    return rule;
  }
  // g(x) = P_q(x) - P_{q+1}(x) on [-1, 1]; its roots are the right Radau nodes.
  // Monomial coefficients through the three-term recurrence.
  std::vector<std::vector<double>> pc(q + 2, std::vector<double>(q + 2, 0.0));
  pc[0][0] = 1.0;
  pc[1][1] = 1.0;
  for (int k = 2; k <= q + 1; ++k)
    for (int j = 0; j <= k; ++j) {
      double v = -(k - 1.0) * pc[k - 2][j];
      if (j > 0) v += (2.0 * k - 1.0) * pc[k - 1][j - 1];
      pc[k][j] = v / k;
    }
  std::vector<double> g(q + 2);
  for (int j = 0; j <= q + 1; ++j) g[j] = pc[q][j] - pc[q + 1][j];
  // deflate the root at x = 1 (synthetic division)
  std::vector<double> h(q + 1);
  double carry = 0.0;
  for (int j = q + 1; j >= 1; --j) {
    carry = g[j] + carry;
    h[j - 1] = carry;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(q, q);
  for (int i = 1; i < q; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < q; ++i) companion(i, q - 1) = -h[i] / h[q];
  const Eigen::VectorXcd roots = companion.eigenvalues();

  std::vector<double> x(q);
  for (int i = 0; i < q; ++i) {
    double xi = std::clamp(roots(i).real(), -1.0 + 1e-12, 1.0 - 1e-12);
    for (int it = 0; it < 100; ++it) {
      double pq, dpq, pq1, dpq1;
      legendre(q, xi, pq, dpq);
      legendre(q + 1, xi, pq1, dpq1);
      const double dx = (pq - pq1) / (dpq - dpq1);
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = xi;
  }
  std::sort(x.begin(), x.end());
  x.push_back(1.0);

  // moment equations in the Legendre basis: sum_i w_i P_j(x_i) = 2 delta_j0
  const int n = q + 1;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 2.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double p, dp;
      legendre(j, x[i], p, dp);
      a(j, i) = p;
    }
  const Eigen::VectorXd w = a.fullPivLu().solve(b);

  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + x[i]);
    rule.weights[i] = 0.5 * w(i);
  }
  rule.nodes[q] = 1.0;

  double worst = 0.0;
  for (int j = 0; j <= 2 * q; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], j);
    worst = std::max(worst, std::abs(s - 1.0 / (j + 1.0)));
  }
  if (worst > 1e-12) throw QuadratureError("gauss_radau: exactness check failed (" + std::to_string(worst) + ")");
  for (double wi : rule.weights)
    if (!(wi > 0.0)) throw QuadratureError("gauss_radau: non-positive weight");
  return rule;
}

MappedRadau map_radau(const RadauRule& rule, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("map_radau: empty slab");
  const double tau = t1 - t0;
  MappedRadau m;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    m.nodes.push_back(t0 + tau * rule.nodes[i]);
    m.weights.push_back(tau * rule.weights[i]);
  }
  m.nodes.back() = t1;
  return m;
}

}  // namespace vemt
