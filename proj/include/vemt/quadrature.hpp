#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "vemt/geometry.hpp"

namespace vemt {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre on [0, 1] (exact to degree 2n - 1).
const LineRule& gauss_legendre(int npoints);

/// Gauss-Legendre rule exact to `degree` on [0, 1].
const LineRule& gauss_legendre_for_degree(int degree);

struct EdgeRule {
  std::vector<Point> points;
  std::vector<double> params;   // position along a -> b in [0, 1]
  std::vector<double> weights;  // length units
};

/// Gauss-Legendre mapped to the segment a -> b. Rejects zero-length edges.
EdgeRule edge_rule(const Point& a, const Point& b, int degree);

struct PolygonRule {
  std::vector<Point> points;
  std::vector<double> weights;  // area units, all positive
  int exact_degree = 0;
};

/// Fan triangulation from the centroid (or from the Chebyshev centre of
/// the kernel when the centroid does not see every edge), with a collapsed
/// Gauss product rule on each triangle.
PolygonRule polygon_rule(std::span<const Point> polygon, int degree);

/// Right Gauss-Radau rule on (0, 1]: q+1 nodes, last node 1, exact to 2q.
struct RadauRule {
  int q = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Throws QuadratureError if the construction fails its exactness check
/// (max |sum w_i x_i^j - 1/(j+1)| over j <= 2q above 1e-12).
RadauRule gauss_radau(int q);

struct MappedRadau {
  std::vector<double> nodes;    // t_{n,i} = t0 + tau * xi_i
  std::vector<double> weights;  // tau * omega_i
};

MappedRadau map_radau(const RadauRule& rule, double t0, double t1);

/// Legendre polynomial P_n(x) on [-1, 1] and its derivative.
void legendre(int n, double x, double& p, double& dp);

}  // namespace vemt
