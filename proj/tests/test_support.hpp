#pragma once

#include <cmath>
#include <algorithm>
#include <random>
#include <vector>

#include "vemt/mesh_generators.hpp"

namespace vemt::testing {

inline std::vector<Point> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

/// Cells drawn from meshes of a family, each moved by a random similarity
/// so the polygons are not all near the unit square.
inline std::vector<std::vector<Point>> random_polygons(MeshFamily family, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::vector<Point>> out;
  int level = 1;
  while (static_cast<int>(out.size()) < count) {
    const PolyMesh m = family_mesh(family, level, seed + 17 * out.size());
    std::vector<int> cells(m.num_cells());
    for (int c = 0; c < m.num_cells(); ++c) cells[c] = c;
    std::shuffle(cells.begin(), cells.end(), rng);
    for (int c : cells) {
      if (static_cast<int>(out.size()) >= count) break;
      const double th = 2 * M_PI * U(rng), s = 0.2 + 3 * U(rng);
      const Point t(4 * U(rng) - 2, 4 * U(rng) - 2);
      Eigen::Matrix2d R;
      R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      auto p = m.cell_polygon(c);
      for (Point& x : p) x = s * (R * x) + t;
      out.push_back(std::move(p));
      if (out.size() % 8 == 0) break;  // use several meshes
    }
    level = level % 2 + 1;
  }
  return out;
}

/// Random polynomial of total degree k as a callable, with coefficients
/// relative to a given centre.
struct RandomPolynomial {
  int k;
  Point center;
  std::vector<double> coef;
  RandomPolynomial(int degree, const Point& c, std::mt19937_64& rng) : k(degree), center(c) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < (k + 1) * (k + 2) / 2; ++i) coef.push_back(U(rng));
  }
  double operator()(const Point& x) const {
    const Point d = x - center;
    double s = 0;
    int i = 0;
    for (int n = 0; n <= k; ++n)
      for (int b = 0; b <= n; ++b) s += coef[i++] * std::pow(d.x(), n - b) * std::pow(d.y(), b);
    return s;
  }
  Point gradient(const Point& x) const {
    const Point d = x - center;
    Point g = Point::Zero();
    int i = 0;
    for (int n = 0; n <= k; ++n)
      for (int b = 0; b <= n; ++b) {
        const int a = n - b;
        if (a > 0) g.x() += coef[i] * a * std::pow(d.x(), a - 1) * std::pow(d.y(), b);
        if (b > 0) g.y() += coef[i] * b * std::pow(d.x(), a) * std::pow(d.y(), b - 1);
        ++i;
      }
    return g;
  }
};

}  // namespace vemt::testing
