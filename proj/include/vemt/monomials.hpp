#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "vemt/geometry.hpp"

namespace vemt {

/// Dimension of P_k in two variables; zero for k < 0.
constexpr int poly_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Index of the exponent (a, b) in the degree-graded ordering
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
constexpr int monomial_index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

/// Scaled monomials ((x - x_K) / h_K)^s, |s| <= degree.
class ScaledMonomials {
 public:
  ScaledMonomials() = default;
  ScaledMonomials(int degree, const Point& center, double scale);

  int degree() const { return degree_; }
  int size() const { return poly_dim(degree_); }
  const Point& center() const { return center_; }
  double scale() const { return scale_; }
  const std::array<int, 2>& exponent(int i) const { return exps_[i]; }

  Eigen::VectorXd values(const Point& x) const;
  /// Row 0: d/dx, row 1: d/dy.
  Eigen::Matrix<double, 2, Eigen::Dynamic> gradients(const Point& x) const;
  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x) const;

  /// Matrix D_x with d/dx m_i = sum_j D_x(i, j) m_j (same basis).
  Eigen::MatrixXd derivative_matrix(int direction) const;
  /// Matrix L with Laplacian m_i = sum_j L(i, j) m_j.
  Eigen::MatrixXd laplacian_matrix() const;

 private:
  int degree_ = 0;
  Point center_ = Point::Zero();
  double scale_ = 1.0;
  std::vector<std::array<int, 2>> exps_;
};

}  // namespace vemt
