#include "vemt/monomials.hpp"

#include <cmath>

namespace vemt {

ScaledMonomials::ScaledMonomials(int degree, const Point& center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
  if (degree < 0) throw std::invalid_argument("ScaledMonomials: negative degree");
  if (!(scale > 0.0)) throw std::invalid_argument("ScaledMonomials: non-positive scale");
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) exps_.push_back({d - b, b});
}

namespace {

// powers[i] = z^i, i = 0..n
void powers(double z, int n, double* out) {
  out[0] = 1.0;
  for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * z;
}

}  // namespace

Eigen::VectorXd ScaledMonomials::values(const Point& x) const {
  const double zx = (x.x() - center_.x()) / scale_;
  const double zy = (x.y() - center_.y()) / scale_;
  double px[16], py[16];
  powers(zx, degree_, px);
  powers(zy, degree_, py);
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v(i) = px[exps_[i][0]] * py[exps_[i][1]];
  return v;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> ScaledMonomials::gradients(const Point& x) const {
  const double zx = (x.x() - center_.x()) / scale_;
  const double zy = (x.y() - center_.y()) / scale_;
  double px[16], py[16];
  powers(zx, degree_, px);
  powers(zy, degree_, py);
  Eigen::Matrix<double, 2, Eigen::Dynamic> g(2, size());
  for (int i = 0; i < size(); ++i) {
    const int a = exps_[i][0], b = exps_[i][1];
    g(0, i) = a > 0 ? a * px[a - 1] * py[b] / scale_ : 0.0;
    g(1, i) = b > 0 ? b * px[a] * py[b - 1] / scale_ : 0.0;
  }
  return g;
}

double ScaledMonomials::evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x) const {
  return values(x).head(coeffs.size()).dot(coeffs);
}

Eigen::MatrixXd ScaledMonomials::derivative_matrix(int direction) const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    const int a = exps_[i][0], b = exps_[i][1];
    if (direction == 0 && a > 0) d(i, monomial_index(a - 1, b)) = a / scale_;
    if (direction == 1 && b > 0) d(i, monomial_index(a, b - 1)) = b / scale_;
  }
  return d;
}

Eigen::MatrixXd ScaledMonomials::laplacian_matrix() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(size(), size());
  const double h2 = scale_ * scale_;
  for (int i = 0; i < size(); ++i) {
    const int a = exps_[i][0], b = exps_[i][1];
    if (a > 1) l(i, monomial_index(a - 2, b)) += a * (a - 1) / h2;
    if (b > 1) l(i, monomial_index(a, b - 2)) += b * (b - 1) / h2;
  }
  return l;
}

}  // namespace vemt
