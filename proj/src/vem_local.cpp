#include "vemt/vem_local.hpp"

#include <cmath>

namespace vemt {

LocalVemElement::LocalVemElement(std::vector<Point> polygon, int k, VemOptions options)
    : polygon_(std::move(polygon)), k_(k) {
  if (k < 1) throw VemError("LocalVemElement: k must be >= 1");
  if (k > 8) throw VemError("LocalVemElement: k above 8 is not supported");
  if (options.data_quadrature_extra < 0) throw VemError("LocalVemElement: negative data_quadrature_extra");
  if (options.gradient_degree_offset > 0 || options.gradient_degree_offset < -1)
    throw VemError("LocalVemElement: gradient_degree_offset must be 0 or -1");
  kg_ = k + options.gradient_degree_offset;
  const int nv = num_vertices();
  if (nv < 3) throw VemError("LocalVemElement: polygon needs 3 vertices");
  area_ = signed_area(polygon_);
  if (!(area_ > 0.0)) throw VemError("LocalVemElement: polygon must be counter-clockwise with positive area");
  basis_ = ScaledMonomials(k, polygon_centroid(polygon_), polygon_diameter(polygon_));

  const int nk = poly_dim(k);
  const int nk2 = poly_dim(k - 2);
  const int nkg = poly_dim(kg_);
  ndof_ = nv * k + nk2;

  rule_2k_ = polygon_rule(polygon_, 2 * k);
  rule_load_ = polygon_rule(polygon_, 2 * k + 2 + options.data_quadrature_extra);
  data_extra_ = options.data_quadrature_extra;

  gram_ = Eigen::MatrixXd::Zero(nk, nk);
  for (size_t q = 0; q < rule_2k_.points.size(); ++q) {
    const Eigen::VectorXd m = basis_.values(rule_2k_.points[q]);
    gram_.noalias() += rule_2k_.weights[q] * m * m.transpose();
  }

  // dofs of the monomials
  dmat_.resize(ndof_, nk);
  for (int i = 0; i < num_point_dofs(); ++i) dmat_.row(i) = basis_.values(dof_point(i)).transpose();
  for (int s = 0; s < nk2; ++s) dmat_.row(moment_dof(s)) = gram_.row(s) / area_;

  // B: int_K grad m_a . grad phi_i (rows a >= 1), int_dK phi_i (row 0);
  // boundary part of the gradient projections.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nk, ndof_);
  Eigen::MatrixXd bnd[2] = {Eigen::MatrixXd::Zero(nkg, ndof_), Eigen::MatrixXd::Zero(nkg, ndof_)};
  const ScaledMonomials gbasis(std::max(kg_, 0), basis_.center(), basis_.scale());
  for (int j = 0; j < nv; ++j) {
    const Point& a = polygon_[j];
    const Point& c = polygon_[(j + 1) % nv];
    const Point n = edge_normal(j);
    const EdgeRule er = edge_rule(a, c, 2 * k + 1);
    const std::vector<int> dofs = edge_dofs(j);
    for (size_t q = 0; q < er.points.size(); ++q) {
      const Eigen::VectorXd lag = edge_lagrange(er.params[q]);
      const auto grad = basis_.gradients(er.points[q]);
      const Eigen::VectorXd dn = (grad.row(0) * n.x() + grad.row(1) * n.y()).transpose();
      const Eigen::VectorXd mg = gbasis.values(er.points[q]);
      const double w = er.weights[q];
      for (int m = 0; m <= k; ++m) {
        const int d = dofs[m];
        const double wl = w * lag(m);
        b(0, d) += wl;
        for (int a2 = 1; a2 < nk; ++a2) b(a2, d) += wl * dn(a2);
        if (kg_ >= 0)
          for (int a2 = 0; a2 < nkg; ++a2) {
            bnd[0](a2, d) += wl * mg(a2) * n.x();
            bnd[1](a2, d) += wl * mg(a2) * n.y();
          }
      }
    }
  }
  if (k >= 2) {
    const Eigen::MatrixXd lap = basis_.laplacian_matrix();
    for (int a2 = 1; a2 < nk; ++a2)
      for (int s = 0; s < nk2; ++s) b(a2, moment_dof(s)) -= area_ * lap(a2, s);
  }

  const Eigen::MatrixXd g = b * dmat_;
  Eigen::FullPivLU<Eigen::MatrixXd> glu(g);
  if (!glu.isInvertible()) throw VemError("LocalVemElement: singular projector system (degenerate cell)");
  pi_nabla_ = glu.solve(b);
  g_nabla_ = g;
  g_nabla_.row(0).setZero();

  // enhanced moments: (v, m_a) for |a| <= k
  Eigen::MatrixXd cmat(nk, ndof_);
  cmat.setZero();
  for (int s = 0; s < nk2; ++s) cmat(s, moment_dof(s)) = area_;
  cmat.bottomRows(nk - nk2) = gram_.bottomRows(nk - nk2) * pi_nabla_;
  const Eigen::LDLT<Eigen::MatrixXd> hchol(gram_);
  if (hchol.info() != Eigen::Success) throw VemError("LocalVemElement: singular Gram matrix");
  pi0_ = hchol.solve(cmat);

  if (kg_ >= 0) {
    const Eigen::MatrixXd hg = gram_.topLeftCorner(nkg, nkg);
    const Eigen::LDLT<Eigen::MatrixXd> hgchol(hg);
    for (int dir = 0; dir < 2; ++dir) {
      const Eigen::MatrixXd deriv = basis_.derivative_matrix(dir).topLeftCorner(nkg, nkg);
      grad_pi0_[dir] = hgchol.solve(bnd[dir] - deriv * cmat.topRows(nkg));
    }
  } else {
    grad_pi0_[0] = grad_pi0_[1] = Eigen::MatrixXd::Zero(0, ndof_);
  }
}

std::vector<int> LocalVemElement::edge_dofs(int j) const {
  std::vector<int> d;
  d.reserve(k_ + 1);
  d.push_back(vertex_dof(j));
  for (int m = 0; m < k_ - 1; ++m) d.push_back(edge_dof(j, m));
  d.push_back(vertex_dof((j + 1) % num_vertices()));
  return d;
}

Point LocalVemElement::dof_point(int i) const {
  const int nv = num_vertices();
  if (i < nv) return polygon_[i];
  if (i >= num_point_dofs()) throw VemError("dof_point: moment dof has no location");
  const int j = (i - nv) / (k_ - 1);
  const int m = (i - nv) % (k_ - 1);
  const Point& a = polygon_[j];
  const Point& b = polygon_[(j + 1) % nv];
  return a + (double(m + 1) / k_) * (b - a);
}

Point LocalVemElement::edge_normal(int j) const {
  const Point t = polygon_[(j + 1) % num_vertices()] - polygon_[j];
  return Point(t.y(), -t.x()) / t.norm();
}

double LocalVemElement::edge_length(int j) const { return (polygon_[(j + 1) % num_vertices()] - polygon_[j]).norm(); }

Eigen::VectorXd LocalVemElement::edge_lagrange(double s) const {
  Eigen::VectorXd l(k_ + 1);
  for (int m = 0; m <= k_; ++m) {
    double v = 1.0;
    const double sm = double(m) / k_;
    for (int r = 0; r <= k_; ++r) {
      if (r == m) continue;
      const double sr = double(r) / k_;
      v *= (s - sr) / (sm - sr);
    }
    l(m) = v;
  }
  return l;
}

PolygonRule LocalVemElement::rule(int degree) const {
  if (degree == 2 * k_) return rule_2k_;
  if (degree == 2 * k_ + 2 + data_extra_) return rule_load_;
  return polygon_rule(polygon_, degree);
}

Eigen::MatrixXd LocalVemElement::mass() const {
  const Eigen::MatrixXd p = dmat_ * pi0_;
  const Eigen::MatrixXd ip = Eigen::MatrixXd::Identity(ndof_, ndof_) - p;
  Eigen::MatrixXd m = pi0_.transpose() * gram_ * pi0_ + area_ * ip.transpose() * ip;
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd LocalVemElement::stiffness(double diffusion) const {
  const Eigen::MatrixXd p = dmat_ * pi_nabla_;
  const Eigen::MatrixXd ip = Eigen::MatrixXd::Identity(ndof_, ndof_) - p;
  Eigen::MatrixXd a = pi_nabla_.transpose() * g_nabla_ * pi_nabla_ + ip.transpose() * ip;
  return diffusion * 0.5 * (a + a.transpose());
}

Eigen::MatrixXd LocalVemElement::convection(const std::function<Point(const Point&)>& velocity, int velocity_degree) const {
  if (kg_ < 0) return Eigen::MatrixXd::Zero(ndof_, ndof_);
  const PolygonRule r = polygon_rule(polygon_, k_ + kg_ + std::max(velocity_degree, 0));
  const int nq = static_cast<int>(r.points.size());
  const ScaledMonomials gbasis(kg_, basis_.center(), basis_.scale());
  Eigen::MatrixXd mv(nq, poly_dim(k_)), mg(nq, poly_dim(kg_));
  Eigen::VectorXd wx(nq), wy(nq);
  for (int q = 0; q < nq; ++q) {
    mv.row(q) = basis_.values(r.points[q]).transpose();
    mg.row(q) = gbasis.values(r.points[q]).transpose();
    const Point u = velocity(r.points[q]);
    wx(q) = r.weights[q] * u.x();
    wy(q) = r.weights[q] * u.y();
  }
  const Eigen::MatrixXd v = mv * pi0_;
  const Eigen::MatrixXd gx = mg * grad_pi0_[0];
  const Eigen::MatrixXd gy = mg * grad_pi0_[1];
  return v.transpose() * (wx.asDiagonal() * gx + wy.asDiagonal() * gy);
}

Eigen::MatrixXd LocalVemElement::reaction(const std::function<double(const Point&)>& weight) const {
  const int nq = static_cast<int>(rule_load_.points.size());
  Eigen::MatrixXd mv(nq, poly_dim(k_));
  Eigen::VectorXd w(nq);
  for (int q = 0; q < nq; ++q) {
    mv.row(q) = basis_.values(rule_load_.points[q]).transpose();
    w(q) = rule_load_.weights[q] * weight(rule_load_.points[q]);
  }
  const Eigen::MatrixXd v = mv * pi0_;
  Eigen::MatrixXd r = v.transpose() * w.asDiagonal() * v;
  return 0.5 * (r + r.transpose());
}

Eigen::VectorXd LocalVemElement::load(const std::function<double(const Point&)>& g) const {
  const int nq = static_cast<int>(rule_load_.points.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(poly_dim(k_));
  for (int q = 0; q < nq; ++q) acc += rule_load_.weights[q] * g(rule_load_.points[q]) * basis_.values(rule_load_.points[q]);
  return pi0_.transpose() * acc;
}

Eigen::MatrixXd LocalVemElement::edge_mass(int j, const std::function<double(double, const Point&)>& weight) const {
  const Point& a = polygon_[j];
  const Point& b = polygon_[(j + 1) % num_vertices()];
  const EdgeRule er = edge_rule(a, b, 3 * k_ + 4);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k_ + 1, k_ + 1);
  for (size_t q = 0; q < er.points.size(); ++q) {
    const Eigen::VectorXd l = edge_lagrange(er.params[q]);
    m.noalias() += er.weights[q] * weight(er.params[q], er.points[q]) * l * l.transpose();
  }
  return m;
}

Eigen::VectorXd LocalVemElement::edge_load(int j, const std::function<double(double, const Point&)>& g) const {
  const Point& a = polygon_[j];
  const Point& b = polygon_[(j + 1) % num_vertices()];
  const EdgeRule er = edge_rule(a, b, 3 * k_ + 4);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k_ + 1);
  for (size_t q = 0; q < er.points.size(); ++q) v += er.weights[q] * g(er.params[q], er.points[q]) * edge_lagrange(er.params[q]);
  return v;
}

Eigen::VectorXd LocalVemElement::interpolate(const std::function<double(const Point&)>& g) const {
  Eigen::VectorXd d(ndof_);
  for (int i = 0; i < num_point_dofs(); ++i) d(i) = g(dof_point(i));
  const int nk2 = poly_dim(k_ - 2);
  if (nk2 > 0) {
    const PolygonRule r = polygon_rule(polygon_, 2 * k_ + 4 + data_extra_);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nk2);
    for (size_t q = 0; q < r.points.size(); ++q) acc += r.weights[q] * g(r.points[q]) * basis_.values(r.points[q]).head(nk2);
    for (int s = 0; s < nk2; ++s) d(moment_dof(s)) = acc(s) / area_;
  }
  return d;
}

}  // namespace vemt
