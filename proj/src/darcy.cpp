#include "vemt/darcy.hpp"

#include <cmath>
#include <sstream>

#include "vemt/quadrature.hpp"

namespace vemt {

MixedVemElement::MixedVemElement(std::vector<Point> polygon, int k) : polygon_(std::move(polygon)), k_(k) {
  if (k < 0) throw DarcyError("MixedVemElement: negative degree");
  const int ne = num_edges();
  area_ = signed_area(polygon_);
  if (ne < 3 || !(area_ > 0.0)) throw DarcyError("MixedVemElement: invalid polygon");
  const double h = polygon_diameter(polygon_);
  basis_ = ScaledMonomials(k + 1, polygon_centroid(polygon_), h);
  const int nk = poly_dim(k);
  const int nk1 = poly_dim(k + 1);
  ndof_ = ne * (k + 1) + nk - 1;

  const PolygonRule r = polygon_rule(polygon_, 2 * k + 2);
  gram_ = Eigen::MatrixXd::Zero(nk1, nk1);
  Eigen::MatrixXd gg = Eigen::MatrixXd::Zero(nk1, nk1);
  for (size_t q = 0; q < r.points.size(); ++q) {
    const Eigen::VectorXd m = basis_.values(r.points[q]);
    const auto g = basis_.gradients(r.points[q]);
    gram_.noalias() += r.weights[q] * m * m.transpose();
    gg.noalias() += r.weights[q] * g.transpose() * g;
  }
  ggrad_ = gg.bottomRightCorner(nk1 - 1, nk1 - 1);

  // Boundary terms int_dE v.n m_b for b < dim P_{k+1}, and dofs of grad m_g.
  const Eigen::MatrixXd ginv = edge_monomial_gram(k).inverse();
  Eigen::MatrixXd bnd = Eigen::MatrixXd::Zero(nk1, ndof_);
  dgrad_ = Eigen::MatrixXd::Zero(ndof_, nk1 - 1);
  for (int j = 0; j < ne; ++j) {
    const Point& a = polygon_[j];
    const Point& b = polygon_[(j + 1) % ne];
    const double len = (b - a).norm();
    const Point n = Point(b.y() - a.y(), a.x() - b.x()) / len;
    const EdgeRule er = edge_rule(a, b, 2 * k + 2);
    for (size_t q = 0; q < er.points.size(); ++q) {
      const Eigen::VectorXd m = basis_.values(er.points[q]);
      const auto g = basis_.gradients(er.points[q]);
      const Eigen::VectorXd gn = (g.row(0) * n.x() + g.row(1) * n.y()).transpose();
      Eigen::VectorXd mu(k + 1);
      double p = 1.0;
      for (int al = 0; al <= k; ++al) {
        mu(al) = p;
        p *= er.params[q] - 0.5;
      }
      // normal trace of the basis function of dof (j, al): sum_a' ginv(a', al) mu_a'
      const Eigen::VectorXd trace = ginv.transpose() * mu;
      for (int al = 0; al <= k; ++al) {
        bnd.col(edge_dof(j, al)) += er.weights[q] * trace(al) * m;
        dgrad_.row(edge_dof(j, al)) += (er.weights[q] / len) * mu(al) * gn.tail(nk1 - 1).transpose();
      }
    }
  }
  for (int b = 1; b < nk; ++b) dgrad_.row(interior_dof(b)) = (h / area_) * ggrad_.row(b - 1);

  // (div v, m_b) = -(v, grad m_b) + int_dE v.n m_b, b < dim P_k
  bdiv_ = bnd.topRows(nk);
  for (int b = 1; b < nk; ++b) bdiv_(b, interior_dof(b)) -= area_ / h;
  const Eigen::MatrixXd hk = gram_.topLeftCorner(nk, nk);
  div_ = hk.ldlt().solve(bdiv_);

  // (grad p, grad m_g) = -(div v, m_g) + int_dE v.n m_g, g = 1..dim P_{k+1}-1
  const Eigen::MatrixXd rhs = bnd.bottomRows(nk1 - 1) - gram_.block(1, 0, nk1 - 1, nk) * div_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ggrad_);
  if (!lu.isInvertible()) throw DarcyError("MixedVemElement: singular gradient Gram matrix");
  proj_ = lu.solve(rhs);
}

Eigen::MatrixXd MixedVemElement::projection_x() const {
  const int nk = poly_dim(k_);
  const Eigen::MatrixXd d = basis_.derivative_matrix(0);
  // grad m_g = sum_b D(g, b) m_b with b < dim P_k
  return d.block(1, 0, d.rows() - 1, nk).transpose() * proj_;
}

Eigen::MatrixXd MixedVemElement::projection_y() const {
  const int nk = poly_dim(k_);
  const Eigen::MatrixXd d = basis_.derivative_matrix(1);
  return d.block(1, 0, d.rows() - 1, nk).transpose() * proj_;
}

Eigen::MatrixXd MixedVemElement::mass() const {
  const Eigen::MatrixXd p = dgrad_ * proj_;
  const Eigen::MatrixXd ip = Eigen::MatrixXd::Identity(ndof_, ndof_) - p;
  Eigen::MatrixXd m = proj_.transpose() * ggrad_ * proj_ + area_ * ip.transpose() * ip;
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd MixedVemElement::interpolate(const std::function<Point(const Point&)>& u) const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(ndof_);
  const int ne = num_edges();
  for (int j = 0; j < ne; ++j) {
    const Point& a = polygon_[j];
    const Point& b = polygon_[(j + 1) % ne];
    const double len = (b - a).norm();
    const Point n = Point(b.y() - a.y(), a.x() - b.x()) / len;
    const EdgeRule er = edge_rule(a, b, 2 * k_ + 8);
    for (size_t q = 0; q < er.points.size(); ++q) {
      const double un = u(er.points[q]).dot(n);
      double p = 1.0;
      for (int al = 0; al <= k_; ++al) {
        d(edge_dof(j, al)) += er.weights[q] / len * un * p;
        p *= er.params[q] - 0.5;
      }
    }
  }
  const int nk = poly_dim(k_);
  if (nk > 1) {
    const PolygonRule r = polygon_rule(polygon_, 2 * k_ + 8);
    for (size_t q = 0; q < r.points.size(); ++q) {
      const auto g = basis_.gradients(r.points[q]);
      const Point uq = u(r.points[q]);
      for (int b = 1; b < nk; ++b)
        d(interior_dof(b)) += r.weights[q] * basis_.scale() / area_ * (uq.x() * g(0, b) + uq.y() * g(1, b));
    }
  }
  return d;
}

namespace {

struct CellBlocks {
  Eigen::MatrixXd a;  // velocity-velocity, with orientation signs applied
  Eigen::MatrixXd b;  // pressure-velocity (div pairing)
  Eigen::VectorXd f;  // (f, m_b)
  std::vector<int> udofs;
  std::vector<int> pdofs;
  std::vector<double> sign;
};

}  // namespace

DarcySolution solve_darcy_mixed(const PolyMesh& mesh, const DarcyProblem& problem, int k, ExecPolicy policy,
                                const SolverConfig& solver) {
  if (k < 0) throw DarcyError("solve_darcy_mixed: negative degree");
  if (!(problem.permeability > 0.0) || !(problem.viscosity > 0.0))
    throw DarcyError("solve_darcy_mixed: permeability and viscosity must be positive");
  if (!problem.source) throw DarcyError("solve_darcy_mixed: missing source");
  const int ne = mesh.num_edges();
  const int nc = mesh.num_cells();
  const int nk = poly_dim(k);
  const int nue = ne * (k + 1);
  const int nu = nue + nc * (nk - 1);
  const int np = nc * nk;

  std::vector<char> neu(ne, 0);
  for (int e : problem.neumann_edges) {
    if (e < 0 || e >= ne || !mesh.is_boundary_edge(e)) throw DarcyError("solve_darcy_mixed: Neumann edge not on boundary");
    neu[e] = 1;
  }
  bool any_dirichlet = false;
  for (int e : mesh.boundary_edges()) any_dirichlet = any_dirichlet || !neu[e];
  if (any_dirichlet && !problem.dirichlet) throw DarcyError("solve_darcy_mixed: missing Dirichlet datum");
  if (!problem.neumann_edges.empty() && !problem.neumann) throw DarcyError("solve_darcy_mixed: missing Neumann datum");
  const int nmult = any_dirichlet ? 0 : 1;
  const int n = nu + np + nmult;
  const double coef = problem.viscosity / problem.permeability;

  std::vector<CellBlocks> blocks(nc);
  std::vector<MixedVemElement> elems;
  elems.reserve(nc);
  for (int c = 0; c < nc; ++c) elems.emplace_back(mesh.cell_polygon(c), k);
  for_each_index(nc, policy, [&](int c) {
    const MixedVemElement& el = elems[c];
    CellBlocks& cb = blocks[c];
    const auto edges = mesh.cell_edges(c);
    for (int j = 0; j < el.num_edges(); ++j)
      for (int al = 0; al <= k; ++al) {
        cb.udofs.push_back(edges[j] * (k + 1) + al);
        // local orientation vs global: normal flips and (s - 1/2)^a picks up (-1)^a
        cb.sign.push_back(mesh.edge_reversed(c, j) ? ((al % 2 == 0) ? -1.0 : 1.0) : 1.0);
      }
    for (int b = 1; b < nk; ++b) {
      cb.udofs.push_back(nue + c * (nk - 1) + b - 1);
      cb.sign.push_back(1.0);
    }
    for (int b = 0; b < nk; ++b) cb.pdofs.push_back(nu + c * nk + b);
    const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(cb.sign.data(), cb.sign.size());
    cb.a = coef * (s.asDiagonal() * el.mass() * s.asDiagonal());
    cb.b = el.divergence_pairing() * s.asDiagonal();
    const PolygonRule r = polygon_rule(
        mesh.cell_polygon(c), problem.source_quadrature_degree >= 0 ? problem.source_quadrature_degree : 2 * k + 4);
    const ScaledMonomials pb(k, el.basis().center(), el.basis().scale());
    cb.f = Eigen::VectorXd::Zero(nk);
    for (size_t q = 0; q < r.points.size(); ++q) cb.f += r.weights[q] * problem.source(r.points[q]) * pb.values(r.points[q]);
  });

  std::vector<std::vector<int>> lists(nc);
  for (int c = 0; c < nc; ++c) {
    lists[c] = blocks[c].udofs;
    lists[c].insert(lists[c].end(), blocks[c].pdofs.begin(), blocks[c].pdofs.end());
    if (nmult) lists[c].push_back(n - 1);
  }
  SparseMatrix a = SparseMatrix::from_dof_lists(n, lists);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  double int_f = 0.0;
  for (int c = 0; c < nc; ++c) {
    const CellBlocks& cb = blocks[c];
    a.scatter_add(cb.a, cb.udofs);
    const Eigen::MatrixXd bt = cb.b.transpose();
    a.scatter_add(bt, cb.udofs, cb.pdofs);
    a.scatter_add(cb.b, cb.pdofs, cb.udofs);
    for (int b = 0; b < nk; ++b) rhs(cb.pdofs[b]) += cb.f(b);
    int_f += cb.f(0);
    if (nmult) {
      // zero-mean pressure: sum_E int_E p_h = 0, multiplier enters the q-equations
      const Eigen::MatrixXd pg = elems[c].pressure_gram();
      const Eigen::MatrixXd row = pg.row(0);
      const int last[1] = {n - 1};
      a.scatter_add(row, last, cb.pdofs);
      a.scatter_add(row.transpose(), cb.pdofs, last);
    }
  }

  // boundary data
  const Eigen::MatrixXd ginv = edge_monomial_gram(k).inverse();
  std::vector<char> fixed(n, 0);
  Eigen::VectorXd xfixed = Eigen::VectorXd::Zero(n);
  double int_gn = 0.0;
  for (int e : mesh.boundary_edges()) {
    const Point nrm = mesh.edge_normal(e);
    const double len = mesh.edge_length(e);
    const EdgeRule er = edge_rule(mesh.vertex(mesh.edge(e).v0), mesh.vertex(mesh.edge(e).v1), 2 * k + 8);
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(k + 1);
    for (size_t q = 0; q < er.points.size(); ++q) {
      const double g = neu[e] ? problem.neumann(er.points[q], nrm) : problem.dirichlet(er.points[q]);
      double p = 1.0;
      for (int al = 0; al <= k; ++al) {
        mom(al) += er.weights[q] * g * p;
        p *= er.params[q] - 0.5;
      }
    }
    if (neu[e]) {
      int_gn += mom(0);
      for (int al = 0; al <= k; ++al) {
        fixed[e * (k + 1) + al] = 1;
        xfixed(e * (k + 1) + al) = mom(al) / len;
      }
    } else {
      // int_e g_D v.n for the basis function of dof (e, al)
      const Eigen::VectorXd load = ginv.transpose() * mom;
      for (int al = 0; al <= k; ++al) rhs(e * (k + 1) + al) += load(al);
    }
  }

  DarcySolution sol;
  sol.degree = k;
  if (nmult) {
    sol.compatibility_defect = int_f - int_gn;
    const double scale = std::max({1.0, std::abs(int_f), std::abs(int_gn)});
    if (std::abs(sol.compatibility_defect) > problem.compatibility_tolerance * scale) {
      std::ostringstream os;
      os << "solve_darcy_mixed: incompatible pure-Neumann data, int f - int g_N = " << sol.compatibility_defect;
      throw DarcyError(os.str());
    }
  }

  // essential normal fluxes: lift to the right-hand side, then identity rows
  rhs -= a.multiply(xfixed);
  for (int r = 0; r < n; ++r)
    for (int p = a.row_offsets()[r]; p < a.row_offsets()[r + 1]; ++p) {
      const int col = a.col_indices()[p];
      if (fixed[r] || fixed[col]) a.values()[p] = (r == col) ? 1.0 : 0.0;
    }
  for (int r = 0; r < n; ++r)
    if (fixed[r]) rhs(r) = xfixed(r);

  Eigen::VectorXd x;
  try {
    x = solve(a, rhs, solver, &sol.report);
  } catch (const LinearSolverError& err) {
    throw DarcyError(std::string("solve_darcy_mixed: ") + err.what());
  }
  if (nmult) sol.multiplier = x(n - 1);

  DiscreteVelocity& v = sol.velocity;
  v.kind = DiscreteVelocity::Kind::mixed_vem;
  v.degree = k;
  v.edge_flux.resize(ne);
  for (int e = 0; e < ne; ++e) v.edge_flux[e] = ginv * x.segment(e * (k + 1), k + 1);
  v.cell_ux.resize(nc);
  v.cell_uy.resize(nc);
  v.cell_div.resize(nc);
  sol.pressure.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const CellBlocks& cb = blocks[c];
    Eigen::VectorXd local(cb.udofs.size());
    for (size_t i = 0; i < cb.udofs.size(); ++i) local(i) = cb.sign[i] * x(cb.udofs[i]);
    v.cell_ux[c] = elems[c].projection_x() * local;
    v.cell_uy[c] = elems[c].projection_y() * local;
    v.cell_div[c] = elems[c].divergence() * local;
    sol.pressure[c] = x.segment(nu + c * nk, nk);
  }
  return sol;
}

double darcy_velocity_error(const PolyMesh& mesh, const DarcySolution& sol,
                            const std::function<Point(const Point&)>& u_exact) {
  double e2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const PolygonRule r = polygon_rule(mesh.cell_polygon(c), 2 * sol.degree + 6);
    for (size_t q = 0; q < r.points.size(); ++q)
      e2 += r.weights[q] * (u_exact(r.points[q]) - sol.velocity.cell_velocity(mesh, c, r.points[q])).squaredNorm();
  }
  return std::sqrt(e2);
}

double darcy_pressure_error(const PolyMesh& mesh, const DarcySolution& sol,
                            const std::function<double(const Point&)>& p_exact) {
  double e2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ScaledMonomials b(sol.degree, mesh.cell_centroid(c), mesh.cell_diameter(c));
    const PolygonRule r = polygon_rule(mesh.cell_polygon(c), 2 * sol.degree + 6);
    for (size_t q = 0; q < r.points.size(); ++q) {
      const double d = p_exact(r.points[q]) - b.values(r.points[q]).dot(sol.pressure[c]);
      e2 += r.weights[q] * d * d;
    }
  }
  return std::sqrt(e2);
}

}  // namespace vemt
