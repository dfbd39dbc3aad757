#include "vemt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace vemt {

DofMap::DofMap(const PolyMesh& mesh, int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("DofMap: k must be >= 1");
  nv_ = mesh.num_vertices();
  ne_ = mesh.num_edges();
  ndof_ = nv_ + ne_ * (k - 1) + mesh.num_cells() * poly_dim(k - 2);
  lists_.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto verts = mesh.cell_vertices(c);
    const auto edges = mesh.cell_edges(c);
    const int n = static_cast<int>(verts.size());
    auto& l = lists_[c];
    for (int j = 0; j < n; ++j) l.push_back(vertex_dof(verts[j]));
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < k - 1; ++m) l.push_back(edge_dof(edges[j], mesh.edge_reversed(c, j) ? k - 2 - m : m));
    for (int s = 0; s < poly_dim(k - 2); ++s) l.push_back(moment_dof(c, s));
    dofs_.insert(dofs_.end(), l.begin(), l.end());
    offsets_.push_back(static_cast<int>(dofs_.size()));
  }
}

TransportAssembler::TransportAssembler(const PolyMesh& mesh, int k, VemOptions options, ExecPolicy policy)
    : mesh_(&mesh), k_(k), policy_(policy), dofs_(mesh, k) {
  const int nc = mesh.num_cells();
  std::vector<std::optional<LocalVemElement>> tmp(nc);
  for_each_index(nc, policy, [&](int c) { tmp[c].emplace(mesh.cell_polygon(c), k, options); });
  elements_.reserve(nc);
  for (auto& e : tmp) elements_.push_back(std::move(*e));
  pattern_ = SparseMatrix::from_dof_lists(dofs_.num_dofs(), dofs_.cell_dof_lists());
  mass_ = assemble([](const LocalVemElement& el, int) { return el.mass(); });
}

template <class LocalFn>
SparseMatrix TransportAssembler::assemble(LocalFn&& local) const {
  const int nc = mesh_->num_cells();
  std::vector<Eigen::MatrixXd> blocks(nc);
  for_each_index(nc, policy_, [&](int c) { blocks[c] = local(elements_[c], c); });
  SparseMatrix m(pattern_);
  for (int c = 0; c < nc; ++c) m.scatter_add(blocks[c], dofs_.cell_dofs(c));
  return m;
}

SparseMatrix TransportAssembler::stiffness(double diffusion) const {
  return assemble([&](const LocalVemElement& el, int) { return el.stiffness(diffusion); });
}

SparseMatrix TransportAssembler::convection(const DiscreteVelocity& u) const {
  return assemble([&](const LocalVemElement& el, int c) {
    const ScaledMonomials b(u.degree, mesh_->cell_centroid(c), mesh_->cell_diameter(c));
    const Eigen::VectorXd& ux = u.cell_ux[c];
    const Eigen::VectorXd& uy = u.cell_uy[c];
    return el.convection(
        [&](const Point& x) {
          const Eigen::VectorXd m = b.values(x);
          return Point(m.dot(ux), m.dot(uy));
        },
        u.degree);
  });
}

SparseMatrix TransportAssembler::skew_convection(const DiscreteVelocity& u) const {
  return assemble([&](const LocalVemElement& el, int c) {
    const ScaledMonomials b(u.degree, mesh_->cell_centroid(c), mesh_->cell_diameter(c));
    const Eigen::VectorXd& ux = u.cell_ux[c];
    const Eigen::VectorXd& uy = u.cell_uy[c];
    const Eigen::MatrixXd kl = el.convection(
        [&](const Point& x) {
          const Eigen::VectorXd m = b.values(x);
          return Point(m.dot(ux), m.dot(uy));
        },
        u.degree);
    return Eigen::MatrixXd(0.5 * (kl - kl.transpose()));
  });
}

SparseMatrix TransportAssembler::boundary_lambda(const DiscreteVelocity& u) const {
  SparseMatrix m(pattern_);
  for (int e : mesh_->boundary_edges()) {
    const int c = mesh_->edge(e).left;
    const auto edges = mesh_->cell_edges(c);
    const int j = static_cast<int>(std::find(edges.begin(), edges.end(), e) - edges.begin());
    const bool rev = mesh_->edge_reversed(c, j);
    const LocalVemElement& el = elements_[c];
    const Eigen::MatrixXd lam =
        el.edge_mass(j, [&](double s, const Point&) { return std::abs(u.normal_flux(e, rev ? 1.0 - s : s)); });
    std::vector<int> gd;
    const auto cd = dofs_.cell_dofs(c);
    for (int d : el.edge_dofs(j)) gd.push_back(cd[d]);
    m.scatter_add(lam, gd);
  }
  return m;
}

SparseMatrix TransportAssembler::reaction(const std::function<double(const Point&)>& f) const {
  return assemble([&](const LocalVemElement& el, int) {
    return el.reaction([&](const Point& x) { return std::abs(f(x)); });
  });
}

SparseMatrix TransportAssembler::a0(const TransportProblem& p, double t) const {
  if (!(p.diffusion > 0.0)) throw std::invalid_argument("TransportAssembler::a0: diffusion must be positive");
  SparseMatrix a = stiffness(p.diffusion);
  a.add_scaled(1.0, skew_convection(p.velocity));
  a.add_scaled(0.5, boundary_lambda(p.velocity));
  if (p.reaction) a.add_scaled(0.5, reaction([&](const Point& x) { return p.reaction(t, x); }));
  return a;
}

Eigen::VectorXd TransportAssembler::source_rhs(const TransportProblem& p, double t) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(num_dofs());
  if (!p.reaction || !p.injected) return r;
  const int nc = mesh_->num_cells();
  std::vector<Eigen::VectorXd> loc(nc);
  for_each_index(nc, policy_, [&](int c) {
    loc[c] = elements_[c].load([&](const Point& x) {
      const double f = p.reaction(t, x);
      return f > 0.0 ? f * p.injected(t, x) : 0.0;
    });
  });
  for (int c = 0; c < nc; ++c) {
    const auto cd = dofs_.cell_dofs(c);
    for (size_t i = 0; i < cd.size(); ++i) r(cd[i]) += loc[c](i);
  }
  return r;
}

Eigen::VectorXd TransportAssembler::inflow_rhs(const TransportProblem& p, double t) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(num_dofs());
  if (!p.inflow) return r;
  for (int e : mesh_->boundary_edges()) {
    const int c = mesh_->edge(e).left;
    const auto edges = mesh_->cell_edges(c);
    const int j = static_cast<int>(std::find(edges.begin(), edges.end(), e) - edges.begin());
    const bool rev = mesh_->edge_reversed(c, j);
    const LocalVemElement& el = elements_[c];
    const Point n = el.edge_normal(j);
    const Eigen::VectorXd g = el.edge_load(j, [&](double s, const Point& x) {
      const double un = std::min(0.0, p.velocity.normal_flux(e, rev ? 1.0 - s : s));
      return un < 0.0 ? -un * p.inflow(t, x, n) : 0.0;
    });
    const auto cd = dofs_.cell_dofs(c);
    const std::vector<int> ld = el.edge_dofs(j);
    for (size_t m = 0; m < ld.size(); ++m) r(cd[ld[m]]) += g(m);
  }
  return r;
}

Eigen::VectorXd TransportAssembler::interpolate(const std::function<double(const Point&)>& g) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(num_dofs());
  const int nc = mesh_->num_cells();
  std::vector<Eigen::VectorXd> loc(nc);
  for_each_index(nc, policy_, [&](int c) { loc[c] = elements_[c].interpolate(g); });
  for (int c = 0; c < nc; ++c) {
    const auto cd = dofs_.cell_dofs(c);
    for (size_t i = 0; i < cd.size(); ++i) v(cd[i]) = loc[c](i);
  }
  return v;
}

}  // namespace vemt
