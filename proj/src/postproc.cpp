#include "vemt/postproc.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace vemt {

SpatialError spatial_error(const TransportAssembler& assembler, const Eigen::VectorXd& dofs, double t,
                           const ExactField& c, const ExactGradient& grad_c) {
  const PolyMesh& mesh = assembler.mesh();
  const int nc = mesh.num_cells();
  const int k = assembler.degree();
  std::vector<double> l2(nc, 0.0), h1(nc, 0.0);
  for_each_index(nc, assembler.policy(), [&](int cell) {
    const LocalVemElement& el = assembler.element(cell);
    const auto cd = assembler.dofs().cell_dofs(cell);
    Eigen::VectorXd loc(cd.size());
    for (size_t i = 0; i < cd.size(); ++i) loc(i) = dofs(cd[i]);
    const Eigen::VectorXd p0 = el.pi0() * loc;
    const Eigen::VectorXd pn = el.pi_nabla() * loc;
    const PolygonRule r = el.rule(2 * k + 2);
    for (size_t q = 0; q < r.points.size(); ++q) {
      const Point& x = r.points[q];
      const double v = el.basis().values(x).dot(p0);
      const auto g = el.basis().gradients(x);
      const Point gh(g.row(0).dot(pn), g.row(1).dot(pn));
      const double d = c(t, x) - v;
      l2[cell] += r.weights[q] * d * d;
      h1[cell] += r.weights[q] * (grad_c(t, x) - gh).squaredNorm();
    }
  });
  SpatialError e;
  for (int cell = 0; cell < nc; ++cell) {
    e.l2 += l2[cell];
    e.h1 += h1[cell];
  }
  e.l2 = std::sqrt(e.l2);
  e.h1 = std::sqrt(e.h1);
  return e;
}

ErrorReport error_norms(const TransportAssembler& assembler, const TransportRun& run, int q, const ExactField& c,
                        const ExactGradient& grad_c) {
  if (run.slabs.empty()) throw std::invalid_argument("error_norms: run has no stored slabs");
  const RadauLagrange basis(gauss_radau(q));
  const LineRule& g = gauss_legendre(q + 2);
  ErrorReport rep;
  rep.h = assembler.mesh().mesh_size();
  rep.num_dofs = assembler.num_dofs();
  double acc = 0.0;
  for (const SlabSolution& s : run.slabs) {
    const double tau = s.t1 - s.t0;
    rep.dt = std::max(rep.dt, tau);
    for (size_t m = 0; m < g.points.size(); ++m) {
      const double t = s.t0 + tau * g.points[m];
      const SpatialError e = spatial_error(assembler, s.evaluate(basis, t), t, c, grad_c);
      acc += tau * g.weights[m] * (e.l2 * e.l2 + e.h1 * e.h1);
    }
  }
  const SlabSolution& last = run.slabs.back();
  const SpatialError fin = spatial_error(assembler, last.trace(), last.t1, c, grad_c);
  rep.l2_final = fin.l2;
  rep.h1_final = fin.h1;
  rep.l2_h1 = std::sqrt(acc);
  rep.err = std::sqrt(fin.l2 * fin.l2 + acc);
  return rep;
}

std::vector<MinMax> minmax_trace(const SlabSolution& slab, int num_vertex_dofs, const RadauRule& rule) {
  std::vector<MinMax> out;
  for (int i = 0; i < slab.values.cols(); ++i) {
    const auto v = slab.values.col(i).head(num_vertex_dofs);
    out.push_back({slab.t0 + (slab.t1 - slab.t0) * rule.nodes[i], v.minCoeff(), v.maxCoeff()});
  }
  out.back().t = slab.t1;
  return out;
}

std::vector<MinMax> minmax_trace(const TransportRun& run, int num_vertex_dofs, const RadauRule& rule) {
  std::vector<MinMax> out;
  for (const SlabSolution& s : run.slabs) {
    const auto m = minmax_trace(s, num_vertex_dofs, rule);
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

std::vector<double> observed_rates(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw std::invalid_argument("observed_rates: size mismatch");
  std::vector<double> r;
  for (size_t i = 0; i + 1 < h.size(); ++i) r.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
  return r;
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) throw std::invalid_argument("fitted_rate: need two or more points");
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_rate_table(std::ostream& out, const std::vector<ErrorReport>& rows) {
  const bool rates = rows.size() >= 2;
  out << "level,h,dt,dofs,l2_final,h1_final,l2_h1,err";
  if (rates) out << ",rate_l2_final,rate_h1_final,rate_err";
  out << '\n';
  out << std::setprecision(10);
  for (size_t i = 0; i < rows.size(); ++i) {
    const ErrorReport& r = rows[i];
    out << r.level << ',' << r.h << ',' << r.dt << ',' << r.num_dofs << ',' << r.l2_final << ',' << r.h1_final << ','
        << r.l2_h1 << ',' << r.err;
    if (rates) {
      if (i == 0) {
        out << ",,,";
      } else {
        const ErrorReport& p = rows[i - 1];
        const double lh = std::log(p.h / r.h);
        out << ',' << std::log(p.l2_final / r.l2_final) / lh << ',' << std::log(p.h1_final / r.h1_final) / lh << ','
            << std::log(p.err / r.err) / lh;
      }
    }
    out << '\n';
  }
}

std::string format_rate_table(const std::vector<ErrorReport>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "level" << std::setw(12) << "h" << std::setw(12) << "dt" << std::setw(14) << "err"
     << "rate\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    os << std::setw(6) << rows[i].level << std::setw(12) << std::setprecision(4) << rows[i].h << std::setw(12)
       << rows[i].dt << std::setw(14) << std::setprecision(6) << rows[i].err;
    if (i > 0) os << std::setprecision(3) << std::log(rows[i - 1].err / rows[i].err) / std::log(rows[i - 1].h / rows[i].h);
    os << '\n';
  }
  return os.str();
}

}  // namespace vemt
