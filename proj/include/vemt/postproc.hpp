#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vemt/timedg.hpp"
#include "vemt/transport.hpp"

namespace vemt {

using ExactField = std::function<double(double t, const Point& x)>;
using ExactGradient = std::function<Point(double t, const Point& x)>;

/// Spatial errors at one time: ||c - Pi0 c_h|| and |grad c - grad Pi_nabla c_h|.
struct SpatialError {
  double l2 = 0.0;
  double h1 = 0.0;
};
SpatialError spatial_error(const TransportAssembler& assembler, const Eigen::VectorXd& dofs, double t,
                           const ExactField& c, const ExactGradient& grad_c);

struct ErrorReport {
  int level = 0;
  double h = 0.0;
  double dt = 0.0;
  int num_dofs = 0;
  /// ||e(T)||_{L2}.
  double l2_final = 0.0;
  /// |e(T)|_{H1} (surrogate through Pi_nabla).
  double h1_final = 0.0;
  /// (sum_n int_{I_n} ||e||_{H1}^2)^{1/2}.
  double l2_h1 = 0.0;
  /// err = (l2_final^2 + l2_h1^2)^{1/2}.
  double err = 0.0;
};

/// Space-time errors of a transport run. Time integrals use q+2 Gauss
/// points per slab on the slab polynomial.
ErrorReport error_norms(const TransportAssembler& assembler, const TransportRun& run, int q, const ExactField& c,
                        const ExactGradient& grad_c);

struct MinMax {
  double t = 0.0;
  double min = 0.0;
  double max = 0.0;
};
/// Extremes of the vertex dofs at every Radau node of a slab.
std::vector<MinMax> minmax_trace(const SlabSolution& slab, int num_vertex_dofs, const RadauRule& rule);
/// Extremes at the Radau nodes of every slab, in time order.
std::vector<MinMax> minmax_trace(const TransportRun& run, int num_vertex_dofs, const RadauRule& rule);

/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}); size n - 1.
std::vector<double> observed_rates(const std::vector<double>& h, const std::vector<double>& e);
/// Least-squares slope of log e against log h.
double fitted_rate(const std::vector<double>& h, const std::vector<double>& e);

/// CSV with header level,h,dt,dofs,l2_final,h1_final,l2_h1,err and, with
/// two or more rows, rate_l2_final,rate_h1_final,rate_err (empty on the
/// first row).
void write_rate_table(std::ostream& out, const std::vector<ErrorReport>& rows);
std::string format_rate_table(const std::vector<ErrorReport>& rows);

}  // namespace vemt
