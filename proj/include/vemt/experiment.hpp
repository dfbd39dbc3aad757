#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vemt/darcy.hpp"
#include "vemt/mesh_generators.hpp"
#include "vemt/postproc.hpp"
#include "vemt/timedg.hpp"
#include "vemt/transport.hpp"

namespace vemt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declarative description of a run; see README.md for the JSON schema.
struct ExperimentConfig {
  std::string kind = "convergence";  // convergence | kconv | drobust | wells | custom
  std::string name;
  std::vector<MeshFamily> families{MeshFamily::quad};
  std::vector<int> levels{1, 2, 3, 4};
  int k = 1;
  int q = -1;  // -1: same as k
  std::vector<int> degrees{1, 2, 3, 4};  // kconv
  double diffusion = 1.0;
  std::vector<double> diffusions{1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};  // drobust
  std::string velocity = "darcy";  // darcy | analytic
  int darcy_degree = -1;           // -1: same as k
  double final_time = 1.0;
  double time_step = 0.0;  // 0: level time step 1/(3 * 2^(l-1))
  std::string data = "manufactured";  // manufactured | wells | constant
  std::vector<std::string> variants{"homo", "vert", "diag"};
  std::uint64_t seed = 20250101;
  int gradient_degree_offset = 0;
  int data_quadrature_extra = 0;
  int wells_nx = 12;
  int wells_ny = 13;
  std::vector<double> snapshots{1.0, 2.0, 4.0};
  bool write_vtk = true;
  ExecPolicy policy = ExecPolicy::parallel;
  int threads = 0;  // 0: OpenMP default
  SolverConfig solver;

  int time_degree() const { return q < 0 ? k : q; }
};

/// Parses and validates a JSON document; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
/// Canonical JSON text of a config (sorted keys, fixed formatting).
std::string config_to_json(const ExperimentConfig& config);
/// Built-in presets (the experiments of the study), by name.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);
/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Exact fields of the manufactured problem: c = sin(t) exp((x-1)^2 (y-1)^2),
/// u = (e^x, e^y) = grad p with p = e^x + e^y, f = div u = e^x + e^y.
namespace manufactured {
double c(double t, const Point& x);
Point grad_c(double t, const Point& x);
double c_t(double t, const Point& x);
double laplacian_c(double t, const Point& x);
Point velocity(const Point& x);
double pressure(const Point& x);
double source(const Point& x);
/// c~ = (c_t + f c + u.grad c - D lap c) / f.
double injected(double t, const Point& x, double diffusion);
/// c_I = c - D (grad c . n) / (u . n), so the total flux matches on inflow.
double inflow(double t, const Point& x, const Point& n, double diffusion);
}  // namespace manufactured

/// Source of the well example before mean correction:
/// s_c G(x_c) - sum_ij s_ij G(x_ij), G(y) = exp(-sigma |x - y|^2).
struct WellsSource {
  double sigma = 100.0;
  double s_center = 0.3;
  double s00 = 0.3, s10 = 0.3, s01 = 0.3, s11 = 0.3;
  double shift = 0.0;  // subtracted mean
  double operator()(const Point& x) const;
};
WellsSource wells_source(const std::string& variant);
/// Cell-quadrature mean of f over the mesh (same rule the Darcy solver uses
/// with `degree`).
double mesh_mean(const PolyMesh& mesh, const std::function<double(const Point&)>& f, int degree);

struct RunTimings {
  double mesh = 0.0;
  double darcy = 0.0;
  double assembly = 0.0;
  double time_stepping = 0.0;
  double errors = 0.0;
};

/// Builds the discrete velocity of the manufactured problem.
DiscreteVelocity manufactured_velocity(const PolyMesh& mesh, const std::string& backend, int degree,
                                       ExecPolicy policy, const SolverConfig& solver);
/// Transport data of the manufactured problem on a given velocity.
TransportProblem manufactured_problem(const DiscreteVelocity& u, double diffusion);

/// One (mesh level, time partition) of the manufactured problem.
ErrorReport run_manufactured(const ExperimentConfig& config, MeshFamily family, int level, int k, int q,
                             double diffusion, RunTimings* timings = nullptr);

struct SweepRow {
  MeshFamily family = MeshFamily::quad;
  int k = 1;
  int q = 1;
  double diffusion = 1.0;
  ErrorReport report;
  /// Non-empty when the run failed; such rows are left out of the CSV.
  std::string error;
};

std::vector<SweepRow> run_convergence(const ExperimentConfig& config, RunTimings* timings = nullptr);
std::vector<SweepRow> run_kconv(const ExperimentConfig& config, RunTimings* timings = nullptr);
std::vector<SweepRow> run_drobust(const ExperimentConfig& config, RunTimings* timings = nullptr);

struct WellsSnapshot {
  double t = 0.0;
  Eigen::VectorXd dofs;
};

struct WellsResult {
  std::string variant;
  PolyMesh mesh;
  DarcySolution darcy;
  double mean_shift = 0.0;
  int slabs = 0;
  std::vector<MinMax> minmax;
  /// (t_n, c^{-,n} . M c^{-,n}) at every slab end.
  std::vector<std::pair<double, double>> energy;
  std::vector<WellsSnapshot> snapshots;
  /// max |c(v) - c(mirror v)| (absolute) over vertex dofs and the two mirror
  /// symmetries, maximized over snapshot times.
  double symmetry_residual = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  /// Largest relative increase of the M-energy between slabs after t = 1.
  double energy_increase_after_ramp = 0.0;
};

/// u = (1, 0) analytic, f = 0, c0 = c_I = 1 on families[0], levels[0].
struct ConstantStateResult {
  int slabs = 0;
  /// max |c - I_h 1| over all dofs and Radau nodes.
  double max_deviation = 0.0;
  std::vector<MinMax> minmax;
};
ConstantStateResult run_constant_state(const ExperimentConfig& config, RunTimings* timings = nullptr);

WellsResult run_wells(const ExperimentConfig& config, const std::string& variant, RunTimings* timings = nullptr);

/// Mirror map of vertex indices under x -> 1 - x (axis 0) or y -> 1 - y
/// (axis 1); -1 where no mirrored vertex exists.
std::vector<int> mirror_vertices(const PolyMesh& mesh, int axis, double tol = 1e-9);

/// CSV writers (no timings, so reruns are byte-identical).
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, const std::string& sweep_key);
void write_minmax_csv(const std::string& path, const std::vector<MinMax>& rows);

}  // namespace vemt
