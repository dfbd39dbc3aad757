#include "vemt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vemt {

using nlohmann::json;

namespace {

const std::set<std::string> kKinds{"convergence", "kconv", "drobust", "wells", "custom"};
const std::set<std::string> kVariants{"homo", "vert", "diag"};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

json solver_to_json(const SolverConfig& s) {
  return json{{"method", s.method == SolverMethod::direct ? "direct" : "iterative"},
              {"direct_tolerance", s.direct_tolerance},
              {"iterative_tolerance", s.iterative_tolerance},
              {"max_iterations", s.max_iterations},
              {"restart", s.restart},
              {"ilut_drop", s.ilut_drop},
              {"ilut_fill", s.ilut_fill}};
}

SolverConfig solver_from_json(const json& j) {
  static const std::set<std::string> keys{"method",  "direct_tolerance", "iterative_tolerance", "max_iterations",
                                          "restart", "ilut_drop",        "ilut_fill"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError("unknown solver key '" + it.key() + "'");
  SolverConfig s;
  const std::string m = get_or<std::string>(j, "method", "direct");
  if (m == "direct")
    s.method = SolverMethod::direct;
  else if (m == "iterative")
    s.method = SolverMethod::iterative;
  else
    throw ConfigError("solver.method must be 'direct' or 'iterative'");
  s.direct_tolerance = get_or(j, "direct_tolerance", s.direct_tolerance);
  s.iterative_tolerance = get_or(j, "iterative_tolerance", s.iterative_tolerance);
  s.max_iterations = get_or(j, "max_iterations", s.max_iterations);
  s.restart = get_or(j, "restart", s.restart);
  s.ilut_drop = get_or(j, "ilut_drop", s.ilut_drop);
  s.ilut_fill = get_or(j, "ilut_fill", s.ilut_fill);
  if (!(s.direct_tolerance > 0) || !(s.iterative_tolerance > 0) || s.max_iterations < 1 || s.restart < 1)
    throw ConfigError("solver tolerances and iteration counts must be positive");
  return s;
}

json config_json(const ExperimentConfig& c) {
  json fam = json::array();
  for (MeshFamily f : c.families) fam.push_back(to_string(f));
  return json{{"kind", c.kind},
              {"name", c.name},
              {"families", fam},
              {"levels", c.levels},
              {"k", c.k},
              {"q", c.q},
              {"degrees", c.degrees},
              {"diffusion", c.diffusion},
              {"diffusions", c.diffusions},
              {"velocity", c.velocity},
              {"darcy_degree", c.darcy_degree},
              {"final_time", c.final_time},
              {"time_step", c.time_step},
              {"data", c.data},
              {"variants", c.variants},
              {"seed", c.seed},
              {"gradient_degree_offset", c.gradient_degree_offset},
              {"data_quadrature_extra", c.data_quadrature_extra},
              {"wells_nx", c.wells_nx},
              {"wells_ny", c.wells_ny},
              {"snapshots", c.snapshots},
              {"write_vtk", c.write_vtk},
              {"exec", to_string(c.policy)},
              {"threads", c.threads},
              {"solver", solver_to_json(c.solver)}};
}

void validate(const ExperimentConfig& c) {
  if (!kKinds.count(c.kind)) throw ConfigError("unknown experiment kind '" + c.kind + "'");
  if (c.families.empty()) throw ConfigError("families must not be empty");
  if (c.levels.empty()) throw ConfigError("levels must not be empty");
  for (int l : c.levels)
    if (l < 1 || l > 6) throw ConfigError("levels must lie in [1, 6]");
  if (c.k < 1 || c.k > 6) throw ConfigError("k must lie in [1, 6]");
  if (c.q < -1 || c.q > 10) throw ConfigError("q must lie in [0, 10] (or -1 for q = k)");
  for (int d : c.degrees)
    if (d < 1 || d > 6) throw ConfigError("degrees must lie in [1, 6]");
  if (!(c.diffusion > 0.0) || !std::isfinite(c.diffusion)) throw ConfigError("diffusion must be positive and finite");
  for (double d : c.diffusions)
    if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("diffusions must be positive and finite");
  if (c.velocity != "darcy" && c.velocity != "analytic") throw ConfigError("velocity must be 'darcy' or 'analytic'");
  if (c.darcy_degree < -1 || c.darcy_degree > 6) throw ConfigError("darcy_degree must lie in [0, 6] (or -1)");
  if (!(c.final_time > 0.0)) throw ConfigError("final_time must be positive");
  if (c.time_step < 0.0) throw ConfigError("time_step must be non-negative");
  if (c.time_step > 0.0) {
    const double r = c.final_time / c.time_step;
    if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r)) throw ConfigError("time_step must divide final_time");
  }
  if (c.data != "manufactured" && c.data != "wells" && c.data != "constant")
    throw ConfigError("data must be 'manufactured', 'wells' or 'constant'");
  for (const auto& v : c.variants)
    if (!kVariants.count(v)) throw ConfigError("unknown wells variant '" + v + "'");
  if (c.gradient_degree_offset != 0 && c.gradient_degree_offset != -1)
    throw ConfigError("gradient_degree_offset must be 0 or -1");
  if (c.data_quadrature_extra < 0 || c.data_quadrature_extra > 30) throw ConfigError("data_quadrature_extra out of range");
  if (c.wells_nx < 2 || c.wells_ny < 2) throw ConfigError("wells grid too small");
  if (c.threads < 0) throw ConfigError("threads must be non-negative");
  if (c.kind == "wells" && c.data != "wells") throw ConfigError("the wells experiment needs data = 'wells'");
  if ((c.kind == "convergence" || c.kind == "kconv" || c.kind == "drobust") && c.data != "manufactured")
    throw ConfigError("convergence studies need data = 'manufactured'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const json known = config_json(ExperimentConfig{});
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  ExperimentConfig c;
  try {
    c.kind = get_or(j, "kind", c.kind);
    c.name = get_or(j, "name", c.name);
    if (j.contains("families")) {
      c.families.clear();
      for (const auto& f : j.at("families")) c.families.push_back(parse_mesh_family(f.get<std::string>()));
    }
    c.levels = get_or(j, "levels", c.levels);
    c.k = get_or(j, "k", c.k);
    c.q = get_or(j, "q", c.q);
    c.degrees = get_or(j, "degrees", c.degrees);
    c.diffusion = get_or(j, "diffusion", c.diffusion);
    c.diffusions = get_or(j, "diffusions", c.diffusions);
    c.velocity = get_or(j, "velocity", c.velocity);
    c.darcy_degree = get_or(j, "darcy_degree", c.darcy_degree);
    c.final_time = get_or(j, "final_time", c.final_time);
    c.time_step = get_or(j, "time_step", c.time_step);
    c.data = get_or(j, "data", c.data);
    c.variants = get_or(j, "variants", c.variants);
    c.seed = get_or(j, "seed", c.seed);
    c.gradient_degree_offset = get_or(j, "gradient_degree_offset", c.gradient_degree_offset);
    c.data_quadrature_extra = get_or(j, "data_quadrature_extra", c.data_quadrature_extra);
    c.wells_nx = get_or(j, "wells_nx", c.wells_nx);
    c.wells_ny = get_or(j, "wells_ny", c.wells_ny);
    c.snapshots = get_or(j, "snapshots", c.snapshots);
    c.write_vtk = get_or(j, "write_vtk", c.write_vtk);
    c.policy = parse_exec_policy(get_or<std::string>(j, "exec", "parallel"));
    c.threads = get_or(j, "threads", c.threads);
    if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  validate(c);
  return c;
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& config) {
  const std::string s = config_json(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() {
  return {"convergence_k1", "convergence_k2", "kconv", "drobust", "wells", "constant_state"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "convergence_k1" || name == "convergence_k2") {
    c.kind = "convergence";
    c.families = {MeshFamily::quad, MeshFamily::hexa, MeshFamily::voro, MeshFamily::rand};
    c.k = name == "convergence_k1" ? 1 : 2;
  } else if (name == "kconv") {
    c.kind = "kconv";
    c.levels = {1};
    c.degrees = {1, 2, 3, 4};
  } else if (name == "drobust") {
    c.kind = "drobust";
    c.families = {MeshFamily::quad, MeshFamily::hexa, MeshFamily::voro, MeshFamily::rand};
    c.levels = {2};
  } else if (name == "wells") {
    c.kind = "wells";
    c.data = "wells";
    c.diffusion = 1e-3;
    c.final_time = 10.0;
    c.time_step = 0.1;
    c.levels = {1};
    c.data_quadrature_extra = 8;
  } else if (name == "constant_state") {
    c.kind = "custom";
    c.data = "constant";
    c.velocity = "analytic";
    c.levels = {1};
    c.families = {MeshFamily::hexa};
    c.final_time = 1.0;
    c.time_step = 0.1;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  validate(c);
  return c;
}

namespace manufactured {

namespace {
double g(const Point& x) { return (x.x() - 1) * (x.x() - 1) * (x.y() - 1) * (x.y() - 1); }
}  // namespace

double c(double t, const Point& x) { return std::sin(t) * std::exp(g(x)); }

Point grad_c(double t, const Point& x) {
  const double a = x.x() - 1, b = x.y() - 1;
  const double v = c(t, x);
  return Point(2 * a * b * b * v, 2 * a * a * b * v);
}

double c_t(double t, const Point& x) { return std::cos(t) * std::exp(g(x)); }

double laplacian_c(double t, const Point& x) {
  const double a = x.x() - 1, b = x.y() - 1;
  const double gx = 2 * a * b * b, gy = 2 * a * a * b;
  return c(t, x) * (gx * gx + 2 * b * b + gy * gy + 2 * a * a);
}

Point velocity(const Point& x) { return Point(std::exp(x.x()), std::exp(x.y())); }
double pressure(const Point& x) { return std::exp(x.x()) + std::exp(x.y()); }
double source(const Point& x) { return std::exp(x.x()) + std::exp(x.y()); }

double injected(double t, const Point& x, double diffusion) {
  const double f = source(x);
  return (c_t(t, x) + f * c(t, x) + velocity(x).dot(grad_c(t, x)) - diffusion * laplacian_c(t, x)) / f;
}

double inflow(double t, const Point& x, const Point& n, double diffusion) {
  const double un = velocity(x).dot(n);
  if (un == 0.0) return c(t, x);
  return c(t, x) - diffusion * grad_c(t, x).dot(n) / un;
}

}  // namespace manufactured

double WellsSource::operator()(const Point& x) const {
  auto gauss = [&](double cx, double cy) {
    const double dx = x.x() - cx, dy = x.y() - cy;
    return std::exp(-sigma * (dx * dx + dy * dy));
  };
  return s_center * gauss(0.5, 0.5) - s00 * gauss(0.15, 0.15) - s10 * gauss(0.15, 0.85) - s01 * gauss(0.85, 0.15) -
         s11 * gauss(0.85, 0.85) - shift;
}

WellsSource wells_source(const std::string& variant) {
  WellsSource s;
  if (variant == "homo") {
  } else if (variant == "vert") {
    s.s01 = s.s11 = 0.6;
  } else if (variant == "diag") {
    s.s00 = s.s11 = 0.6;
  } else {
    throw ConfigError("unknown wells variant '" + variant + "'");
  }
  return s;
}

double mesh_mean(const PolyMesh& mesh, const std::function<double(const Point&)>& f, int degree) {
  double s = 0.0, a = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const PolygonRule r = polygon_rule(mesh.cell_polygon(c), degree);
    for (size_t q = 0; q < r.points.size(); ++q) {
      s += r.weights[q] * f(r.points[q]);
      a += r.weights[q];
    }
  }
  return s / a;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double step_for(const ExperimentConfig& c, int level) {
  return c.time_step > 0.0 ? c.time_step : level_time_step(level);
}

}  // namespace

DiscreteVelocity manufactured_velocity(const PolyMesh& mesh, const std::string& backend, int degree,
                                       ExecPolicy policy, const SolverConfig& solver) {
  if (backend == "analytic") return analytic_velocity(mesh, manufactured::velocity, degree);
  DarcyProblem p;
  p.source = manufactured::source;
  p.dirichlet = manufactured::pressure;
  return solve_darcy_mixed(mesh, p, degree, policy, solver).velocity;
}

TransportProblem manufactured_problem(const DiscreteVelocity& u, double diffusion) {
  TransportProblem p;
  p.diffusion = diffusion;
  p.velocity = u;
  p.reaction = [](double, const Point& x) { return manufactured::source(x); };
  p.injected = [diffusion](double t, const Point& x) { return manufactured::injected(t, x, diffusion); };
  p.inflow = [diffusion](double t, const Point& x, const Point& n) { return manufactured::inflow(t, x, n, diffusion); };
  p.initial = [](const Point& x) { return manufactured::c(0.0, x); };
  return p;
}

ErrorReport run_manufactured(const ExperimentConfig& config, MeshFamily family, int level, int k, int q,
                             double diffusion, RunTimings* timings) {
  RunTimings t;
  auto t0 = std::chrono::steady_clock::now();
  const PolyMesh mesh = family_mesh(family, level, config.seed);
  t.mesh = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const int kd = config.darcy_degree < 0 ? k : config.darcy_degree;
  const DiscreteVelocity u = manufactured_velocity(mesh, config.velocity, kd, config.policy, config.solver);
  t.darcy = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  VemOptions opt;
  opt.gradient_degree_offset = config.gradient_degree_offset;
  opt.data_quadrature_extra = config.data_quadrature_extra;
  const TransportAssembler assembler(mesh, k, opt, config.policy);
  const TransportProblem problem = manufactured_problem(u, diffusion);
  t.assembly = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  AdvanceOptions ao;
  ao.solver = config.solver;
  const TransportRun run = advance(assembler, problem, TimePartition::uniform(config.final_time, step_for(config, level)), q, ao);
  t.time_stepping = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  ErrorReport rep = error_norms(assembler, run, q, manufactured::c, manufactured::grad_c);
  rep.level = level;
  t.errors = seconds_since(t0);
  if (timings) {
    timings->mesh += t.mesh;
    timings->darcy += t.darcy;
    timings->assembly += t.assembly;
    timings->time_stepping += t.time_stepping;
    timings->errors += t.errors;
  }
  return rep;
}

namespace {

// A failed solve ends the sweep for that family; earlier rows are kept.
bool run_row(std::vector<SweepRow>& rows, SweepRow row, const std::function<ErrorReport()>& fn) {
  try {
    row.report = fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::runtime_error& e) {
    row.error = e.what();
  }
  rows.push_back(std::move(row));
  return rows.back().error.empty();
}

}  // namespace

std::vector<SweepRow> run_convergence(const ExperimentConfig& config, RunTimings* timings) {
  std::vector<SweepRow> rows;
  const int q = config.time_degree();
  for (MeshFamily f : config.families)
    for (int l : config.levels) {
      SweepRow row{f, config.k, q, config.diffusion, {}, {}};
      row.report.level = l;
      if (!run_row(rows, row, [&] { return run_manufactured(config, f, l, config.k, q, config.diffusion, timings); }))
        break;
    }
  return rows;
}

std::vector<SweepRow> run_kconv(const ExperimentConfig& config, RunTimings* timings) {
  std::vector<SweepRow> rows;
  const int l = config.levels.front();
  for (MeshFamily f : config.families)
    for (int k : config.degrees) {
      const int q = config.q < 0 ? k : config.q;
      SweepRow row{f, k, q, config.diffusion, {}, {}};
      row.report.level = l;
      if (!run_row(rows, row, [&] { return run_manufactured(config, f, l, k, q, config.diffusion, timings); })) break;
    }
  return rows;
}

std::vector<SweepRow> run_drobust(const ExperimentConfig& config, RunTimings* timings) {
  std::vector<SweepRow> rows;
  const int q = config.time_degree();
  const int l = config.levels.front();
  for (MeshFamily f : config.families)
    for (double d : config.diffusions) {
      SweepRow row{f, config.k, q, d, {}, {}};
      row.report.level = l;
      if (!run_row(rows, row, [&] { return run_manufactured(config, f, l, config.k, q, d, timings); })) break;
    }
  return rows;
}

ConstantStateResult run_constant_state(const ExperimentConfig& config, RunTimings* timings) {
  auto t0 = std::chrono::steady_clock::now();
  const int level = config.levels.front();
  const PolyMesh mesh = family_mesh(config.families.front(), level, config.seed);
  const double t_mesh = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  VemOptions opt;
  opt.gradient_degree_offset = config.gradient_degree_offset;
  opt.data_quadrature_extra = config.data_quadrature_extra;
  const TransportAssembler assembler(mesh, config.k, opt, config.policy);
  TransportProblem p;
  p.diffusion = config.diffusion;
  p.velocity = analytic_velocity(mesh, [](const Point&) { return Point(1.0, 0.0); }, config.k);
  p.reaction = [](double, const Point&) { return 0.0; };
  p.injected = [](double, const Point&) { return 0.0; };
  p.inflow = [](double, const Point&, const Point&) { return 1.0; };
  p.initial = [](const Point&) { return 1.0; };
  const double t_asm = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  ConstantStateResult res;
  const int q = config.time_degree();
  const RadauRule rule = gauss_radau(q);
  const int nvd = assembler.dofs().num_vertex_dofs();
  AdvanceOptions ao;
  ao.solver = config.solver;
  ao.keep_slabs = false;
  const Eigen::VectorXd one = assembler.interpolate(p.initial);
  ao.observer = [&](const SlabSolution& s) {
    res.max_deviation = std::max(res.max_deviation, (s.values.colwise() - one).cwiseAbs().maxCoeff());
    const auto mm = minmax_trace(s, nvd, rule);
    res.minmax.insert(res.minmax.end(), mm.begin(), mm.end());
    ++res.slabs;
  };
  advance(assembler, p, TimePartition::uniform(config.final_time, step_for(config, level)), q, ao);
  if (timings) {
    timings->mesh += t_mesh;
    timings->assembly += t_asm;
    timings->time_stepping += seconds_since(t0);
  }
  return res;
}

std::vector<int> mirror_vertices(const PolyMesh& mesh, int axis, double tol) {
  std::map<std::pair<long long, long long>, std::vector<int>> buckets;
  auto key = [&](const Point& p) {
    return std::make_pair(static_cast<long long>(std::floor(p.x() / (10 * tol))),
                          static_cast<long long>(std::floor(p.y() / (10 * tol))));
  };
  for (int v = 0; v < mesh.num_vertices(); ++v) buckets[key(mesh.vertex(v))].push_back(v);
  std::vector<int> m(mesh.num_vertices(), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    Point p = mesh.vertex(v);
    p(axis) = 1.0 - p(axis);
    const auto k0 = key(p);
    for (long long dx = -1; dx <= 1 && m[v] < 0; ++dx)
      for (long long dy = -1; dy <= 1 && m[v] < 0; ++dy) {
        const auto it = buckets.find({k0.first + dx, k0.second + dy});
        if (it == buckets.end()) continue;
        for (int w : it->second)
          if ((mesh.vertex(w) - p).norm() <= tol) {
            m[v] = w;
            break;
          }
      }
  }
  return m;
}

WellsResult run_wells(const ExperimentConfig& config, const std::string& variant, RunTimings* timings) {
  RunTimings tm;
  auto t0 = std::chrono::steady_clock::now();
  WellsResult res;
  res.variant = variant;
  res.mesh = generate_hex_grid(config.wells_nx, config.wells_ny);
  const PolyMesh& mesh = res.mesh;
  tm.mesh = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const int k = config.k;
  const int kd = config.darcy_degree < 0 ? k : config.darcy_degree;
  WellsSource src = wells_source(variant);
  const int src_degree = 2 * kd + 4 + config.data_quadrature_extra;
  // pure Neumann with g_N = 0 needs int f = 0
  src.shift = mesh_mean(mesh, src, src_degree);
  res.mean_shift = src.shift;
  DarcyProblem dp;
  dp.source = src;
  dp.neumann = [](const Point&, const Point&) { return 0.0; };
  dp.neumann_edges = mesh.boundary_edges();
  dp.source_quadrature_degree = src_degree;
  res.darcy = solve_darcy_mixed(mesh, dp, kd, config.policy, config.solver);
  tm.darcy = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  VemOptions opt;
  opt.gradient_degree_offset = config.gradient_degree_offset;
  opt.data_quadrature_extra = config.data_quadrature_extra;
  const TransportAssembler assembler(mesh, k, opt, config.policy);
  TransportProblem tp;
  tp.diffusion = config.diffusion;
  tp.velocity = res.darcy.velocity;
  tp.reaction = [src](double, const Point& x) { return src(x); };
  tp.injected = [](double t, const Point&) { return t <= 1.0 ? t : 0.0; };
  tp.initial = [](const Point&) { return 0.0; };
  tm.assembly = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const int q = config.time_degree();
  const RadauRule rule = gauss_radau(q);
  const TimePartition part = TimePartition::uniform(config.final_time, config.time_step > 0 ? config.time_step : 0.1);
  const int nvd = assembler.dofs().num_vertex_dofs();
  const SparseMatrix& mass = assembler.mass();
  AdvanceOptions ao;
  ao.solver = config.solver;
  ao.keep_slabs = false;
  double prev_energy = 0.0;
  ao.observer = [&](const SlabSolution& s) {
    const auto mm = minmax_trace(s, nvd, rule);
    res.minmax.insert(res.minmax.end(), mm.begin(), mm.end());
    const Eigen::VectorXd tr = s.trace();
    const double e = tr.dot(mass.multiply(tr));
    if (s.t0 >= 1.0 - 1e-12 && prev_energy > 0.0)
      res.energy_increase_after_ramp = std::max(res.energy_increase_after_ramp, (e - prev_energy) / prev_energy);
    prev_energy = e;
    res.energy.emplace_back(s.t1, e);
    for (double ts : config.snapshots)
      if (std::abs(s.t1 - ts) < 1e-9) res.snapshots.push_back({ts, tr});
    ++res.slabs;
  };
  advance(assembler, tp, part, q, ao);
  tm.time_stepping = seconds_since(t0);

  res.min_value = 0.0;
  res.max_value = 0.0;
  for (const MinMax& m : res.minmax) {
    res.min_value = std::min(res.min_value, m.min);
    res.max_value = std::max(res.max_value, m.max);
  }
  const std::vector<int> mx = mirror_vertices(mesh, 0), my = mirror_vertices(mesh, 1);
  for (const WellsSnapshot& s : res.snapshots)
    for (int v = 0; v < mesh.num_vertices(); ++v)
      for (const auto* m : {&mx, &my}) {
        const int w = (*m)[v];
        if (w < 0) {
          res.symmetry_residual = std::numeric_limits<double>::infinity();
          continue;
        }
        res.symmetry_residual = std::max(res.symmetry_residual, std::abs(s.dofs(v) - s.dofs(w)));
      }
  if (timings) {
    timings->mesh += tm.mesh;
    timings->darcy += tm.darcy;
    timings->assembly += tm.assembly;
    timings->time_stepping += tm.time_stepping;
  }
  return res;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, const std::string& sweep_key) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "family,k,q,D,level,h,dt,dofs,l2_final,h1_final,l2_h1,err,rate_err\n";
  out << std::setprecision(10);
  const SweepRow* prev = nullptr;
  for (const SweepRow& r : rows) {
    if (!r.error.empty()) continue;
    out << to_string(r.family) << ',' << r.k << ',' << r.q << ',' << r.diffusion << ',' << r.report.level << ','
        << r.report.h << ',' << r.report.dt << ',' << r.report.num_dofs << ',' << r.report.l2_final << ','
        << r.report.h1_final << ',' << r.report.l2_h1 << ',' << r.report.err << ',';
    if (sweep_key == "level" && prev && prev->family == r.family)
      out << std::log(prev->report.err / r.report.err) / std::log(prev->report.h / r.report.h);
    out << '\n';
    prev = &r;
  }
}

void write_minmax_csv(const std::string& path, const std::vector<MinMax>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,min,max\n" << std::setprecision(12);
  for (const MinMax& m : rows) out << m.t << ',' << m.min << ',' << m.max << '\n';
}

}  // namespace vemt
