// vemt: experiment runner.
//
//   vemt convergence|kconv|drobust|wells|custom [--preset NAME | --config PATH]
//        [--out DIR] [--threads N]
//
// Exit codes: 0 success, 2 config error, 3 solver failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "vemt/experiment.hpp"
#include "vemt/mesh_io.hpp"

#ifndef VEMT_VERSION
#define VEMT_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vemt;

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;

std::string default_preset(const std::string& sub) {
  if (sub == "convergence") return "convergence_k1";
  if (sub == "custom") return "constant_state";
  return sub;
}

ExperimentConfig load_config(const std::string& sub, const std::string& path, const std::string& name) {
  if (!path.empty() && !name.empty()) throw ConfigError("--config and --preset are mutually exclusive");
  ExperimentConfig c;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    c = parse_config(ss.str());
  } else {
    c = preset(name.empty() ? default_preset(sub) : name);
  }
  if (sub != "custom" && c.kind != sub)
    throw ConfigError("config kind '" + c.kind + "' does not match subcommand '" + sub + "'");
  return c;
}

json timings_json(const RunTimings& t, double total) {
  return json{{"mesh", t.mesh},
              {"darcy", t.darcy},
              {"assembly", t.assembly},
              {"time_stepping", t.time_stepping},
              {"errors", t.errors},
              {"total", total}};
}

std::string sweep_key(const std::string& kind) {
  if (kind == "kconv") return "k";
  if (kind == "drobust") return "D";
  return "level";
}

// Returns false if any row failed.
bool run_sweep(const ExperimentConfig& c, const fs::path& out, RunTimings& t, json& manifest) {
  std::vector<SweepRow> rows;
  if (c.kind == "kconv")
    rows = run_kconv(c, &t);
  else if (c.kind == "drobust")
    rows = run_drobust(c, &t);
  else
    rows = run_convergence(c, &t);
  const std::string csv = c.kind + ".csv";
  write_sweep_csv((out / csv).string(), rows, sweep_key(c.kind));
  manifest["outputs"].push_back(csv);
  bool ok = true;
  for (const SweepRow& r : rows) {
    if (!r.error.empty()) {
      ok = false;
      std::cerr << "run failed (" << to_string(r.family) << ", level " << r.report.level << ", k " << r.k
                << "): " << r.error << "\n";
      manifest["failures"].push_back(json{{"family", to_string(r.family)},
                                          {"level", r.report.level},
                                          {"k", r.k},
                                          {"D", r.diffusion},
                                          {"error", r.error}});
      continue;
    }
    std::printf("%-5s k=%d q=%d D=%-8.1e level=%d h=%.4f dt=%.5f dofs=%-7d err=%.6e l2_final=%.6e\n",
                to_string(r.family).c_str(), r.k, r.q, r.diffusion, r.report.level, r.report.h, r.report.dt,
                r.report.num_dofs, r.report.err, r.report.l2_final);
  }
  return ok;
}

void write_wells_vtk(const WellsResult& w, const fs::path& out, json& manifest) {
  const PolyMesh& mesh = w.mesh;
  std::vector<Point> vel(mesh.num_cells());
  std::vector<double> pressure(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto poly = mesh.cell_polygon(c);
    const Point xc = polygon_centroid(poly);
    vel[c] = w.darcy.velocity.cell_velocity(mesh, c, xc);
    pressure[c] = w.darcy.pressure[c](0);
  }
  for (const WellsSnapshot& s : w.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "wells_%s_t%05.2f.vtk", w.variant.c_str(), s.t);
    VtkField conc{"concentration", std::vector<double>(s.dofs.data(), s.dofs.data() + mesh.num_vertices())};
    write_vtk_polydata((out / name).string(), mesh, {conc}, {VtkField{"pressure_mode0", pressure}},
                       {VtkVectorField{"velocity", vel}});
    manifest["outputs"].push_back(name);
  }
}

bool run_wells_all(const ExperimentConfig& c, const fs::path& out, RunTimings& t, json& manifest) {
  for (const std::string& v : c.variants) {
    const WellsResult w = run_wells(c, v, &t);
    std::cerr << "wells " << v << ": source mean " << w.mean_shift << " subtracted for pure-Neumann solvability\n";
    const std::string csv = "wells_" + v + "_minmax.csv";
    write_minmax_csv((out / csv).string(), w.minmax);
    manifest["outputs"].push_back(csv);
    if (c.write_vtk) write_wells_vtk(w, out, manifest);
    const bool positive = w.min_value >= -0.05 * w.max_value;
    manifest["wells"][v] = json{{"slabs", w.slabs},
                                {"mean_shift", w.mean_shift},
                                {"min", w.min_value},
                                {"max", w.max_value},
                                {"positivity_ok", positive},
                                {"symmetry_residual", w.symmetry_residual},
                                {"energy_increase_after_ramp", w.energy_increase_after_ramp}};
    std::printf("%-4s slabs=%d min=%.4e max=%.4e positivity=%s symmetry=%.3e energy_increase=%.3e\n", v.c_str(),
                w.slabs, w.min_value, w.max_value, positive ? "ok" : "violated", w.symmetry_residual,
                w.energy_increase_after_ramp);
  }
  return true;
}

bool run_constant(const ExperimentConfig& c, const fs::path& out, RunTimings& t, json& manifest) {
  const ConstantStateResult r = run_constant_state(c, &t);
  write_minmax_csv((out / "constant_minmax.csv").string(), r.minmax);
  manifest["outputs"].push_back("constant_minmax.csv");
  manifest["constant_state"] = json{{"slabs", r.slabs}, {"max_deviation", r.max_deviation}};
  std::printf("constant state: slabs=%d max deviation=%.3e\n", r.slabs, r.max_deviation);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytopal VEM solver for Darcy-driven transport"};
  app.require_subcommand(1);
  std::string config_path, preset_name, out_dir = "out";
  int threads = -1;
  for (const char* name : {"convergence", "kconv", "drobust", "wells", "custom"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--preset", preset_name, "built-in preset name");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "OpenMP threads (0: default)")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    config = load_config(sub, config_path, preset_name);
    if (threads >= 0) config.threads = threads;
    fs::create_directories(out_dir);
    if (!fs::is_directory(out_dir)) throw ConfigError("output directory not usable: " + out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  if (config.threads > 0) omp_set_num_threads(config.threads);

  const fs::path out(out_dir);
  json manifest;
  manifest["version"] = VEMT_VERSION;
  manifest["subcommand"] = sub;
  manifest["config_hash"] = config_hash(config);
  manifest["config"] = json::parse(config_to_json(config));
  manifest["outputs"] = json::array();
  manifest["threads"] = omp_get_max_threads();
  {
    std::ofstream(out / "config.json") << config_to_json(config);
    manifest["outputs"].push_back("config.json");
  }

  RunTimings t;
  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    bool ok = true;
    if (config.kind == "wells")
      ok = run_wells_all(config, out, t, manifest);
    else if (config.kind == "custom" && config.data == "constant")
      ok = run_constant(config, out, t, manifest);
    else if (config.kind == "custom" && config.data == "wells")
      ok = run_wells_all(config, out, t, manifest);
    else
      ok = run_sweep(config, out, t, manifest);
    if (!ok) rc = kSolverFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    rc = kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    manifest["failures"].push_back(json{{"error", e.what()}});
    rc = kSolverFailure;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["timings"] = timings_json(t, total);
  manifest["status"] = rc == 0 ? "ok" : (rc == kConfigError ? "config_error" : "solver_failure");
  std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
  return rc;
}
