#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "vemt/experiment.hpp"

using namespace vemt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vemt_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VEMT_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const ExperimentConfig c;
  const ExperimentConfig r = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(r), config_to_json(c));
  EXPECT_EQ(config_hash(r), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
  ExperimentConfig d = c;
  d.diffusion = 0.5;
  EXPECT_NE(config_hash(d), config_hash(c));
}

TEST(Config, PartialDocumentUsesDefaults) {
  const ExperimentConfig c = parse_config(R"({"kind": "drobust", "families": ["voro"], "levels": [2]})");
  EXPECT_EQ(c.kind, "drobust");
  ASSERT_EQ(c.families.size(), 1u);
  EXPECT_EQ(c.families[0], MeshFamily::voro);
  EXPECT_EQ(c.k, 1);
  EXPECT_EQ(c.time_degree(), 1);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"diffusionn": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"diffusion": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"diffusions": [1, -1e-3]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"diffusion": "big"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"k": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"q": -2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"families": ["tri"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"kind": "wells"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"kind": "wells", "data": "wells", "variants": ["skew"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"time_step": 0.3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"velocity": "magic"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"solver": {"method": "cg"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"solver": {"tolerance": 1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"exec": "gpu"})"), ConfigError);
  EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(Config, CheckedInPresetsMatchBuiltins) {
  for (const std::string& name : preset_names()) {
    const fs::path p = fs::path(VEMT_PRESETS_DIR) / (name + ".json");
    ASSERT_TRUE(fs::exists(p)) << p;
    const std::string text = slurp(p);
    EXPECT_EQ(text, config_to_json(preset(name))) << name;
    EXPECT_EQ(config_hash(parse_config(text)), config_hash(preset(name)));
  }
}

TEST(Manufactured, DerivativesMatchFiniteDifferences) {
  const double e = 1e-5;
  for (const Point& x : {Point(0.2, 0.7), Point(0.9, 0.1), Point(0.5, 0.5)})
    for (double t : {0.3, 1.0}) {
      const Point g = manufactured::grad_c(t, x);
      EXPECT_NEAR(g.x(), (manufactured::c(t, x + Point(e, 0)) - manufactured::c(t, x - Point(e, 0))) / (2 * e), 1e-8);
      EXPECT_NEAR(g.y(), (manufactured::c(t, x + Point(0, e)) - manufactured::c(t, x - Point(0, e))) / (2 * e), 1e-8);
      EXPECT_NEAR(manufactured::c_t(t, x), (manufactured::c(t + e, x) - manufactured::c(t - e, x)) / (2 * e), 1e-8);
      const double h = 1e-4;
      double lap = -4 * manufactured::c(t, x);
      for (const Point& d : {Point(h, 0), Point(-h, 0), Point(0, h), Point(0, -h)}) lap += manufactured::c(t, x + d);
      EXPECT_NEAR(manufactured::laplacian_c(t, x), lap / (h * h), 1e-5);
      // u = grad p, f = div u
      EXPECT_NEAR(manufactured::source(x), std::exp(x.x()) + std::exp(x.y()), 1e-15);
    }
}

TEST(Manufactured, InjectedAndInflowClosures) {
  const double D = 0.01;
  const Point x(0.0, 0.4), n(-1, 0);
  const double t = 0.6;
  const double f = manufactured::source(x);
  const double lhs = manufactured::c_t(t, x) + f * manufactured::c(t, x) +
                     manufactured::velocity(x).dot(manufactured::grad_c(t, x)) - D * manufactured::laplacian_c(t, x);
  EXPECT_NEAR(lhs, f * manufactured::injected(t, x, D), 1e-13);
  // total flux (u c - D grad c).n matches (u.n) c_I on the inflow side
  const double un = manufactured::velocity(x).dot(n);
  EXPECT_NEAR(un * manufactured::c(t, x) - D * manufactured::grad_c(t, x).dot(n), un * manufactured::inflow(t, x, n, D), 1e-14);
  EXPECT_EQ(manufactured::inflow(t, x, Point(0, 0), D), manufactured::c(t, x));
}

TEST(Sweeps, KconvIsDeterministic) {
  ExperimentConfig c = preset("kconv");
  c.degrees = {1, 2};
  const fs::path d = scratch("kconv");
  write_sweep_csv((d / "a.csv").string(), run_kconv(c), "k");
  c.policy = ExecPolicy::serial;
  write_sweep_csv((d / "b.csv").string(), run_kconv(c), "k");
  EXPECT_EQ(slurp(d / "a.csv"), slurp(d / "b.csv"));
}

TEST(Sweeps, FailedRowsAreRecordedAndSkipped) {
  ExperimentConfig c = preset("convergence_k1");
  c.families = {MeshFamily::quad};
  c.levels = {1, 2};
  c.solver.method = SolverMethod::iterative;
  c.solver.max_iterations = 1;
  c.solver.iterative_tolerance = 1e-15;
  const auto rows = run_convergence(c);
  ASSERT_EQ(rows.size(), 1u);  // the family stops after the first failure
  EXPECT_FALSE(rows[0].error.empty());
}

TEST(Wells, SourceVariantsAndMeanCorrection) {
  const WellsSource h = wells_source("homo"), v = wells_source("vert"), d = wells_source("diag");
  EXPECT_EQ(v.s01, 0.6);
  EXPECT_EQ(v.s11, 0.6);
  EXPECT_EQ(v.s00, 0.3);
  EXPECT_EQ(d.s00, 0.6);
  EXPECT_EQ(d.s11, 0.6);
  EXPECT_EQ(d.s10, 0.3);
  EXPECT_NEAR(h(Point(0.5, 0.5)), 0.3, 1e-6);
  EXPECT_THROW(wells_source("skew"), ConfigError);
  const PolyMesh m = generate_hex_grid(12, 13);
  WellsSource s = wells_source("vert");
  s.shift = mesh_mean(m, s, 14);
  EXPECT_NEAR(mesh_mean(m, s, 14), 0.0, 1e-13);
}

TEST(Wells, MirrorMapIsAnInvolution) {
  const PolyMesh m = generate_hex_grid(12, 13);
  for (int axis = 0; axis < 2; ++axis) {
    const auto mm = mirror_vertices(m, axis);
    for (int v = 0; v < m.num_vertices(); ++v) {
      ASSERT_GE(mm[v], 0);
      EXPECT_EQ(mm[mm[v]], v);
    }
  }
  const auto q = mirror_vertices(family_mesh(MeshFamily::voro, 1), 0);
  EXPECT_NE(std::count(q.begin(), q.end(), -1), 0);
}

TEST(Wells, HomoRunIsSymmetricPositiveAndDissipative) {
  ExperimentConfig c = preset("wells");
  c.final_time = 3.0;
  const WellsResult w = run_wells(c, "homo");
  EXPECT_EQ(w.slabs, 30);
  EXPECT_LE(w.symmetry_residual, 1e-6);
  EXPECT_GE(w.min_value, -0.05 * w.max_value);
  EXPECT_LE(w.energy_increase_after_ramp, 0.0);
  ASSERT_EQ(w.snapshots.size(), 2u);  // t = 1, 2
  EXPECT_LT(std::abs(w.darcy.compatibility_defect), 1e-12);
}

TEST(Cli, ExitCodesAndManifest) {
  const fs::path d = scratch("cli");
  EXPECT_EQ(run_cli("kconv --preset nope --out " + (d / "x").string()), 2);
  EXPECT_EQ(run_cli("wells --preset kconv --out " + (d / "x").string()), 2);
  EXPECT_EQ(run_cli("kconv --config " + (d / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  {
    std::ofstream(d / "bad.json") << R"({"kind": "drobust", "diffusions": [0]})";
  }
  EXPECT_EQ(run_cli("drobust --config " + (d / "bad.json").string() + " --out " + (d / "x").string()), 2);
  {
    std::ofstream(d / "fail.json") << R"({"kind": "convergence", "levels": [1],
      "solver": {"method": "iterative", "max_iterations": 1, "iterative_tolerance": 1e-15}})";
  }
  EXPECT_EQ(run_cli("convergence --config " + (d / "fail.json").string() + " --out " + (d / "f").string()), 3);

  {
    std::ofstream(d / "small.json") << R"({"kind": "convergence", "levels": [1, 2], "families": ["quad", "hexa"]})";
  }
  ASSERT_EQ(run_cli("convergence --config " + (d / "small.json").string() + " --out " + (d / "r1").string()), 0);
  ASSERT_EQ(run_cli("convergence --threads 1 --config " + (d / "small.json").string() + " --out " + (d / "r2").string()), 0);
  EXPECT_EQ(slurp(d / "r1" / "convergence.csv"), slurp(d / "r2" / "convergence.csv"));
  const auto man = nlohmann::json::parse(slurp(d / "r1" / "manifest.json"));
  EXPECT_EQ(man["config_hash"], config_hash(parse_config(slurp(d / "small.json"))));
  EXPECT_TRUE(man.contains("version"));
  EXPECT_TRUE(man["timings"].contains("total"));
  EXPECT_EQ(man["status"], "ok");
  const std::string csv = slurp(d / "r1" / "convergence.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "family,k,q,D,level,h,dt,dofs,l2_final,h1_final,l2_h1,err,rate_err");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  ASSERT_EQ(run_cli("custom --out " + (d / "c").string()), 0);
  const auto cm = nlohmann::json::parse(slurp(d / "c" / "manifest.json"));
  EXPECT_LT(cm["constant_state"]["max_deviation"].get<double>(), 1e-9);
}
