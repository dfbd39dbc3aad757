// Serial reference vs OpenMP assembly.
//
//   vemt_bench [--benchmark_filter=...]
//
// Arguments: (policy, mesh level); policy 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "vemt/darcy.hpp"
#include "vemt/experiment.hpp"
#include "vemt/mesh_generators.hpp"
#include "vemt/transport.hpp"

using namespace vemt;

namespace {

ExecPolicy policy_arg(const benchmark::State& s) { return s.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel; }

const PolyMesh& voro_mesh(int level) {
  static PolyMesh meshes[6];
  if (meshes[level].num_cells() == 0) meshes[level] = family_mesh(MeshFamily::voro, level);
  return meshes[level];
}

void BM_ElementData(benchmark::State& s) {
  const PolyMesh& m = voro_mesh(static_cast<int>(s.range(1)));
  for (auto _ : s) {
    TransportAssembler as(m, 2, {}, policy_arg(s));
    benchmark::DoNotOptimize(as.mass().nnz());
  }
  s.counters["cells"] = m.num_cells();
}

void BM_A0(benchmark::State& s) {
  const PolyMesh& m = voro_mesh(static_cast<int>(s.range(1)));
  const ExecPolicy p = policy_arg(s);
  const TransportAssembler as(m, 2, {}, p);
  const TransportProblem prob = manufactured_problem(manufactured_velocity(m, "analytic", 2, p, {}), 1e-2);
  for (auto _ : s) {
    const SparseMatrix a0 = as.a0(prob, 0.5);
    benchmark::DoNotOptimize(a0.nnz());
  }
  s.counters["cells"] = m.num_cells();
}

void BM_DarcyMixed(benchmark::State& s) {
  const PolyMesh& m = voro_mesh(static_cast<int>(s.range(1)));
  DarcyProblem prob;
  prob.source = manufactured::source;
  prob.dirichlet = manufactured::pressure;
  for (auto _ : s) {
    const DarcySolution sol = solve_darcy_mixed(m, prob, 2, policy_arg(s));
    benchmark::DoNotOptimize(sol.pressure.data());
  }
  s.counters["cells"] = m.num_cells();
}

}  // namespace

BENCHMARK(BM_ElementData)->ArgsProduct({{0, 1}, {3, 4, 5}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_A0)->ArgsProduct({{0, 1}, {3, 4, 5}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DarcyMixed)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
