// Serial reference loops against the OpenMP element kernels.
// Run with OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include <memory>

#include "pfb/benchmarks.hpp"
#include "pfb/flow_driver.hpp"
#include "pfb/transport.hpp"

namespace {

using namespace pfb;

FlowProblem layered(int n, Formulation f) {
  BenchmarkSpec spec = multilayer();
  spec.mesh.nx = spec.mesh.ny = n;
  return build_flow_problem(spec, std::make_shared<const Mesh>(build_mesh(spec)), f);
}

template <Formulation F, Execution E>
void flow_assembly(benchmark::State& state) {
  const FlowProblem problem = layered(static_cast<int>(state.range(0)), F);
  for (auto _ : state) {
    SparseSystem s = assemble_flow(problem, {}, E);
    benchmark::DoNotOptimize(s.rhs.data());
  }
  state.SetItemsProcessed(state.iterations() * problem.mesh->num_triangles());
}

template <Execution E>
void transport_assembly(benchmark::State& state) {
  BenchmarkSpec spec = multilayer();
  spec.mesh.nx = spec.mesh.ny = static_cast<int>(state.range(0));
  auto mesh = std::make_shared<const Mesh>(build_mesh(spec));
  const FlowSolution flow = solve_flow(build_flow_problem(spec, mesh, Formulation::rt0));
  const TransportProblem problem = build_transport_problem(spec, mesh);
  for (auto _ : state) {
    TransportMatrices m = assemble_transport(problem, flow, E);
    benchmark::DoNotOptimize(m.mass.val.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh->num_triangles());
}

}  // namespace

BENCHMARK(flow_assembly<Formulation::rt0, Execution::serial>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(flow_assembly<Formulation::rt0, Execution::parallel>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(flow_assembly<Formulation::vms, Execution::serial>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(flow_assembly<Formulation::vms, Execution::parallel>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(transport_assembly<Execution::serial>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(transport_assembly<Execution::parallel>)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
