#include "cusplab/analysis.hpp"
#include "cusplab/bogovskii.hpp"
#include "cusplab/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace cusplab;

void BM_MakeRule(benchmark::State& state) {
  const CuspDomain domain(2.0, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(make_rule(domain, static_cast<int>(state.range(0)), 3.0));
}
BENCHMARK(BM_MakeRule)->Arg(32)->Arg(64)->Arg(128);

void BM_Integrate(benchmark::State& state) {
  const QuadratureRule rule = make_rule(CuspDomain(2.0, 1, 0), static_cast<int>(state.range(0)), 3.0);
  const ScalarField f([](const Point& p) { return std::cos(3.0 * p.x) / (p.x * p.x); });
  for (auto _ : state) benchmark::DoNotOptimize(integrate(rule, f, 2.0));
}
BENCHMARK(BM_Integrate)->Arg(32)->Arg(64)->Arg(128);

void BM_BogovskiiEval(benchmark::State& state) {
  const CuspDomain ref(1.0, 1, 0);
  const QuadratureRule rule = make_rule(ref, 48, 2.0);
  const ScalarField f = project_mean_zero(rule, ScalarField([](const Point& p) { return std::cos(2.0 * p.x); }));
  const int n = static_cast<int>(state.range(0));
  const BogovskiiSolver solver(StarDomain::standard(1, 0), f, rule, RayOrders{n, n, n});
  const Point x = interior_probes(ref, 1, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(solver(x));
}
BENCHMARK(BM_BogovskiiEval)->Arg(24)->Arg(48);

void BM_AssembleStokes(benchmark::State& state) {
  const GradedMesh mesh = build_graded_mesh(CuspDomain(2.0, 1, 0), static_cast<int>(state.range(0)), 2.0, 0.1, 8);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stokes(mesh, 2.0));
  state.counters["cells"] = static_cast<double>(mesh.cell_count());
}
BENCHMARK(BM_AssembleStokes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InfSupLanczos(benchmark::State& state) {
  const GradedMesh mesh = build_graded_mesh(CuspDomain(2.0, 1, 0), static_cast<int>(state.range(0)), 2.0, 0.1, 8);
  const DiscreteSaddle saddle = assemble_stokes(mesh, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(inf_sup_constant(saddle));
}
BENCHMARK(BM_InfSupLanczos)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KornLanczos(benchmark::State& state) {
  const GradedMesh mesh = build_graded_mesh(CuspDomain(2.0, 1, 0), static_cast<int>(state.range(0)), 2.0, 0.025, 4);
  const KornSystem sys = assemble_korn(mesh, KornWeights::theorem(0.0, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(korn_constant(sys));
}
BENCHMARK(BM_KornLanczos)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
