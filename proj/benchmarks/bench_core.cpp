#include <benchmark/benchmark.h>

#include "erbm/er.hpp"
#include "erbm/maps.hpp"
#include "erbm/sampler.hpp"

using namespace erbm;

namespace {

Domain annulus() {
  return Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({0, 0}, 0.25)});
}

Domain twohole() {
  return Domain(SmoothClosedCurve::circle({0, 0}, 1.0),
                {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
                 SmoothClosedCurve::circle({0.45, 0}, 0.18)});
}

void BM_SolverAssembly(benchmark::State& state) {
  Domain d = twohole();
  int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto solver = make_solver(d, nodes);
    benchmark::DoNotOptimize(solver->condition_estimate());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolverAssembly)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_DirichletSolve(benchmark::State& state) {
  auto solver = make_solver(twohole());
  for (auto _ : state) {
    auto u = solve_dirichlet(solver, [](int, double t, Point) { return std::sin(t); });
    benchmark::DoNotOptimize(u.value({0.1, 0.2}));
  }
}
BENCHMARK(BM_DirichletSolve);

void BM_FieldValueFar(benchmark::State& state) {
  auto solver = make_solver(twohole());
  auto u = solve_dirichlet(solver, [](int, double t, Point) { return std::sin(t); });
  Point z(0.1, 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(u.value(z));
}
BENCHMARK(BM_FieldValueFar);

void BM_FieldValueNear(benchmark::State& state) {
  auto solver = make_solver(twohole());
  auto u = solve_dirichlet(solver, [](int, double t, Point) { return std::sin(t); });
  Point z(0.0, 0.999);  // 1e-3 from the outer boundary
  for (auto _ : state) benchmark::DoNotOptimize(u.value(z));
}
BENCHMARK(BM_FieldValueNear);

void BM_FluxQuadrature(benchmark::State& state) {
  auto solver = make_solver(annulus());
  auto ws = make_er_workspace(solver);
  const auto& omega = ws->omega(1);
  auto collar = ws->collar(1);
  for (auto _ : state) benchmark::DoNotOptimize(flux(omega, collar.curve, 512));
}
BENCHMARK(BM_FluxQuadrature);

void BM_WosPath(benchmark::State& state) {
  auto solver = make_solver(annulus());
  RunConfig cfg;
  cfg.path_count = 1;
  ErbmSampler sampler(solver, cfg);
  uint64_t p = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample_path(1, p++).exit_t);
  }
}
BENCHMARK(BM_WosPath);

void BM_MapEvaluate(benchmark::State& state) {
  auto ws = make_er_workspace(make_solver(annulus()));
  auto result = bilateral_map(ws, 1);
  Point z(0.5, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(result.map->evaluate(z));
}
BENCHMARK(BM_MapEvaluate);

}  // namespace

BENCHMARK_MAIN();
