#include <benchmark/benchmark.h>

#include <nerve/complex.hpp>
#include <nerve/solver.hpp>

using namespace nerve;

namespace {

SpaceConfig su_torus(int n) {
  SpaceConfig cfg;
  cfg.ambient = {{Family::SpecialUnitary, n}};
  cfg.kind = SubgroupKind::MaximalTorus;
  return cfg;
}

void BM_BuildSpace(benchmark::State& state) {
  auto cfg = su_torus(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_space(cfg));
}
BENCHMARK(BM_BuildSpace)->Arg(3)->Arg(4)->Arg(5);

void BM_EnumerateLattice(benchmark::State& state) {
  auto sp = build_space(su_torus(int(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_intermediate(sp));
}
BENCHMARK(BM_EnumerateLattice)->Arg(4)->Arg(5);

void BM_Homology(benchmark::State& state) {
  auto sp = build_space(su_torus(int(state.range(0))));
  auto poset = enumerate_intermediate(sp);
  auto cx = flag_complex(poset);
  for (auto _ : state) benchmark::DoNotOptimize(homology(cx));
}
BENCHMARK(BM_Homology)->Arg(4)->Arg(5);

void BM_RicciEigenvalues(benchmark::State& state) {
  auto sp = build_space(su_torus(4));
  Metric m{Eigen::VectorXd::Ones(sp.ell())};
  for (auto _ : state) benchmark::DoNotOptimize(ricci_eigenvalues(sp, m));
}
BENCHMARK(BM_RicciEigenvalues);

void BM_FlowStep(benchmark::State& state) {
  auto sp = build_space(su_torus(3));
  Metric x0{Eigen::VectorXd(3)};
  x0.x << 1.2, 0.9, 1.0;
  FlowOptions fo;
  fo.tMax = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(ricci_flow(sp, x0, fo));
}
BENCHMARK(BM_FlowStep);

void BM_FindEinstein(benchmark::State& state) {
  auto sp = build_space(su_torus(3));
  for (auto _ : state) benchmark::DoNotOptimize(find_einstein(sp));
}
BENCHMARK(BM_FindEinstein);

}  // namespace

BENCHMARK_MAIN();
