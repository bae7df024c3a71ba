#include <cmath>
#include <filesystem>

#include <benchmark/benchmark.h>

#include "blowup/blowup_profile.hpp"
#include "blowup/inequality.hpp"
#include "blowup/param_flow.hpp"
#include "blowup/profile_io.hpp"
#include "blowup/radial_pde.hpp"

using namespace blowup;

namespace {

const ConstantsTable& table() {
  static const ConstantsTable t = derive_constants(ModelInput{});
  return t;
}

std::shared_ptr<const RadialGrid> grid() {
  static const auto g = RadialGrid::make(GridSpec{});
  return g;
}

const ProfileBasis& basis() {
  static const ProfileBasis b = make_profile_basis(table(), grid());
  return b;
}

}  // namespace

static void BM_DeriveConstants(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(derive_constants(ModelInput{}));
}
BENCHMARK(BM_DeriveConstants);

static void BM_GroundState(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compute_ground_state(table(), grid()));
  state.counters["nodes"] = static_cast<double>(grid()->size());
}
BENCHMARK(BM_GroundState)->Unit(benchmark::kMillisecond);

static void BM_KernelPair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_pair(table(), n, grid()));
}
BENCHMARK(BM_KernelPair)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_InvertH(benchmark::State& state) {
  const auto& g = *grid();
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-(g[j] - 2) * (g[j] - 2));
  const RadialProfile rhs = make_profile(grid(), "f", f, 1);
  for (auto _ : state) benchmark::DoNotOptimize(invert_H(basis().pair, rhs));
}
BENCHMARK(BM_InvertH)->Unit(benchmark::kMillisecond);

static void BM_Ladder(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_ladder(basis().pair, table()));
}
BENCHMARK(BM_Ladder)->Unit(benchmark::kMillisecond);

static void BM_GramMatrix(benchmark::State& state) {
  for (auto _ : state) {
    const OrthoBasis ob = build_phi_basis(basis().pair, basis().ladder, 40.0);
    benchmark::DoNotOptimize(orthogonality_matrix(ob, basis().ladder, basis().pair));
  }
}
BENCHMARK(BM_GramMatrix)->Unit(benchmark::kMillisecond);

static void BM_ProfileResidual(benchmark::State& state) {
  const ParamFamily b = special_solution(table(), 2, 50.0);
  for (auto _ : state) {
    ApproximateProfile P = assemble(basis(), table(), b, true);
    localize(P, basis(), table());
    residual(P, basis(), table());
    benchmark::DoNotOptimize(P.residual.norms.data());
  }
}
BENCHMARK(BM_ProfileResidual)->Unit(benchmark::kMillisecond);

static void BM_FlowIntegration(benchmark::State& state) {
  FlowState st;
  st.s = 10.0;
  st.b = special_solution(table(), 2, st.s);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(st, 100.0, table()));
}
BENCHMARK(BM_FlowIntegration)->Unit(benchmark::kMillisecond);

static void BM_ShootTrapped(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(shoot_trapped(table(), 2, 20.0, 2000.0));
}
BENCHMARK(BM_ShootTrapped)->Unit(benchmark::kMillisecond);

static void BM_PdeStep(benchmark::State& state) {
  SimConfig cfg;
  cfg.nodes = static_cast<std::size_t>(state.range(0));
  cfg.regrid = false;
  cfg.init.amplitude = 1.0;
  SimState st = initial_state(cfg, SimContext{&table(), nullptr});
  for (auto _ : state) advance(st, cfg, table());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.nodes));
}
BENCHMARK(BM_PdeStep)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_TypeOneRun(benchmark::State& state) {
  SimConfig cfg;
  cfg.nodes = 4000;
  cfg.record_every = 2;
  for (auto _ : state) {
    const SimState st = simulate(cfg, SimContext{&table(), nullptr});
    benchmark::DoNotOptimize(classify_blowup(st.trace, table()));
  }
}
BENCHMARK(BM_TypeOneRun)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_Hardy(benchmark::State& state) {
  HardyOptions o;
  o.samples = 200;
  for (auto _ : state) benchmark::DoNotOptimize(hardy_ratio(o));
}
BENCHMARK(BM_Hardy)->Unit(benchmark::kMillisecond);

static void BM_Coercivity(benchmark::State& state) {
  QuotientProblem p;
  p.nodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coercivity_spectrum(p, table(), basis()));
}
BENCHMARK(BM_Coercivity)->Arg(800)->Arg(1500)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_CacheRoundTrip(benchmark::State& state) {
  const auto path = std::filesystem::temp_directory_path() / "blowup_bench_cache.json";
  for (auto _ : state) {
    save_profile_cache(path, table(), basis().gs);
    benchmark::DoNotOptimize(load_profile_cache(path));
  }
  std::filesystem::remove(path);
}
BENCHMARK(BM_CacheRoundTrip)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
