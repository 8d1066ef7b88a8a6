#include <benchmark/benchmark.h>

#include <map>

#include "frf/distortion.hpp"
#include "frf/fixtures.hpp"
#include "frf/laplacian.hpp"
#include "frf/pipeline.hpp"

using namespace frf;

namespace {

// Fixture meshes are cached per frequency; building them is not what we measure.
const AtriumFixture& fixture(int frequency) {
  static std::map<int, AtriumFixture> cache;
  auto it = cache.find(frequency);
  if (it == cache.end()) it = cache.emplace(frequency, sphere_with_holes(frequency, build_template("population"))).first;
  return it->second;
}

void BM_CotangentLaplacian(benchmark::State& state) {
  const TriMesh& m = fixture(static_cast<int>(state.range(0))).mesh;
  for (auto _ : state) benchmark::DoNotOptimize(cotangent_laplacian(m));
  state.counters["faces"] = m.face_count();
}

void BM_ConstrainedSolve(benchmark::State& state) {
  const AtriumFixture& fx = fixture(static_cast<int>(state.range(0)));
  const PipelineResult r = flatten_pipeline(fx.mesh, fx.seeds, build_template("population"));
  std::vector<int> rows;
  for (const Target& t : r.constraints.boundary) rows.push_back(t.vertex);
  const SparseLaplacian lmod = modify_laplacian(cotangent_laplacian(r.division.opened.mesh), rows);
  const SolveOptions options{1000.0, WeightMode::kBoundaryRows, static_cast<KktBackend>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(solve_constrained(lmod, r.constraints, options));
  state.counters["vertices"] = fx.mesh.vertex_count();
}

void BM_Pipeline(benchmark::State& state) {
  const AtriumFixture& fx = fixture(static_cast<int>(state.range(0)));
  const TemplateSpec spec = build_template("population");
  for (auto _ : state) benchmark::DoNotOptimize(flatten_pipeline(fx.mesh, fx.seeds, spec));
  state.counters["faces"] = fx.mesh.face_count();
}

void BM_Distortion(benchmark::State& state) {
  const AtriumFixture& fx = fixture(static_cast<int>(state.range(0)));
  const PipelineResult r = flatten_pipeline(fx.mesh, fx.seeds, build_template("population"));
  for (auto _ : state) benchmark::DoNotOptimize(distortion_report(fx.mesh, r.flat));
}

}  // namespace

BENCHMARK(BM_CotangentLaplacian)->Arg(24)->Arg(48)->Arg(84)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConstrainedSolve)
    ->ArgsProduct({{24, 48, 84}, {static_cast<int>(KktBackend::kCondensed), static_cast<int>(KktBackend::kSparseLu)}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pipeline)->Arg(24)->Arg(48)->Arg(84)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Distortion)->Arg(84)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
