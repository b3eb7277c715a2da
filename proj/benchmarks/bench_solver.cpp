#include <benchmark/benchmark.h>

#include <string>

#include "irid/gibbs.hpp"
#include "irid/graph_ops.hpp"
#include "irid/io.hpp"
#include "irid/oracle.hpp"
#include "irid/solver.hpp"

namespace {

irid::IridModel load(const char* name) { return irid::load_model(std::string(IRID_MODELS_DIR) + "/" + name); }

void BM_ExactSolve(benchmark::State& state) {
  const irid::IridModel m = load("wildcatter_irid.json");
  for (auto _ : state) benchmark::DoNotOptimize(irid::solve(m).expected_value);
}
BENCHMARK(BM_ExactSolve);

void BM_GibbsSolve(benchmark::State& state) {
  const irid::IridModel m = load("wildcatter_irid.json");
  irid::SolveOptions o;
  o.backend = irid::Backend::gibbs;
  for (auto _ : state) benchmark::DoNotOptimize(irid::solve(m, o).expected_value);
}
BENCHMARK(BM_GibbsSolve)->Unit(benchmark::kMillisecond);

// One chain at a stage-2 cell, by number of recorded sweeps.
void BM_GibbsCell(benchmark::State& state) {
  const irid::IridModel m = load("wildcatter_irid.json");
  const irid::StageContext ctx = irid::build_last_stage_context(m);
  irid::Assignment fixed = m.empty_assignment();
  for (const char* v : {"B", "T", "R", "D"}) fixed.set(m.id(v), 0);
  irid::SamplerConfig s;
  s.burn_in = 0;
  s.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(irid::estimate_expectation(ctx, fixed, ctx.value, s).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GibbsCell)->Arg(1000)->Arg(20000);

void BM_OracleSearch(benchmark::State& state) {
  const irid::IridModel m = load("wildcatter_irid.json");
  for (auto _ : state) benchmark::DoNotOptimize(irid::exhaustive_policy_search(m).expected_value);
}
BENCHMARK(BM_OracleSearch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
