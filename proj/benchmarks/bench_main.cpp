#include <benchmark/benchmark.h>

#include "pcmas/experiments.hpp"
#include "pcmas/population.hpp"
#include "pcmas/punishment.hpp"
#include "pcmas/teacher_mdp.hpp"

using namespace pcmas;

namespace {

ZeroSumGame random_game(Rng& rng, int rows, int cols) {
  std::vector<double> cells;
  for (int k = 0; k < rows * cols; ++k)
    cells.push_back(20.0 * rng.next_double() - 10.0);
  return {rows, cols, std::move(cells)};
}

void SolveZeroSum(benchmark::State& state) {
  int size = static_cast<int>(state.range(0));
  Rng rng(42);
  ZeroSumGame g = random_game(rng, size, size);
  for (auto _ : state) {
    auto sol = solve_zero_sum(g);
    benchmark::DoNotOptimize(sol.value);
  }
}
BENCHMARK(SolveZeroSum)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void PunishmentPlanPD(benchmark::State& state) {
  MatrixGame pd(2, 2, {{2, 2}, {-10, 10}, {10, -10}, {-5, -5}});
  for (auto _ : state) {
    auto plan = punishment_plan(pd);
    benchmark::DoNotOptimize(plan.v);
  }
}
BENCHMARK(PunishmentPlanPD);

void PopulationRun(benchmark::State& state) {
  PopulationConfig config;
  config.game = MatrixGame(2, 2, {{2, 2}, {-10, 10}, {10, -10}, {-5, -5}});
  config.law = {0, 0};
  config.n = 16;
  config.p = 9;
  config.c = 6;
  config.m = 1;
  config.iterations = state.range(0);
  config.seed = 7;
  for (auto _ : state) {
    auto stats = run_population(config);
    benchmark::DoNotOptimize(stats.deviations);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(PopulationRun)->Arg(10000)->Arg(100000);

void SessionBql(benchmark::State& state) {
  TeachingGame pd = TeachingGame::prisoners_dilemma();
  for (auto _ : state) {
    TftTeacher teacher;
    SessionLog log = run_session(BqlState{}, teacher, pd, state.range(0),
                                 TemperatureSchedule::decay(), 99);
    benchmark::DoNotOptimize(log.coop_rate());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SessionBql)->Arg(10000);

void SessionQl(benchmark::State& state) {
  TeachingGame pd = TeachingGame::prisoners_dilemma();
  for (auto _ : state) {
    TftTeacher teacher;
    SessionLog log = run_session(QlState(1), teacher, pd, state.range(0),
                                 TemperatureSchedule::fixed(3.0), 99);
    benchmark::DoNotOptimize(log.coop_rate());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SessionQl)->Arg(10000);

void TmdpBuild(benchmark::State& state) {
  TeachingGame pd = TeachingGame::prisoners_dilemma();
  int cells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    TmdpModel model = build_tmdp(pd, QGrid{-13.0, 13.0, cells}, 1.0, 0.1);
    benchmark::DoNotOptimize(model.reward.data());
  }
}
BENCHMARK(TmdpBuild)->Arg(100)->Arg(200);

void ValueIteration(benchmark::State& state) {
  TeachingGame pd = TeachingGame::prisoners_dilemma();
  int cells = static_cast<int>(state.range(0));
  TmdpModel model = build_tmdp(pd, QGrid{-13.0, 13.0, cells}, 1.0, 0.1);
  for (auto _ : state) {
    PolicySolution sol = value_iteration(model, 0.99, 1e-6);
    benchmark::DoNotOptimize(sol.residual);
  }
}
BENCHMARK(ValueIteration)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
