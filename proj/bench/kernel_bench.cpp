// Serial reference vs OpenMP kernels on the workloads the reporters generate.

#include <benchmark/benchmark.h>

#include <cmath>

#include "hardy/evaluator.hpp"
#include "hardy/identities.hpp"
#include "hardy/kernels.hpp"

using namespace hardy;
using kernels::Exec;

namespace {

CubatureRule cube_rule(std::size_t dim, int per_dim) {
  QuadratureSpec spec;
  spec.cubature_points_per_dim = per_dim;
  return CubatureRule(SupportBox{std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0), 0.0}, spec);
}

void payload(std::span<const double> x, std::span<double> out) {
  double s = 0.0;
  for (double v : x) s += v * v;
  out[0] = std::exp(-s);
  out[1] = std::cos(x[0]) * out[0];
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_IntegrateNodes(benchmark::State& state) {
  const CubatureRule rule = cube_rule(3, static_cast<int>(state.range(0)));
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::integrate_nodes(rule, 2, payload, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rule.size()));
  state.SetLabel(exec == Exec::Parallel ? "parallel" : "serial");
}

void BM_TabulateReduce(benchmark::State& state) {
  const CubatureRule rule = cube_rule(3, static_cast<int>(state.range(0)));
  const Exec exec = exec_of(state);
  auto square = [](std::span<const double> row, std::span<double> out) { out[0] = row[0] * row[0] + row[1]; };
  for (auto _ : state) {
    const auto table = kernels::tabulate(rule, 2, payload, exec);
    benchmark::DoNotOptimize(kernels::reduce(table, 1, square, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rule.size()));
  state.SetLabel(exec == Exec::Parallel ? "parallel" : "serial");
}

void BM_GeneralEvaluator(benchmark::State& state) {
  const QuasiNorm N = QuasiNorm::koranyi(make_group({1, 1, 2}));
  const TestFunction f = make_offcenter_bump({0.8, 0.1, 0.3}, 0.5);
  QuadratureSpec spec;
  spec.target_tol = 1e-4;
  spec.cubature_points_per_dim = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto ev = make_evaluator(f, N, spec, 1, EvalPath::General);
    benchmark::DoNotOptimize(hardy_l2_report(*ev));
  }
}

}  // namespace

BENCHMARK(BM_IntegrateNodes)->ArgsProduct({{32, 64, 96}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TabulateReduce)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeneralEvaluator)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
