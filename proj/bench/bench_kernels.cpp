// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <map>

#include "sfo/clustering.hpp"
#include "sfo/kernels.hpp"
#include "sfo/metric.hpp"

namespace {

const sfo::Instance& instance(std::size_t n) {
  static std::map<std::size_t, sfo::Instance> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, sfo::generate_instance({sfo::GeneratorKind::euclidean, n, 42, 10000})).first;
  }
  return it->second;
}

template <sfo::Exec E>
void BM_Contract(benchmark::State& state) {
  const auto& inst = instance(static_cast<std::size_t>(state.range(0)));
  const sfo::InstanceView view(inst, inst.n);
  const auto m = static_cast<sfo::TerminalId>(view.terminal_count());
  for (auto _ : state) {
    sfo::ContractedDistances d(view, E);
    for (sfo::TerminalId k = 0; k + 1 < m; k += 8) d.contract(k, k + 1);
    benchmark::DoNotOptimize(d.raw().data());
  }
}

template <sfo::Exec E>
void BM_CrossEdges(benchmark::State& state) {
  const auto& inst = instance(static_cast<std::size_t>(state.range(0)));
  const sfo::InstanceView view(inst, inst.n);
  std::vector<std::size_t> group(view.terminal_count());
  for (std::size_t v = 0; v < group.size(); ++v) group[v] = v / 3;
  const std::size_t groups = (group.size() + 2) / 3;
  for (auto _ : state) {
    auto c = sfo::cross_edges(view, group, groups, E);
    benchmark::DoNotOptimize(c.weight.data());
  }
}

template <sfo::Exec E>
void BM_BuildHierarchy(benchmark::State& state) {
  const auto& inst = instance(static_cast<std::size_t>(state.range(0)));
  const sfo::InstanceView view(inst, inst.n);
  for (auto _ : state) {
    auto h = sfo::build_hierarchy(view, E);
    benchmark::DoNotOptimize(h.levels.data());
  }
}

}  // namespace

BENCHMARK(BM_Contract<sfo::Exec::serial>)->Arg(50)->Arg(200);
BENCHMARK(BM_Contract<sfo::Exec::parallel>)->Arg(50)->Arg(200);
BENCHMARK(BM_CrossEdges<sfo::Exec::serial>)->Arg(50)->Arg(200);
BENCHMARK(BM_CrossEdges<sfo::Exec::parallel>)->Arg(50)->Arg(200);
BENCHMARK(BM_BuildHierarchy<sfo::Exec::serial>)->Arg(50)->Arg(200);
BENCHMARK(BM_BuildHierarchy<sfo::Exec::parallel>)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
