#include <benchmark/benchmark.h>

#include <map>

#include "evg/centrality.hpp"
#include "evg/decomposition.hpp"
#include "evg/event_graph.hpp"
#include "evg/generators.hpp"
#include "evg/motifs.hpp"
#include "evg/percolation.hpp"

namespace {

using namespace evg;

const EventSequence& events(std::size_t m) {
    static std::map<std::size_t, EventSequence> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, gen_random_complete(1000, m, 1)).first;
    return it->second;
}

void BM_BuildBatchNodeSubsequent(benchmark::State& state) {
    const auto& seq = events(static_cast<std::size_t>(state.range(0)));
    const auto rule = JoiningRule::adjacency(kInfinity, Subsequent::per_node);
    for (auto _ : state) benchmark::DoNotOptimize(build(seq, rule).edge_count());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildBatchNodeSubsequent)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_BuildStreamingNodeSubsequent(benchmark::State& state) {
    const auto& seq = events(static_cast<std::size_t>(state.range(0)));
    const auto rule = JoiningRule::adjacency(kInfinity, Subsequent::per_node);
    for (auto _ : state) benchmark::DoNotOptimize(build_streaming(seq.events(), rule, true).edge_count());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildStreamingNodeSubsequent)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_BuildBatchAdjacencyWindow(benchmark::State& state) {
    const auto& seq = events(100'000);
    const auto rule = JoiningRule::adjacency(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build(seq, rule).edge_count());
}
BENCHMARK(BM_BuildBatchAdjacencyWindow)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
    const auto g = build(events(static_cast<std::size_t>(state.range(0))),
                         JoiningRule::adjacency(kInfinity, Subsequent::per_node));
    for (auto _ : state) benchmark::DoNotOptimize(scan(g).points.size());
}
BENCHMARK(BM_Scan)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_EventCommunicability(benchmark::State& state) {
    const auto g = build(events(static_cast<std::size_t>(state.range(0))), JoiningRule::walk_forming(50));
    for (auto _ : state) benchmark::DoNotOptimize(event_communicability(g, {0.5, 0.1}, true).back());
}
BENCHMARK(BM_EventCommunicability)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_IntervalCut(benchmark::State& state) {
    const auto g = build(events(100'000), JoiningRule::adjacency(kInfinity, Subsequent::per_node));
    const auto widths = halving_widths(10);
    for (auto _ : state) benchmark::DoNotOptimize(interval_cut(g, widths).points.size());
}
BENCHMARK(BM_IntervalCut)->Unit(benchmark::kMillisecond);

void BM_SequentialMotifs(benchmark::State& state) {
    const auto g = build(events(10'000), JoiningRule::adjacency(5, Subsequent::per_node));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_sequential(g, 5, 3).size());
}
BENCHMARK(BM_SequentialMotifs)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
