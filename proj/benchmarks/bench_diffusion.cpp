#include <benchmark/benchmark.h>

#include "trirec/diffusion.hpp"
#include "trirec/synthetic.hpp"
#include "trirec/weighting.hpp"

namespace {

trirec::Dataset dataset_of(std::size_t users)
{
    trirec::SyntheticSpec spec;
    spec.users = users;
    spec.items = users;
    return trirec::make_synthetic(spec).dataset;
}

}  // namespace

static void BuildGraph(benchmark::State& state)
{
    const auto d = dataset_of(static_cast<std::size_t>(state.range(0)));
    const trirec::UserRatingStats stats(d.ratings());
    for (auto _ : state) {
        auto g = trirec::build_graph(d.ratings(), d.tags(), stats, {});
        benchmark::DoNotOptimize(g);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildGraph)->RangeMultiplier(2)->Range(200, 3200)->Complexity();

static void TopKNeighbors(benchmark::State& state)
{
    const auto d = dataset_of(static_cast<std::size_t>(state.range(0)));
    const auto g = trirec::build_graph(d.ratings(), d.tags(), trirec::UserRatingStats(d.ratings()), {});
    for (auto _ : state) {
        auto n = trirec::top_k_neighbors(g, {});
        benchmark::DoNotOptimize(n);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(TopKNeighbors)->RangeMultiplier(2)->Range(200, 3200)->Complexity()->Unit(benchmark::kMillisecond);
