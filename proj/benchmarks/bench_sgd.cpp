#include <benchmark/benchmark.h>

#include "trirec/diffusion.hpp"
#include "trirec/mf.hpp"
#include "trirec/synthetic.hpp"
#include "trirec/weighting.hpp"

static void SgdEpoch(benchmark::State& state)
{
    trirec::SyntheticSpec spec;
    spec.users = spec.items = 1000;
    const auto d = trirec::make_synthetic(spec).dataset;
    trirec::TrainConfig cfg;
    cfg.factors = static_cast<std::size_t>(state.range(0));
    cfg.alpha = state.range(1) != 0 ? 0.01 : 0.0;
    const auto g = trirec::build_graph(d.ratings(), d.tags(), trirec::UserRatingStats(d.ratings()), {});
    const auto neighbors = cfg.alpha > 0.0 ? trirec::top_k_neighbors(g, {}) : trirec::NeighborSets::empty(d.user_count());
    auto model = trirec::initialize(d.ratings(), cfg);
    for (auto _ : state) {
        trirec::sgd_epoch(model, d.ratings(), neighbors, cfg);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.ratings().size()));
}
BENCHMARK(SgdEpoch)->ArgsProduct({{10, 20, 40}, {0, 1}})->ArgNames({"factors", "neighbors"});
