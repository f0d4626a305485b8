#include "trirec/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <thread>

#include "trirec/error.hpp"

namespace trirec {

BipartiteLayer::BipartiteLayer(std::size_t user_count, std::size_t node_count, std::vector<EdgeSpec> edges)
{
    for (const auto& e : edges) {
        if (e.user >= user_count || e.node >= node_count) throw InputError("edge endpoint out of range");
        if (!std::isfinite(e.weight)) throw InputError("edge weight is not finite");
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
        return a.user != b.user ? a.user < b.user : a.node < b.node;
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (edges[k].user == edges[k - 1].user && edges[k].node == edges[k - 1].node) {
            throw InputError("duplicate edge in bipartite layer");
        }
    }

    user_offsets_.assign(user_count + 1, 0);
    node_offsets_.assign(node_count + 1, 0);
    by_user_.reserve(edges.size());
    for (const auto& e : edges) {
        ++user_offsets_[e.user + 1];
        ++node_offsets_[e.node + 1];
        by_user_.push_back(WeightedEdge{e.node, e.weight});
    }
    std::partial_sum(user_offsets_.begin(), user_offsets_.end(), user_offsets_.begin());
    std::partial_sum(node_offsets_.begin(), node_offsets_.end(), node_offsets_.begin());

    // Users are visited in ascending order, so each node list ends up sorted.
    by_node_.resize(edges.size());
    std::vector<std::size_t> fill(node_offsets_.begin(), node_offsets_.end() - 1);
    for (const auto& e : edges) by_node_[fill[e.node]++] = WeightedEdge{e.user, e.weight};
}

WeightedTripartiteGraph::WeightedTripartiteGraph(BipartiteLayer items, BipartiteLayer tags)
    : items_(std::move(items)), tags_(std::move(tags))
{
    if (items_.user_count() != tags_.user_count()) {
        throw InputError("item and tag layers disagree on user count");
    }
}

WeightedTripartiteGraph build_graph(const RatingTable& train, const TagTable& tags,
                                    const UserRatingStats& stats, const Bm25Params& bm25_params)
{
    if (train.user_count() != tags.user_count() || stats.user_count() != train.user_count()) {
        throw InputError("rating table, tag table and stats disagree on user count");
    }
    std::vector<EdgeSpec> ui;
    ui.reserve(train.size());
    for (UserId u = 0; u < train.user_count(); ++u) {
        for (const auto& e : train.row(u)) ui.push_back(EdgeSpec{u, e.col, zscore(stats, u, e.value)});
    }
    const Bm25Scorer scorer(tags, bm25_params);
    std::vector<EdgeSpec> ut;
    ut.reserve(tags.size());
    for (UserId u = 0; u < tags.user_count(); ++u) {
        for (const auto& e : tags.row(u)) ut.push_back(EdgeSpec{u, e.col, scorer.score(u, e.col)});
    }
    return WeightedTripartiteGraph(BipartiteLayer(train.user_count(), train.item_count(), std::move(ui)),
                                   BipartiteLayer(tags.user_count(), tags.tag_count(), std::move(ut)));
}

WeightedTripartiteGraph build_unweighted_graph(const RatingTable& train, const TagTable& tags)
{
    std::vector<EdgeSpec> ui, ut;
    for (UserId u = 0; u < train.user_count(); ++u) {
        for (const auto& e : train.row(u)) ui.push_back(EdgeSpec{u, e.col, 1.0});
    }
    for (UserId u = 0; u < tags.user_count(); ++u) {
        for (const auto& e : tags.row(u)) ut.push_back(EdgeSpec{u, e.col, 1.0});
    }
    return WeightedTripartiteGraph(BipartiteLayer(train.user_count(), train.item_count(), std::move(ui)),
                                   BipartiteLayer(tags.user_count(), tags.tag_count(), std::move(ut)));
}

namespace {

void check_user(const WeightedTripartiteGraph& g, UserId u)
{
    if (u >= g.user_count()) throw InputError("user id " + std::to_string(u) + " out of range");
}

// Shared nodes are visited in ascending id order, the same order in which
// top_k_neighbors accumulates, so both paths produce identical bits.
template <bool Weighted>
double layer_similarity(const BipartiteLayer& layer, UserId u, UserId v)
{
    const auto kv = layer.user_degree(v);
    if (kv == 0) return 0.0;
    const auto a = layer.user_edges(u);
    const auto b = layer.user_edges(v);
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].node < b[j].node) {
            ++i;
        } else if (b[j].node < a[i].node) {
            ++j;
        } else {
            const double kn = static_cast<double>(layer.node_degree(a[i].node));
            sum += Weighted ? a[i].weight * b[j].weight / kn : 1.0 / kn;
            ++i;
            ++j;
        }
    }
    return sum / static_cast<double>(kv);
}

void check_lambda(double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
}

}  // namespace

double udiff_rating(const WeightedTripartiteGraph& g, UserId u, UserId v)
{
    check_user(g, u);
    check_user(g, v);
    return layer_similarity<false>(g.items(), u, v);
}

double udiff_tag(const WeightedTripartiteGraph& g, UserId u, UserId v)
{
    check_user(g, u);
    check_user(g, v);
    return layer_similarity<false>(g.tags(), u, v);
}

double wudiff_rating(const WeightedTripartiteGraph& g, UserId u, UserId v)
{
    check_user(g, u);
    check_user(g, v);
    return layer_similarity<true>(g.items(), u, v);
}

double wudiff_tag(const WeightedTripartiteGraph& g, UserId u, UserId v)
{
    check_user(g, u);
    check_user(g, v);
    return layer_similarity<true>(g.tags(), u, v);
}

double combined_similarity(const WeightedTripartiteGraph& g, UserId u, UserId v, double lambda)
{
    check_lambda(lambda);
    return lambda * wudiff_rating(g, u, v) + (1.0 - lambda) * wudiff_tag(g, u, v);
}

void NeighborParams::validate() const
{
    check_lambda(lambda);
    if (k < 1) throw ConfigError("k_neighbors must be at least 1");
}

std::size_t NeighborSets::total() const
{
    std::size_t n = 0;
    for (const auto& l : lists_) n += l.size();
    return n;
}

void NeighborSets::write_tsv(std::ostream& out) const
{
    char buf[32];
    for (UserId u = 0; u < lists_.size(); ++u) {
        for (const auto& n : lists_[u]) {
            std::snprintf(buf, sizeof buf, "%.12g", n.sim);
            out << u << '\t' << n.user << '\t' << buf << '\n';
        }
    }
}

namespace {

/// Scratch space reused across users by one worker.
class NeighborScanner {
public:
    NeighborScanner(const WeightedTripartiteGraph& g, const NeighborParams& params)
        : g_(g), params_(params), rating_acc_(g.user_count(), 0.0), tag_acc_(g.user_count(), 0.0),
          touched_flag_(g.user_count(), 0)
    {}

    std::vector<Neighbor> scan(UserId u)
    {
        spread(g_.items(), u, rating_acc_);
        spread(g_.tags(), u, tag_acc_);

        std::vector<Neighbor> cands;
        cands.reserve(touched_.size());
        for (const auto v : touched_) {
            if (v != u) {
                const double ws = finish(g_.items(), v, rating_acc_[v]);
                const double wst = finish(g_.tags(), v, tag_acc_[v]);
                const double sim = params_.lambda * ws + (1.0 - params_.lambda) * wst;
                if (!(params_.clamp_nonneg && sim < 0.0)) cands.push_back(Neighbor{v, sim});
            }
            rating_acc_[v] = 0.0;
            tag_acc_[v] = 0.0;
            touched_flag_[v] = 0;
        }
        touched_.clear();

        const auto by_rank = [](const Neighbor& a, const Neighbor& b) {
            return a.sim != b.sim ? a.sim > b.sim : a.user < b.user;
        };
        const auto keep = std::min(params_.k, cands.size());
        std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(), by_rank);
        cands.resize(keep);
        return cands;
    }

private:
    void spread(const BipartiteLayer& layer, UserId u, std::vector<double>& acc)
    {
        for (const auto& e : layer.user_edges(u)) {
            const double kn = static_cast<double>(layer.node_degree(e.node));
            for (const auto& back : layer.node_edges(e.node)) {
                acc[back.node] += e.weight * back.weight / kn;
                if (!touched_flag_[back.node]) {
                    touched_flag_[back.node] = 1;
                    touched_.push_back(back.node);
                }
            }
        }
    }

    static double finish(const BipartiteLayer& layer, UserId v, double acc)
    {
        const auto kv = layer.user_degree(v);
        return kv == 0 ? 0.0 : acc / static_cast<double>(kv);
    }

    const WeightedTripartiteGraph& g_;
    const NeighborParams& params_;
    std::vector<double> rating_acc_;
    std::vector<double> tag_acc_;
    std::vector<char> touched_flag_;
    std::vector<UserId> touched_;
};

}  // namespace

NeighborSets top_k_neighbors(const WeightedTripartiteGraph& g, const NeighborParams& params, unsigned jobs)
{
    params.validate();
    const auto n = g.user_count();
    std::vector<std::vector<Neighbor>> lists(n);
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));

    const auto work = [&](std::size_t begin, std::size_t end) {
        NeighborScanner scanner(g, params);
        for (auto u = begin; u < end; ++u) lists[u] = scanner.scan(static_cast<UserId>(u));
    };
    if (jobs == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> threads;
        const auto chunk = (n + jobs - 1) / jobs;
        for (unsigned j = 0; j < jobs; ++j) {
            const auto begin = std::min(n, j * chunk);
            const auto end = std::min(n, begin + chunk);
            threads.emplace_back(work, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    return NeighborSets(std::move(lists));
}

}  // namespace trirec
