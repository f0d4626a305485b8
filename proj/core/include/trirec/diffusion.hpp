#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "trirec/sparse.hpp"
#include "trirec/weighting.hpp"

namespace trirec {

/// Edge to (or from) a user in one bipartite layer.
struct WeightedEdge {
    std::uint32_t node;
    double weight;
};

/// Input triplet for building a layer: user -> node with a weight.
struct EdgeSpec {
    UserId user;
    std::uint32_t node;
    double weight;
};

/// One user-centred bipartite layer (user-item or user-tag) with weights,
/// stored in both directions. Degrees are edge-list lengths.
class BipartiteLayer {
public:
    BipartiteLayer() = default;
    BipartiteLayer(std::size_t user_count, std::size_t node_count, std::vector<EdgeSpec> edges);

    std::size_t user_count() const noexcept { return user_offsets_.size() - 1; }
    std::size_t node_count() const noexcept { return node_offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return by_user_.size(); }

    /// Sorted by node id.
    std::span<const WeightedEdge> user_edges(UserId u) const
    {
        return {by_user_.data() + user_offsets_[u], by_user_.data() + user_offsets_[u + 1]};
    }
    /// Sorted by user id; `node` holds the user.
    std::span<const WeightedEdge> node_edges(std::uint32_t n) const
    {
        return {by_node_.data() + node_offsets_[n], by_node_.data() + node_offsets_[n + 1]};
    }

    std::size_t user_degree(UserId u) const { return user_offsets_[u + 1] - user_offsets_[u]; }
    std::size_t node_degree(std::uint32_t n) const { return node_offsets_[n + 1] - node_offsets_[n]; }

private:
    std::vector<std::size_t> user_offsets_{0};
    std::vector<WeightedEdge> by_user_;
    std::vector<std::size_t> node_offsets_{0};
    std::vector<WeightedEdge> by_node_;
};

/// Users linked to items (weights: rating z-scores) and to tags (weights:
/// BM25 scores). Immutable after construction.
class WeightedTripartiteGraph {
public:
    WeightedTripartiteGraph() = default;
    WeightedTripartiteGraph(BipartiteLayer items, BipartiteLayer tags);

    const BipartiteLayer& items() const noexcept { return items_; }
    const BipartiteLayer& tags() const noexcept { return tags_; }
    std::size_t user_count() const noexcept { return items_.user_count(); }

private:
    BipartiteLayer items_;
    BipartiteLayer tags_;
};

/// Materialises the weighted graph: user-item weights are zscore() of the
/// training rating, user-tag weights are BM25 scores. `stats` must come from
/// `train`.
WeightedTripartiteGraph build_graph(const RatingTable& train, const TagTable& tags,
                                    const UserRatingStats& stats, const Bm25Params& bm25_params);

/// Same topology with every weight set to 1 (the unweighted graph).
WeightedTripartiteGraph build_unweighted_graph(const RatingTable& train, const TagTable& tags);

// Resource-allocation similarity of u towards v on one layer:
//
//   s(u,v) = 1/k(v) * sum over shared nodes n of  a(u,n) a(v,n) / k(n)
//
// The weighted forms multiply in both endpoint weights. Zero when k(v) = 0.
// Asymmetric in general because of the 1/k(v) factor.
double udiff_rating(const WeightedTripartiteGraph& g, UserId u, UserId v);
double udiff_tag(const WeightedTripartiteGraph& g, UserId u, UserId v);
double wudiff_rating(const WeightedTripartiteGraph& g, UserId u, UserId v);
double wudiff_tag(const WeightedTripartiteGraph& g, UserId u, UserId v);

/// lambda * wudiff_rating + (1 - lambda) * wudiff_tag. Throws ConfigError
/// unless 0 <= lambda <= 1.
double combined_similarity(const WeightedTripartiteGraph& g, UserId u, UserId v, double lambda);

struct Neighbor {
    UserId user;
    double sim;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborParams {
    double lambda = 0.5;
    std::size_t k = 20;
    /// Drop candidates whose combined similarity is negative.
    bool clamp_nonneg = false;

    void validate() const;
};

/// Per-user similar-user lists S(u), sorted by similarity descending then id.
class NeighborSets {
public:
    NeighborSets() = default;
    explicit NeighborSets(std::vector<std::vector<Neighbor>> lists) : lists_(std::move(lists)) {}

    /// A set where nobody has neighbours.
    static NeighborSets empty(std::size_t user_count)
    {
        return NeighborSets(std::vector<std::vector<Neighbor>>(user_count));
    }

    std::size_t user_count() const noexcept { return lists_.size(); }
    std::span<const Neighbor> of(UserId u) const
    {
        if (u >= lists_.size()) return {};
        return lists_[u];
    }
    std::size_t total() const;

    /// `u v sim` rows, 12 significant digits, ordered by (u, rank).
    void write_tsv(std::ostream& out) const;

    friend bool operator==(const NeighborSets&, const NeighborSets&) = default;

private:
    std::vector<std::vector<Neighbor>> lists_;
};

/// For each user u, the k users v != u with the largest combined similarity.
/// Only users sharing at least one item or tag with u are candidates (every
/// other pair scores exactly 0). Work is split over `jobs` threads; the
/// result does not depend on it.
NeighborSets top_k_neighbors(const WeightedTripartiteGraph& g, const NeighborParams& params,
                             unsigned jobs = 1);

}  // namespace trirec
