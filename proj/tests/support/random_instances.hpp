#pragma once

#include <vector>

#include "trirec/diffusion.hpp"
#include "trirec/mf.hpp"
#include "trirec/random.hpp"

namespace testing_support {

/// Random bipartite edge list; each (user, node) pair present with prob `p`.
inline std::vector<trirec::EdgeSpec> random_edges(trirec::Rng& rng, std::size_t users, std::size_t nodes, double p,
                                                  bool unit_weights)
{
    std::vector<trirec::EdgeSpec> edges;
    for (std::uint32_t u = 0; u < users; ++u) {
        for (std::uint32_t n = 0; n < nodes; ++n) {
            if (rng.uniform() >= p) continue;
            // Small integer-ish weights make exact ties (and negative values) common.
            const double w = unit_weights ? 1.0 : static_cast<double>(static_cast<int>(rng.below(7)) - 2) * 0.5;
            edges.push_back({u, n, w});
        }
    }
    return edges;
}

inline std::size_t between(trirec::Rng& rng, std::size_t lo, std::size_t hi)
{
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

/// Symmetric neighbour sets with symmetric weights: v in S(u) iff u in S(v),
/// ws_uv = ws_vu.
inline trirec::NeighborSets symmetric_neighbors(trirec::Rng& rng, std::size_t users, double p)
{
    std::vector<std::vector<trirec::Neighbor>> lists(users);
    for (std::uint32_t u = 0; u < users; ++u) {
        for (std::uint32_t v = u + 1; v < users; ++v) {
            if (rng.uniform() >= p) continue;
            const double w = rng.uniform() * 2.0 - 0.5;
            lists[u].push_back({v, w});
            lists[v].push_back({u, w});
        }
    }
    return trirec::NeighborSets(std::move(lists));
}

inline void randomize(trirec::FactorModel& m, trirec::Rng& rng, double scale = 1.0)
{
    for (auto& x : m.user_matrix()) x = scale * (2.0 * rng.uniform() - 1.0);
    for (auto& x : m.item_matrix()) x = scale * (2.0 * rng.uniform() - 1.0);
}

}  // namespace testing_support
