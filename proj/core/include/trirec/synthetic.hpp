#pragma once

#include <cstdint>
#include <vector>

#include "trirec/dataset.hpp"

namespace trirec {

/// Planted-factor generator: users belong to clusters sharing a latent
/// centre, ratings are r_max * logistic(p_u . q_i) plus Gaussian noise, and
/// tags are drawn from per-cluster tag pools.
struct SyntheticSpec {
    std::size_t users = 200;
    std::size_t items = 200;
    std::size_t rank = 4;
    double density = 0.05;  ///< fraction of (user, item) pairs observed
    double noise = 0.1;     ///< rating noise sd, in rating units
    double r_max = 5.0;

    std::size_t clusters = 8;
    double center_scale = 1.5;  ///< sd of cluster-centre coordinates
    double user_spread = 0.25;  ///< sd of a user's offset from its centre
    double item_scale = 1.0;    ///< sd of item-factor coordinates

    /// Clusters per tag pool: 1 gives each cluster its own vocabulary, 2
    /// makes pairs of clusters indistinguishable by tags alone.
    std::size_t clusters_per_pool = 2;
    std::size_t tags_per_pool = 12;
    std::size_t assignments_per_user = 12;
    double tag_noise = 0.2;  ///< probability an assignment is a random tag

    std::uint64_t seed = 1;
};

struct SyntheticData {
    Dataset dataset;
    std::vector<std::size_t> cluster;  ///< planted cluster of each user
};

SyntheticData make_synthetic(const SyntheticSpec& spec);

}  // namespace trirec
