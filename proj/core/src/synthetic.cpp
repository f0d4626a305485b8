#include "trirec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "trirec/error.hpp"
#include "trirec/random.hpp"

namespace trirec {

namespace {

double logistic_of(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

SyntheticData make_synthetic(const SyntheticSpec& spec)
{
    if (spec.users == 0 || spec.items == 0 || spec.rank == 0 || spec.clusters == 0 ||
        spec.clusters_per_pool == 0) {
        throw ConfigError("synthetic spec needs positive sizes");
    }
    if (!(spec.density > 0.0 && spec.density <= 1.0)) throw ConfigError("density must lie in (0, 1]");

    Rng rng(derive_seed(spec.seed, "synthetic"));
    SyntheticData out;

    std::vector<double> centers(spec.clusters * spec.rank);
    for (auto& x : centers) x = spec.center_scale * rng.normal();

    std::vector<double> p(spec.users * spec.rank);
    out.cluster.resize(spec.users);
    for (std::size_t u = 0; u < spec.users; ++u) {
        const auto c = u % spec.clusters;
        out.cluster[u] = c;
        for (std::size_t k = 0; k < spec.rank; ++k) {
            p[u * spec.rank + k] = centers[c * spec.rank + k] + spec.user_spread * rng.normal();
        }
    }
    std::vector<double> q(spec.items * spec.rank);
    for (auto& x : q) x = spec.item_scale * rng.normal() / std::sqrt(static_cast<double>(spec.rank));

    std::vector<std::uint32_t> pairs(spec.users * spec.items);
    for (std::uint32_t k = 0; k < pairs.size(); ++k) pairs[k] = k;
    rng.shuffle(pairs);
    const auto n_obs = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(pairs.size()))));
    pairs.resize(n_obs);
    std::sort(pairs.begin(), pairs.end());

    const double floor = 0.02 * spec.r_max;
    std::vector<Rating> ratings;
    ratings.reserve(n_obs);
    for (const auto k : pairs) {
        const auto u = static_cast<UserId>(k / spec.items);
        const auto i = static_cast<ItemId>(k % spec.items);
        double dot = 0.0;
        for (std::size_t c = 0; c < spec.rank; ++c) dot += p[u * spec.rank + c] * q[i * spec.rank + c];
        const double r = spec.r_max * logistic_of(dot) + spec.noise * rng.normal();
        ratings.push_back(Rating{u, i, std::clamp(r, floor, spec.r_max)});
    }

    const auto pools = (spec.clusters + spec.clusters_per_pool - 1) / spec.clusters_per_pool;
    const auto n_tags = pools * spec.tags_per_pool;
    std::map<std::pair<UserId, TagId>, std::uint32_t> counts;
    for (std::size_t u = 0; u < spec.users; ++u) {
        const auto pool = out.cluster[u] / spec.clusters_per_pool;
        for (std::size_t a = 0; a < spec.assignments_per_user; ++a) {
            TagId t;
            if (rng.uniform() < spec.tag_noise) {
                t = static_cast<TagId>(rng.below(n_tags));
            } else {
                t = static_cast<TagId>(pool * spec.tags_per_pool + rng.below(spec.tags_per_pool));
            }
            ++counts[{static_cast<UserId>(u), t}];
        }
    }
    std::vector<TagCount> tags;
    for (const auto& [key, c] : counts) tags.push_back(TagCount{key.first, key.second, c});

    out.dataset = Dataset(RatingTable(spec.users, spec.items, spec.r_max, std::move(ratings)),
                          TagTable(spec.users, n_tags, std::move(tags)));
    return out;
}

}  // namespace trirec
