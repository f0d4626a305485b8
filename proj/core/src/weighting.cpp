#include "trirec/weighting.hpp"

#include <cmath>
#include <string>

#include "trirec/error.hpp"

namespace trirec {

UserRatingStats::UserRatingStats(const RatingTable& train)
    : mean_(train.user_count(), 0.0), stddev_(train.user_count(), 0.0), count_(train.user_count(), 0)
{
    for (UserId u = 0; u < train.user_count(); ++u) {
        const auto row = train.row(u);
        count_[u] = row.size();
        if (row.empty()) continue;
        double sum = 0.0;
        for (const auto& e : row) sum += e.value;
        const double mean = sum / static_cast<double>(row.size());
        double ss = 0.0;
        for (const auto& e : row) ss += (e.value - mean) * (e.value - mean);
        mean_[u] = mean;
        stddev_[u] = std::sqrt(ss / static_cast<double>(row.size()));
    }
}

double zscore(const UserRatingStats& stats, UserId u, double r)
{
    if (u >= stats.user_count() || stats.count(u) == 0) {
        throw InputError("user " + std::to_string(u) + " has no training ratings");
    }
    const double sd = stats.stddev(u);
    if (sd < kDegenerateSpread) return 1.0;
    return (r - stats.mean(u)) / sd;
}

void Bm25Params::validate() const
{
    if (!(k1 > 0.0)) throw ConfigError("bm25 k1 must be positive");
    if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("bm25 b must lie in [0, 1]");
}

double bm25_term(double tf, double doc_freq, double tagging_users, double profile_size,
                 double avg_profile_size, const Bm25Params& params)
{
    const double idf = std::log(tagging_users / doc_freq);
    const double norm = 1.0 - params.b + params.b * profile_size / avg_profile_size;
    return idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
}

Bm25Scorer::Bm25Scorer(const TagTable& tags, Bm25Params params)
    : tags_(&tags), params_(params), profile_(tags.user_count(), 0)
{
    params_.validate();
    std::uint64_t total = 0;
    for (UserId u = 0; u < tags.user_count(); ++u) {
        for (const auto& e : tags.row(u)) profile_[u] += e.value;
        if (profile_[u] > 0) ++tagging_users_;
        total += profile_[u];
    }
    if (tagging_users_ > 0) avg_profile_ = static_cast<double>(total) / static_cast<double>(tagging_users_);
}

double Bm25Scorer::score(UserId u, TagId t) const
{
    const auto* tf = tags_->find(u, t);
    if (tf == nullptr) {
        throw InputError("user " + std::to_string(u) + " has no assignment of tag " + std::to_string(t));
    }
    return bm25_term(static_cast<double>(*tf), static_cast<double>(tags_->tag_degree(t)),
                     static_cast<double>(tagging_users_), static_cast<double>(profile_[u]), avg_profile_,
                     params_);
}

double bm25(const TagTable& tags, const Bm25Params& params, UserId u, TagId t)
{
    return Bm25Scorer(tags, params).score(u, t);
}

}  // namespace trirec
