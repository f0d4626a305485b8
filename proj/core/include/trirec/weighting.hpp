#pragma once

#include <vector>

#include "trirec/sparse.hpp"

namespace trirec {

/// Spread below which a user's ratings are treated as constant.
inline constexpr double kDegenerateSpread = 1e-9;

/// Per-user mean and population standard deviation of training ratings.
class UserRatingStats {
public:
    UserRatingStats() = default;
    explicit UserRatingStats(const RatingTable& train);

    std::size_t user_count() const noexcept { return mean_.size(); }
    std::size_t count(UserId u) const { return count_.at(u); }
    double mean(UserId u) const { return mean_.at(u); }
    double stddev(UserId u) const { return stddev_.at(u); }

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
    std::vector<std::size_t> count_;
};

/// z-score of rating r for user u: (r - mean_u) / stddev_u, or 1.0 when the
/// user's spread is below kDegenerateSpread (constant or single rating, and
/// every binary dataset). Throws InputError when u has no training ratings.
double zscore(const UserRatingStats& stats, UserId u, double r);

struct Bm25Params {
    double k1 = 2.0;
    double b = 0.75;

    /// Throws ConfigError unless k1 > 0 and 0 <= b <= 1.
    void validate() const;
};

/// Okapi BM25 score of a (user, tag) pair, treating each user's tag profile
/// as a document:
///
///   w(u,t) = ln(M / n(t)) * tf (k1 + 1) / (tf + k1 (1 - b + b |u| / avg))
///
/// M counts users with at least one tag assignment, n(t) the users who used
/// t, |u| is the user's total number of assignments and avg the mean |u|
/// over tagging users.
double bm25_term(double tf, double doc_freq, double tagging_users, double profile_size,
                 double avg_profile_size, const Bm25Params& params);

/// Corpus statistics of a TagTable, precomputed for repeated scoring.
class Bm25Scorer {
public:
    Bm25Scorer(const TagTable& tags, Bm25Params params);

    /// Throws InputError when u never used t.
    double score(UserId u, TagId t) const;

    std::size_t tagging_users() const noexcept { return tagging_users_; }
    double avg_profile_size() const noexcept { return avg_profile_; }
    std::uint64_t profile_size(UserId u) const { return profile_.at(u); }

private:
    const TagTable* tags_;
    Bm25Params params_;
    std::size_t tagging_users_ = 0;
    double avg_profile_ = 0.0;
    std::vector<std::uint64_t> profile_;
};

/// One-shot convenience over Bm25Scorer.
double bm25(const TagTable& tags, const Bm25Params& params, UserId u, TagId t);

}  // namespace trirec
