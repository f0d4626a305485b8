#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trirec/diffusion.hpp"
#include "trirec/sparse.hpp"

namespace trirec {

/// Latent user matrix P and item matrix Q (row-major, `factors` columns),
/// plus what predict() needs to map inner products back to the rating scale.
class FactorModel {
public:
    FactorModel() = default;
    FactorModel(std::size_t user_count, std::size_t item_count, std::size_t factors, double r_max,
                double global_mean);

    std::size_t user_count() const noexcept { return user_known_.size(); }
    std::size_t item_count() const noexcept { return item_known_.size(); }
    std::size_t factors() const noexcept { return factors_; }
    double r_max() const noexcept { return r_max_; }
    double global_mean() const noexcept { return global_mean_; }

    std::span<double> user(UserId u) { return {p_.data() + u * factors_, factors_}; }
    std::span<const double> user(UserId u) const { return {p_.data() + u * factors_, factors_}; }
    std::span<double> item(ItemId i) { return {q_.data() + i * factors_, factors_}; }
    std::span<const double> item(ItemId i) const { return {q_.data() + i * factors_, factors_}; }

    std::vector<double>& user_matrix() noexcept { return p_; }
    const std::vector<double>& user_matrix() const noexcept { return p_; }
    std::vector<double>& item_matrix() noexcept { return q_; }
    const std::vector<double>& item_matrix() const noexcept { return q_; }

    /// Whether the user/item had training ratings; unknown ones predict the
    /// global mean.
    bool user_known(UserId u) const { return u < user_known_.size() && user_known_[u] != 0; }
    bool item_known(ItemId i) const { return i < item_known_.size() && item_known_[i] != 0; }
    void set_known(const RatingTable& train);
    void set_user_known(UserId u, bool known) { user_known_.at(u) = known ? 1 : 0; }
    void set_item_known(ItemId i, bool known) { item_known_.at(i) = known ? 1 : 0; }

    bool all_finite() const;

    friend bool operator==(const FactorModel&, const FactorModel&) = default;

private:
    std::size_t factors_ = 0;
    double r_max_ = 1.0;
    double global_mean_ = 0.0;
    std::vector<double> p_;
    std::vector<double> q_;
    std::vector<char> user_known_;
    std::vector<char> item_known_;
};

struct TrainConfig {
    std::size_t factors = 20;
    double alpha = 0.0;  ///< similar-user regularisation strength
    double lambda_u = 0.01;
    double lambda_i = 0.01;
    double gamma1 = 0.01;  ///< user-factor learning rate
    double gamma2 = 0.01;  ///< item-factor learning rate
    std::size_t max_epochs = 200;
    std::size_t patience = 1;
    std::uint64_t seed = 0;
    bool shuffle = false;
    /// Apply the neighbour pull once instead of twice per step.
    bool single_sided_reg = false;

    /// Throws ConfigError listing every violated constraint.
    void validate() const;
};

/// r / r_max; throws InputError unless 0 < r <= r_max.
double scale_rating(double r, double r_max);
double unscale_rating(double x, double r_max);

/// 1 / (1 + exp(-x)), evaluated without overflow for any finite x.
double logistic(double x);
/// exp(-x) / (1 + exp(-x))^2.
double logistic_deriv(double x);

/// r_max * logistic(p_u . q_i); the global training mean for ids outside
/// the model or without training ratings.
double predict(const FactorModel& m, UserId u, ItemId i);

/// Entries i.i.d. uniform in [0, 1/sqrt(f)], seeded from cfg.seed.
FactorModel initialize(const RatingTable& train, const TrainConfig& cfg);

/// Training loss on ratings scaled by train.r_max():
///
///   sum (r~ - g(p_u.q_i))^2 + alpha/2 sum_u sum_{v in S(u)} ws_uv |p_u - p_v|^2
///     + lambda_u/2 |P|^2 + lambda_i/2 |Q|^2
///
/// Throws DivergenceError when the value is not finite.
double objective(const FactorModel& m, const RatingTable& train, const NeighborSets& neighbors,
                 const TrainConfig& cfg);

/// Pieces of one SGD step for rating (u, i); each is the ascent-free update
/// direction, so p_u += gamma1 * (user_error + user_neighbor + user_decay).
struct StepDirection {
    std::vector<double> user_error;     ///< g'(p.q) e q_i
    std::vector<double> user_neighbor;  ///< -c alpha sum ws (p_u - p_v), c = 2 (or 1 single-sided)
    std::vector<double> user_decay;     ///< -lambda_u p_u
    std::vector<double> item_error;     ///< g'(p.q) e p_u
    std::vector<double> item_decay;     ///< -lambda_i q_i
};

StepDirection step_direction(const FactorModel& m, const NeighborSets& neighbors, const TrainConfig& cfg,
                             UserId u, ItemId i, double scaled_rating);

/// One pass over the training ratings, user-major (or a seeded shuffle),
/// applying each update immediately. Both factor updates are evaluated from
/// the pre-step p_u and q_i. Throws DivergenceError naming the epoch and step.
void sgd_epoch(FactorModel& m, const RatingTable& train, const NeighborSets& neighbors,
               const TrainConfig& cfg, std::size_t epoch = 1);

struct EpochRecord {
    std::size_t epoch;
    double train_loss;
    double train_rmse;
    double validation_rmse;  ///< NaN without a validation set
};

struct TrainResult {
    FactorModel model;
    std::vector<EpochRecord> history;  ///< row 0 is the initialisation
    std::size_t best_epoch = 0;
};

/// Runs sgd_epoch until validation RMSE has not improved for `patience`
/// consecutive epochs or max_epochs is reached, returning the snapshot with
/// the best validation RMSE. Without validation data it runs all epochs and
/// returns the last one. `neighbors` may be empty.
TrainResult train(const RatingTable& train_set, const RatingTable& validation, const NeighborSets& neighbors,
                  const TrainConfig& cfg);

/// Baseline: train() with alpha = 0 and no neighbours.
TrainResult train_rmf(const RatingTable& train_set, const RatingTable& validation, const TrainConfig& cfg);

/// RMSE of predict() against a rating table, on the raw scale.
double rating_rmse(const FactorModel& m, const RatingTable& ratings);

/// Text format: header lines, optional `config` echo, then P rows and Q rows
/// ("<known> v1 ... vf", 17 significant digits). Round-trips exactly.
void save_model(std::ostream& out, const FactorModel& m,
                const std::vector<std::pair<std::string, std::string>>& config_echo = {});
FactorModel load_model(std::istream& in);

}  // namespace trirec
