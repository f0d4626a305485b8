#include "trirec/mf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "trirec/error.hpp"
#include "trirec/random.hpp"

namespace trirec {

FactorModel::FactorModel(std::size_t user_count, std::size_t item_count, std::size_t factors, double r_max,
                         double global_mean)
    : factors_(factors),
      r_max_(r_max),
      global_mean_(global_mean),
      p_(user_count * factors, 0.0),
      q_(item_count * factors, 0.0),
      user_known_(user_count, 0),
      item_known_(item_count, 0)
{}

void FactorModel::set_known(const RatingTable& train)
{
    std::fill(user_known_.begin(), user_known_.end(), 0);
    std::fill(item_known_.begin(), item_known_.end(), 0);
    for (UserId u = 0; u < train.user_count() && u < user_known_.size(); ++u) {
        if (train.user_degree(u) > 0) user_known_[u] = 1;
    }
    for (ItemId i = 0; i < train.item_count() && i < item_known_.size(); ++i) {
        if (train.item_degree(i) > 0) item_known_[i] = 1;
    }
}

bool FactorModel::all_finite() const
{
    const auto finite = [](double x) { return std::isfinite(x); };
    return std::all_of(p_.begin(), p_.end(), finite) && std::all_of(q_.begin(), q_.end(), finite);
}

void TrainConfig::validate() const
{
    std::vector<std::string> problems;
    if (factors < 1) problems.emplace_back("factors must be >= 1");
    if (!(alpha >= 0.0)) problems.emplace_back("alpha must be >= 0");
    if (!(lambda_u >= 0.0)) problems.emplace_back("lambda_u must be >= 0");
    if (!(lambda_i >= 0.0)) problems.emplace_back("lambda_i must be >= 0");
    if (!(gamma1 > 0.0)) problems.emplace_back("gamma1 must be > 0");
    if (!(gamma2 > 0.0)) problems.emplace_back("gamma2 must be > 0");
    if (patience < 1) problems.emplace_back("patience must be >= 1");
    if (problems.empty()) return;
    std::string msg = "invalid training config:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw ConfigError(msg);
}

double scale_rating(double r, double r_max)
{
    if (!(r_max > 0.0) || !(r > 0.0 && r <= r_max)) {
        throw InputError("rating " + std::to_string(r) + " outside (0, " + std::to_string(r_max) + "]");
    }
    return r / r_max;
}

double unscale_rating(double x, double r_max)
{
    return x * r_max;
}

double logistic(double x)
{
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logistic_deriv(double x)
{
    // Even function; exp(-|x|) never overflows.
    const double e = std::exp(-std::abs(x));
    return e / ((1.0 + e) * (1.0 + e));
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

double neighbor_coefficient(const TrainConfig& cfg)
{
    // The user update carries -alpha sum ws (p_u - p_v) and +alpha sum ws (p_v - p_u),
    // i.e. the same pull twice.
    return cfg.single_sided_reg ? cfg.alpha : 2.0 * cfg.alpha;
}

/// sum_{v in S(u)} ws_uv (p_u - p_v), written into `out`.
void neighbor_pull(const FactorModel& m, const NeighborSets& neighbors, UserId u, std::span<double> out)
{
    std::fill(out.begin(), out.end(), 0.0);
    const auto pu = m.user(u);
    for (const auto& n : neighbors.of(u)) {
        const auto pv = m.user(n.user);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += n.sim * (pu[k] - pv[k]);
    }
}

void check_neighbors(const NeighborSets& neighbors, const RatingTable& train)
{
    if (neighbors.user_count() != 0 && neighbors.user_count() != train.user_count()) {
        throw InputError("neighbor sets do not match the training user count");
    }
}

}  // namespace

double predict(const FactorModel& m, UserId u, ItemId i)
{
    if (!m.user_known(u) || !m.item_known(i)) return m.global_mean();
    return m.r_max() * logistic(dot(m.user(u), m.item(i)));
}

FactorModel initialize(const RatingTable& train, const TrainConfig& cfg)
{
    FactorModel m(train.user_count(), train.item_count(), cfg.factors, train.r_max(), train.mean());
    m.set_known(train);
    Rng rng(derive_seed(cfg.seed, "init"));
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.factors));
    for (auto& x : m.user_matrix()) x = rng.uniform() * scale;
    for (auto& x : m.item_matrix()) x = rng.uniform() * scale;
    return m;
}

double objective(const FactorModel& m, const RatingTable& train, const NeighborSets& neighbors,
                 const TrainConfig& cfg)
{
    check_neighbors(neighbors, train);
    double err = 0.0;
    for (UserId u = 0; u < train.user_count(); ++u) {
        for (const auto& e : train.row(u)) {
            const double d = e.value / train.r_max() - logistic(dot(m.user(u), m.item(e.col)));
            err += d * d;
        }
    }
    double pull = 0.0;
    for (UserId u = 0; u < neighbors.user_count(); ++u) {
        for (const auto& n : neighbors.of(u)) pull += n.sim * squared_distance(m.user(u), m.user(n.user));
    }
    const auto sq = [](const std::vector<double>& v) { return std::inner_product(v.begin(), v.end(), v.begin(), 0.0); };
    const double loss = err + 0.5 * cfg.alpha * pull + 0.5 * cfg.lambda_u * sq(m.user_matrix()) +
                        0.5 * cfg.lambda_i * sq(m.item_matrix());
    if (!std::isfinite(loss)) throw DivergenceError("objective is not finite");
    return loss;
}

StepDirection step_direction(const FactorModel& m, const NeighborSets& neighbors, const TrainConfig& cfg,
                             UserId u, ItemId i, double scaled_rating)
{
    const auto f = m.factors();
    const auto pu = m.user(u);
    const auto qi = m.item(i);
    const double x = dot(pu, qi);
    const double ge = logistic_deriv(x) * (scaled_rating - logistic(x));
    const double coef = neighbor_coefficient(cfg);

    StepDirection d;
    d.user_neighbor.assign(f, 0.0);
    neighbor_pull(m, neighbors, u, d.user_neighbor);
    d.user_error.resize(f);
    d.user_decay.resize(f);
    d.item_error.resize(f);
    d.item_decay.resize(f);
    for (std::size_t k = 0; k < f; ++k) {
        d.user_error[k] = ge * qi[k];
        d.user_neighbor[k] *= -coef;
        d.user_decay[k] = -cfg.lambda_u * pu[k];
        d.item_error[k] = ge * pu[k];
        d.item_decay[k] = -cfg.lambda_i * qi[k];
    }
    return d;
}

void sgd_epoch(FactorModel& m, const RatingTable& train, const NeighborSets& neighbors, const TrainConfig& cfg,
               std::size_t epoch)
{
    check_neighbors(neighbors, train);
    const auto f = m.factors();
    const double coef = neighbor_coefficient(cfg);
    const bool use_neighbors = cfg.alpha != 0.0 && neighbors.user_count() != 0;
    const double r_max = train.r_max();
    std::vector<double> pull(f, 0.0);

    std::vector<std::uint32_t> order(train.size());
    std::iota(order.begin(), order.end(), 0u);
    if (cfg.shuffle) {
        Rng rng(derive_seed(cfg.seed, "shuffle", epoch));
        rng.shuffle(order);
    }
    // Entry k belongs to the user whose row range contains it.
    std::vector<UserId> owner(train.size());
    for (UserId u = 0, k = 0; u < train.user_count(); ++u) {
        for (std::size_t n = train.user_degree(u); n > 0; --n) owner[k++] = u;
    }

    const auto entries = train.entries();
    for (std::size_t step = 0; step < order.size(); ++step) {
        const auto k = order[step];
        const UserId u = owner[k];
        const ItemId i = entries[k].col;
        auto pu = m.user(u);
        auto qi = m.item(i);
        const double x = dot(pu, qi);
        const double ge = logistic_deriv(x) * (entries[k].value / r_max - logistic(x));
        if (use_neighbors) neighbor_pull(m, neighbors, u, pull);
        bool finite = true;
        for (std::size_t c = 0; c < f; ++c) {
            const double p = pu[c];
            const double q = qi[c];
            const double nb = use_neighbors ? coef * pull[c] : 0.0;
            pu[c] = p + cfg.gamma1 * (ge * q - nb - cfg.lambda_u * p);
            qi[c] = q + cfg.gamma2 * (ge * p - cfg.lambda_i * q);
            finite = finite && std::isfinite(pu[c]) && std::isfinite(qi[c]);
        }
        if (!finite) {
            throw DivergenceError("non-finite parameters at epoch " + std::to_string(epoch) + ", step " +
                                  std::to_string(step) + " (user " + std::to_string(u) + ", item " +
                                  std::to_string(i) + ")");
        }
    }
}

double rating_rmse(const FactorModel& m, const RatingTable& ratings)
{
    if (ratings.empty()) return std::numeric_limits<double>::quiet_NaN();
    double ss = 0.0;
    for (UserId u = 0; u < ratings.user_count(); ++u) {
        for (const auto& e : ratings.row(u)) {
            const double d = e.value - predict(m, u, e.col);
            ss += d * d;
        }
    }
    return std::sqrt(ss / static_cast<double>(ratings.size()));
}

TrainResult train(const RatingTable& train_set, const RatingTable& validation, const NeighborSets& neighbors,
                  const TrainConfig& cfg)
{
    cfg.validate();
    check_neighbors(neighbors, train_set);
    if (train_set.empty()) throw InputError("training set is empty");

    TrainResult result;
    FactorModel model = initialize(train_set, cfg);
    const bool early_stop = !validation.empty();
    const auto record = [&](std::size_t epoch) {
        result.history.push_back(EpochRecord{epoch, objective(model, train_set, neighbors, cfg),
                                             rating_rmse(model, train_set), rating_rmse(model, validation)});
    };
    record(0);
    result.model = model;

    double best = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        sgd_epoch(model, train_set, neighbors, cfg, epoch);
        record(epoch);
        if (!early_stop) {
            result.model = model;
            result.best_epoch = epoch;
            continue;
        }
        const double v = result.history.back().validation_rmse;
        if (v < best) {
            best = v;
            stale = 0;
            result.model = model;
            result.best_epoch = epoch;
        } else if (++stale >= cfg.patience) {
            break;
        }
    }
    return result;
}

TrainResult train_rmf(const RatingTable& train_set, const RatingTable& validation, const TrainConfig& cfg)
{
    TrainConfig rmf = cfg;
    rmf.alpha = 0.0;
    return train(train_set, validation, NeighborSets::empty(train_set.user_count()), rmf);
}

}  // namespace trirec
