#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles/finite_difference.hpp"
#include "support/random_instances.hpp"
#include "trirec/error.hpp"
#include "trirec/ingest.hpp"
#include "trirec/mf.hpp"
#include "trirec/synthetic.hpp"

using namespace trirec;
using testing_support::between;

namespace {

RatingTable random_ratings(Rng& rng, std::size_t users, std::size_t items, double p, double r_max)
{
    std::vector<Rating> out;
    for (UserId u = 0; u < users; ++u) {
        for (ItemId i = 0; i < items; ++i) {
            if (rng.uniform() < p) out.push_back({u, i, r_max * (0.05 + 0.95 * rng.uniform())});
        }
    }
    return RatingTable(users, items, r_max, std::move(out));
}

std::vector<double> sum3(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c)
{
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k] + c[k];
    return out;
}

}  // namespace

TEST(Logistic, StableAtExtremes)
{
    EXPECT_DOUBLE_EQ(logistic(0.0), 0.5);
    EXPECT_DOUBLE_EQ(logistic(-800.0), 0.0);
    EXPECT_DOUBLE_EQ(logistic(800.0), 1.0);
    EXPECT_DOUBLE_EQ(logistic_deriv(0.0), 0.25);
    EXPECT_EQ(logistic_deriv(800.0), 0.0);
    EXPECT_EQ(logistic_deriv(-800.0), 0.0);
    for (const double x : {-30.0, -3.0, -0.2, 0.7, 5.0, 25.0}) {
        EXPECT_NEAR(logistic_deriv(x), logistic(x) * (1.0 - logistic(x)), 1e-15);
        EXPECT_NEAR(logistic(x) + logistic(-x), 1.0, 1e-15);
    }
}

TEST(Scaling, RoundTripAndBounds)
{
    EXPECT_DOUBLE_EQ(scale_rating(4.0, 5.0), 0.8);
    EXPECT_DOUBLE_EQ(unscale_rating(0.8, 5.0), 4.0);
    EXPECT_THROW(scale_rating(0.0, 5.0), InputError);
    EXPECT_THROW(scale_rating(5.5, 5.0), InputError);
}

TEST(Predict, HandComputedSingleFactor)
{
    FactorModel m(1, 1, 1, 5.0, 3.0);
    m.user(0)[0] = 0.4;
    m.item(0)[0] = 0.6;
    m.set_user_known(0, true);
    m.set_item_known(0, true);
    EXPECT_NEAR(predict(m, 0, 0), 2.7985682463359645, 1e-12);
}

TEST(Predict, UnknownIdsFallBackToGlobalMean)
{
    FactorModel m(2, 2, 1, 5.0, 3.25);
    m.set_user_known(0, true);
    m.set_item_known(0, true);
    EXPECT_DOUBLE_EQ(predict(m, 1, 0), 3.25);
    EXPECT_DOUBLE_EQ(predict(m, 0, 1), 3.25);
    EXPECT_DOUBLE_EQ(predict(m, 7, 0), 3.25);
    EXPECT_DOUBLE_EQ(predict(m, 0, 0), 2.5);  // zero factors -> r_max * 1/2
}

TEST(Initialize, UniformInRangeAndSeeded)
{
    Rng rng(1);
    const auto train = random_ratings(rng, 30, 20, 0.3, 5.0);
    TrainConfig cfg;
    cfg.factors = 9;
    cfg.seed = 4;
    const auto a = initialize(train, cfg);
    const auto b = initialize(train, cfg);
    EXPECT_TRUE(a == b);
    for (const double x : a.user_matrix()) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0 / 3.0);
    }
    EXPECT_DOUBLE_EQ(a.global_mean(), train.mean());
    cfg.seed = 5;
    EXPECT_FALSE(a == initialize(train, cfg));
}

TEST(Sgd, SingleStepHandComputed)
{
    const RatingTable train(1, 1, 5.0, {{0, 0, 4.0}});
    FactorModel m(1, 1, 1, 5.0, 4.0);
    m.user(0)[0] = 0.3;
    m.item(0)[0] = 0.7;
    m.set_known(train);
    TrainConfig cfg;
    cfg.factors = 1;
    cfg.gamma1 = cfg.gamma2 = 0.1;
    cfg.lambda_u = cfg.lambda_i = 0.01;
    sgd_epoch(m, train, NeighborSets::empty(1), cfg);
    EXPECT_NEAR(m.user(0)[0], 0.3039871715576874, 1e-12);
    EXPECT_NEAR(m.item(0)[0], 0.7011373592390089, 1e-12);
}

TEST(Sgd, NeighborPullTowardsSimilarUser)
{
    // With a zero error and no decay, p_u moves by -gamma * 2 alpha ws (p_u - p_v).
    const RatingTable train(2, 1, 1.0, {{0, 0, 0.5}});
    FactorModel m(2, 1, 1, 1.0, 0.5);
    m.user(0)[0] = 0.0;  // g(0) = 0.5 -> zero error
    m.user(1)[0] = 1.0;
    m.set_known(train);
    TrainConfig cfg;
    cfg.factors = 1;
    cfg.alpha = 0.5;
    cfg.gamma1 = 0.1;
    cfg.lambda_u = cfg.lambda_i = 0.0;
    const NeighborSets n({{{1, 0.8}}, {}});
    auto two = m;
    sgd_epoch(two, train, n, cfg);
    EXPECT_NEAR(two.user(0)[0], 0.1 * 2 * 0.5 * 0.8, 1e-15);
    cfg.single_sided_reg = true;
    auto one = m;
    sgd_epoch(one, train, n, cfg);
    EXPECT_NEAR(one.user(0)[0], 0.1 * 0.5 * 0.8, 1e-15);
}

TEST(Sgd, AlphaZeroIgnoresNeighbors)
{
    Rng rng(12);
    const auto train = random_ratings(rng, 20, 15, 0.3, 5.0);
    TrainConfig cfg;
    cfg.factors = 4;
    cfg.gamma1 = cfg.gamma2 = 0.3;
    auto a = initialize(train, cfg);
    auto b = a;
    sgd_epoch(a, train, NeighborSets::empty(20), cfg);
    sgd_epoch(b, train, testing_support::symmetric_neighbors(rng, 20, 0.3), cfg);
    EXPECT_TRUE(a == b);
}

TEST(Gradient, StepDirectionMatchesFiniteDifferences)
{
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const auto users = between(rng, 2, 8);
        const auto items = between(rng, 1, 8);
        const auto train = random_ratings(rng, users, items, 0.5, 5.0);
        if (train.empty()) continue;
        TrainConfig cfg;
        cfg.factors = between(rng, 1, 5);
        cfg.alpha = rng.uniform();
        cfg.lambda_u = rng.uniform() * 0.1;
        cfg.lambda_i = rng.uniform() * 0.1;
        const auto neighbors = testing_support::symmetric_neighbors(rng, users, 0.5);
        FactorModel m(users, items, cfg.factors, 5.0, train.mean());
        m.set_known(train);
        testing_support::randomize(m, rng);
        const auto f = [&] { return objective(m, train, neighbors, cfg); };

        for (UserId u = 0; u < users; ++u) {
            const auto row = train.row(u);
            if (row.empty()) continue;
            // -dL/dp_u = 2 * sum_i user_error + user_neighbor + user_decay
            std::vector<double> expected(cfg.factors, 0.0);
            for (const auto& e : row) {
                const auto d = step_direction(m, neighbors, cfg, u, e.col, e.value / 5.0);
                for (std::size_t k = 0; k < cfg.factors; ++k) expected[k] -= 2.0 * d.user_error[k];
                if (&e == &row.front()) {
                    for (std::size_t k = 0; k < cfg.factors; ++k) expected[k] -= d.user_neighbor[k] + d.user_decay[k];
                }
            }
            const auto numeric = oracle::central_gradient(f, m.user(u));
            EXPECT_LT(oracle::relative_error(numeric, expected), 1e-5) << "trial " << trial << " user " << u;
        }
        for (ItemId i = 0; i < items; ++i) {
            const auto col = train.column(i);
            if (col.empty()) continue;
            std::vector<double> expected(cfg.factors, 0.0);
            for (const auto& c : col) {
                const auto d = step_direction(m, neighbors, cfg, c.user, i, train.entries()[c.entry].value / 5.0);
                for (std::size_t k = 0; k < cfg.factors; ++k) expected[k] -= 2.0 * d.item_error[k];
                if (&c == &col.front()) {
                    for (std::size_t k = 0; k < cfg.factors; ++k) expected[k] -= d.item_decay[k];
                }
            }
            const auto numeric = oracle::central_gradient(f, m.item(i));
            EXPECT_LT(oracle::relative_error(numeric, expected), 1e-5) << "trial " << trial << " item " << i;
        }
    }
}

TEST(Gradient, StepUsesAllPieces)
{
    Rng rng(3);
    const auto train = random_ratings(rng, 4, 4, 1.0, 5.0);
    TrainConfig cfg;
    cfg.factors = 3;
    cfg.alpha = 0.2;
    cfg.gamma1 = 0.05;
    cfg.gamma2 = 0.07;
    const NeighborSets n({{{1, 0.5}, {2, 0.1}}, {{0, 0.5}}, {{0, 0.1}}, {}});
    FactorModel m(4, 4, 3, 5.0, train.mean());
    m.set_known(train);
    testing_support::randomize(m, rng);
    const RatingTable one(4, 4, 5.0, {{0, 2, *train.find(0, 2)}});
    const auto d = step_direction(m, n, cfg, 0, 2, *train.find(0, 2) / 5.0);
    const auto up = sum3(d.user_error, d.user_neighbor, d.user_decay);
    std::vector<double> p(m.user(0).begin(), m.user(0).end());
    std::vector<double> q(m.item(2).begin(), m.item(2).end());
    sgd_epoch(m, one, n, cfg);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(m.user(0)[k], p[k] + cfg.gamma1 * up[k], 1e-15);
        EXPECT_NEAR(m.item(2)[k], q[k] + cfg.gamma2 * (d.item_error[k] + d.item_decay[k]), 1e-15);
    }
}

TEST(Objective, HandComputedSingleRating)
{
    const RatingTable train(2, 1, 5.0, {{0, 0, 4.0}});
    FactorModel m(2, 1, 1, 5.0, 4.0);
    m.user(0)[0] = 0.3;
    m.user(1)[0] = -0.2;
    m.item(0)[0] = 0.7;
    TrainConfig cfg;
    cfg.factors = 1;
    cfg.alpha = 0.4;
    cfg.lambda_u = 0.1;
    cfg.lambda_i = 0.2;
    const NeighborSets n({{{1, 0.5}}, {}});
    const double e = 0.8 - 1.0 / (1.0 + std::exp(-0.21));
    const double expected = e * e + 0.2 * 0.5 * 0.25 + 0.05 * (0.09 + 0.04) + 0.1 * 0.49;
    EXPECT_NEAR(objective(m, train, n, cfg), expected, 1e-15);
}

TEST(Train, DivergenceIsReported)
{
    Rng rng(6);
    const auto train = random_ratings(rng, 10, 10, 0.5, 5.0);
    TrainConfig cfg;
    cfg.factors = 2;
    cfg.lambda_u = 1e100;
    cfg.gamma1 = 1e100;
    cfg.max_epochs = 3;
    EXPECT_THROW(train_rmf(train, RatingTable(10, 10, 5.0, {}), cfg), DivergenceError);
}

TEST(Train, ConfigValidation)
{
    TrainConfig cfg;
    cfg.factors = 0;
    cfg.gamma1 = 0.0;
    cfg.alpha = -1.0;
    try {
        cfg.validate();
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("factors"), std::string::npos);
        EXPECT_NE(msg.find("gamma1"), std::string::npos);
        EXPECT_NE(msg.find("alpha"), std::string::npos);
    }
}

TEST(Train, EarlyStoppingReturnsBestSnapshot)
{
    SyntheticSpec s;
    s.users = 80;
    s.items = 60;
    s.density = 0.15;
    const auto d = make_synthetic(s).dataset;
    const auto plan = make_folds(d, 5, 1, 0.2);
    const auto sp = split(d, plan, 0);
    TrainConfig cfg;
    cfg.factors = 5;
    cfg.gamma1 = cfg.gamma2 = 0.5;
    cfg.max_epochs = 60;
    cfg.patience = 3;
    const auto r = train_rmf(sp.train, sp.validation, cfg);
    ASSERT_GE(r.history.size(), 2u);
    EXPECT_EQ(r.history[0].epoch, 0u);
    ASSERT_GE(r.best_epoch, 1u);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 1; e < r.history.size(); ++e) best = std::min(best, r.history[e].validation_rmse);
    EXPECT_EQ(r.history[r.best_epoch].validation_rmse, best);
    EXPECT_DOUBLE_EQ(rating_rmse(r.model, sp.validation), best);
    if (r.history.size() - 1 < cfg.max_epochs) {
        EXPECT_EQ(r.history.size() - 1, r.best_epoch + cfg.patience);
    }
    EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
}

TEST(Train, WithoutValidationRunsAllEpochs)
{
    Rng rng(21);
    const auto train = random_ratings(rng, 15, 15, 0.4, 5.0);
    TrainConfig cfg;
    cfg.factors = 3;
    cfg.max_epochs = 7;
    const auto r = train_rmf(train, RatingTable(15, 15, 5.0, {}), cfg);
    EXPECT_EQ(r.history.size(), 8u);
    EXPECT_EQ(r.best_epoch, 7u);
    EXPECT_TRUE(std::isnan(r.history.back().validation_rmse));
}

TEST(Train, ShuffleIsSeededAndDiffersFromUserMajor)
{
    Rng rng(31);
    const auto train = random_ratings(rng, 15, 15, 0.4, 5.0);
    TrainConfig cfg;
    cfg.factors = 3;
    cfg.max_epochs = 3;
    const RatingTable none(15, 15, 5.0, {});
    const auto ordered = train_rmf(train, none, cfg).model;
    cfg.shuffle = true;
    const auto s1 = train_rmf(train, none, cfg).model;
    const auto s2 = train_rmf(train, none, cfg).model;
    EXPECT_TRUE(s1 == s2);
    EXPECT_FALSE(s1 == ordered);
}

TEST(ModelIo, RoundTripIsExact)
{
    Rng rng(41);
    const auto train = random_ratings(rng, 12, 9, 0.4, 5.0);
    TrainConfig cfg;
    cfg.factors = 4;
    cfg.max_epochs = 5;
    const auto model = train_rmf(train, RatingTable(12, 9, 5.0, {}), cfg).model;
    std::stringstream buf;
    save_model(buf, model, {{"factors", "4"}, {"seed", "0"}});
    const auto back = load_model(buf);
    EXPECT_TRUE(back == model);
    for (UserId u = 0; u < 12; ++u) {
        for (ItemId i = 0; i < 9; ++i) EXPECT_EQ(predict(back, u, i), predict(model, u, i));
    }
}

TEST(ModelIo, RejectsGarbage)
{
    std::stringstream buf("not a model\n");
    EXPECT_THROW(load_model(buf), InputError);
}
