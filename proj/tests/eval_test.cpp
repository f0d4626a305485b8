#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trirec/error.hpp"
#include "trirec/eval.hpp"
#include "trirec/groups.hpp"
#include "trirec/synthetic.hpp"

using namespace trirec;

namespace {

Dataset small_synthetic(std::uint64_t seed = 1)
{
    SyntheticSpec s;
    s.users = 60;
    s.items = 50;
    s.density = 0.15;
    s.seed = seed;
    return make_synthetic(s).dataset;
}

TrainConfig quick_config()
{
    TrainConfig cfg;
    cfg.factors = 4;
    cfg.gamma1 = cfg.gamma2 = 0.5;
    cfg.alpha = 0.01;
    cfg.max_epochs = 15;
    cfg.patience = 2;
    return cfg;
}

CvParams quick_cv()
{
    CvParams cv;
    cv.folds = 3;
    cv.repeats = 2;
    cv.seed = 5;
    return cv;
}

}  // namespace

TEST(Synthetic, DeterministicAndInRange)
{
    SyntheticSpec s;
    s.users = 50;
    s.items = 40;
    const auto a = make_synthetic(s);
    const auto b = make_synthetic(s);
    EXPECT_TRUE(a.dataset.ratings() == b.dataset.ratings());
    EXPECT_TRUE(a.dataset.tags() == b.dataset.tags());
    EXPECT_EQ(a.cluster, b.cluster);
    for (const auto& e : a.dataset.ratings().entries()) {
        EXPECT_GT(e.value, 0.0);
        EXPECT_LE(e.value, s.r_max);
    }
    s.seed = 2;
    EXPECT_FALSE(make_synthetic(s).dataset.ratings() == a.dataset.ratings());
}

TEST(FitFold, TrainSeedSharedAcrossModelKinds)
{
    const auto d = small_synthetic();
    auto cfg = quick_config();
    cfg.alpha = 0.0;
    ModelSpec rmf;
    rmf.kind = ModelKind::rmf;
    ModelSpec wudiff;
    const auto a = fit_fold(d, rmf, cfg, quick_cv(), 1, 2);
    const auto b = fit_fold(d, wudiff, cfg, quick_cv(), 1, 2);
    EXPECT_EQ(a.neighbors.total(), 0u);
    EXPECT_GT(b.neighbors.total(), 0u);
    // alpha = 0 disables the neighbour term, so both fits are the same model.
    EXPECT_TRUE(a.trained.model == b.trained.model);
}

TEST(RunCv, AlphaZeroMatchesRmfExactly)
{
    const auto d = small_synthetic();
    auto cfg = quick_config();
    cfg.alpha = 0.0;
    ModelSpec rmf;
    rmf.kind = ModelKind::rmf;
    const auto a = run_cv(d, rmf, cfg, quick_cv());
    const auto b = run_cv(d, ModelSpec{}, cfg, quick_cv());
    EXPECT_EQ(a.fold_rmses(), b.fold_rmses());
    EXPECT_EQ(a.fold_maes(), b.fold_maes());
}

TEST(RunCv, DeterministicAcrossJobCounts)
{
    const auto d = small_synthetic();
    auto cv = quick_cv();
    const auto one = run_cv(d, ModelSpec{}, quick_config(), cv);
    cv.jobs = 4;
    const auto four = run_cv(d, ModelSpec{}, quick_config(), cv);
    EXPECT_EQ(one.fold_rmses(), four.fold_rmses());
    ASSERT_EQ(one.runs.size(), 6u);
    for (std::size_t k = 0; k < one.runs.size(); ++k) {
        EXPECT_EQ(one.runs[k].repeat, k / 3);
        EXPECT_EQ(one.runs[k].fold, k % 3);
    }
    std::ostringstream a, b;
    write_report_csv(a, one, {{"seed", "5"}});
    write_report_csv(b, four, {{"seed", "5"}});
    EXPECT_EQ(a.str(), b.str());
}

TEST(RunCv, SummaryMatchesRuns)
{
    const auto d = small_synthetic();
    const auto r = run_cv(d, ModelSpec{}, quick_config(), quick_cv());
    const auto rm = r.fold_rmses();
    double mean = 0.0;
    for (const double x : rm) mean += x;
    mean /= static_cast<double>(rm.size());
    double ss = 0.0;
    for (const double x : rm) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(r.rmse.mean, mean, 1e-12);
    EXPECT_NEAR(r.rmse.stddev, std::sqrt(ss / static_cast<double>(rm.size() - 1)), 1e-12);
    std::size_t tested = 0;
    for (const auto& run : r.runs) {
        EXPECT_LE(run.mae, run.rmse);
        tested += run.test_size;
    }
    EXPECT_EQ(tested, 2 * d.ratings().size());
}

TEST(RunCv, DifferentSeedsDiffer)
{
    const auto d = small_synthetic();
    auto cv = quick_cv();
    const auto a = run_cv(d, ModelSpec{}, quick_config(), cv);
    cv.seed = 6;
    EXPECT_NE(a.fold_rmses(), run_cv(d, ModelSpec{}, quick_config(), cv).fold_rmses());
}

TEST(CvParams, Validation)
{
    CvParams cv;
    cv.folds = 1;
    EXPECT_THROW(cv.validate(), ConfigError);
    cv.folds = 10;
    cv.repeats = 0;
    EXPECT_THROW(cv.validate(), ConfigError);
}

TEST(Reports, CsvLayout)
{
    EvalReport r;
    r.model = "rmf";
    r.runs = {{0, 0, 0.5, 0.75, 10, 3}, {0, 1, 0.25, 0.5, 10, 4}};
    r.mae = {0.375, 0.1767766952966369};
    r.rmse = {0.625, 0.1767766952966369};
    std::ostringstream out;
    write_report_csv(out, r, {{"model", "rmf"}, {"seed", "3"}});
    EXPECT_EQ(out.str(),
              "# model=rmf\n"
              "# seed=3\n"
              "metric,mean,stddev,repeat,fold,value\n"
              "mae,0.375,0.176776695297,,,\n"
              "rmse,0.625,0.176776695297,,,\n"
              "mae,,,0,0,0.5\n"
              "rmse,,,0,0,0.75\n"
              "mae,,,0,1,0.25\n"
              "rmse,,,0,1,0.5\n");
}

TEST(Reports, JsonHasConfigAndRuns)
{
    EvalReport r;
    r.model = "wudiff_rmf";
    r.runs = {{0, 0, 0.5, 0.75, 10, 3}};
    r.mae = {0.5, 0.0};
    r.rmse = {0.75, 0.0};
    std::ostringstream out;
    write_report_json(out, r, {{"seed", "3"}});
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["model"], "wudiff_rmf");
    EXPECT_EQ(j["config"]["seed"], "3");
    EXPECT_DOUBLE_EQ(j["rmse"]["mean"].get<double>(), 0.75);
    ASSERT_EQ(j["runs"].size(), 1u);
    EXPECT_EQ(j["runs"][0]["best_epoch"], 3);
}

TEST(Sweep, OneReportPerGridValue)
{
    const auto d = small_synthetic();
    auto cv = quick_cv();
    cv.repeats = 1;
    const std::vector<double> grid{0.0, 0.5, 1.0};
    const auto points = sweep(d, ModelSpec{}, quick_config(), cv, SweepParam::lambda, grid);
    ASSERT_EQ(points.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(points[k].value, grid[k]);
        ModelSpec spec;
        spec.neighbors.lambda = grid[k];
        EXPECT_EQ(points[k].report.fold_rmses(), run_cv(d, spec, quick_config(), cv).fold_rmses());
    }
    const auto best = argmin_rmse(points);
    for (const auto& p : points) EXPECT_LE(points[best].report.rmse.mean, p.report.rmse.mean);

    std::ostringstream out;
    write_sweep_csv(out, SweepParam::lambda, points, {});
    std::string header;
    std::istringstream in(out.str());
    std::getline(in, header);
    EXPECT_EQ(header, "param,value,rmse_mean,rmse_stddev,mae_mean,mae_stddev");
    EXPECT_THROW(sweep(d, ModelSpec{}, quick_config(), cv, SweepParam::alpha, {}), ConfigError);
}

TEST(Sweep, ParamNames)
{
    EXPECT_EQ(parse_sweep_param("k_neighbors"), SweepParam::k_neighbors);
    EXPECT_FALSE(parse_sweep_param("gamma").has_value());
    EXPECT_EQ(parse_model_kind("rmf"), ModelKind::rmf);
    EXPECT_STREQ(to_string(ModelKind::wudiff_rmf), "wudiff_rmf");
}

TEST(Groups, MovielensBinning)
{
    const auto spec = UserGroupSpec::movielens();
    const auto c = spec.cell(3, 7);
    EXPECT_EQ(spec.rating_label(c / spec.tag_bins()), "5");
    EXPECT_EQ(spec.tag_label(c % spec.tag_bins()), "10");
    EXPECT_EQ(spec.rating_label(spec.rating_bin(5)), "5");
    EXPECT_EQ(spec.rating_label(spec.rating_bin(6)), "10");
    EXPECT_EQ(spec.rating_label(spec.rating_bin(66)), ">65");
    EXPECT_EQ(spec.tag_label(spec.tag_bin(101)), ">100");
    EXPECT_EQ(spec.tag_label(spec.tag_bin(0)), "10");
    EXPECT_THROW(UserGroupSpec({5, 5}, {1}), ConfigError);
    EXPECT_THROW(UserGroupSpec({}, {1}), ConfigError);
}

TEST(Groups, AssignmentUsesTrainCountsAndTagTotals)
{
    const RatingTable train(2, 8, 5.0, {{0, 0, 1.0}, {0, 1, 2.0}, {0, 2, 3.0}, {1, 0, 1.0}});
    const TagTable tags(2, 2, {{0, 0, 4}, {0, 1, 3}, {1, 1, 20}});
    const UserGroupSpec spec({5, 10}, {10, 20});
    const auto g = assign_groups(train, tags, spec);
    EXPECT_EQ(g[0], spec.cell(3, 7));
    EXPECT_EQ(g[1], spec.cell(1, 20));
    EXPECT_EQ(g[1], 1u);
}

TEST(Groups, CountsSumToTotals)
{
    const auto d = small_synthetic(3);
    auto cv = quick_cv();
    cv.repeats = 1;
    NamedModel rmf{"rmf", ModelSpec{}, quick_config()};
    rmf.spec.kind = ModelKind::rmf;
    const NamedModel wudiff{"wudiff_rmf", ModelSpec{}, quick_config()};
    const UserGroupSpec spec({3, 6, 9}, {10, 15});
    const auto r = group_report(d, {rmf, wudiff}, spec, cv);
    ASSERT_EQ(r.cells.size(), spec.cell_count());
    std::size_t ratings = 0, users = 0;
    double sq = 0.0;
    for (const auto& c : r.cells) {
        ratings += c.test_ratings;
        users += c.test_users;
        ASSERT_EQ(c.rmse.size(), 2u);
        EXPECT_EQ(c.rmse[0].has_value(), c.test_ratings > 0);
        if (c.rmse[0]) sq += *c.rmse[0] * *c.rmse[0] * static_cast<double>(c.test_ratings);
    }
    EXPECT_EQ(ratings, d.ratings().size());
    EXPECT_GT(users, 0u);
    EXPECT_NEAR(std::sqrt(sq / static_cast<double>(ratings)), r.overall_rmse[0], 1e-9);

    // Pooled overall RMSE equals the RMSE over every test prediction of every fold.
    const auto rep = run_cv(d, rmf.spec, rmf.cfg, cv);
    double pooled = 0.0;
    for (const auto& run : rep.runs) pooled += run.rmse * run.rmse * static_cast<double>(run.test_size);
    EXPECT_NEAR(std::sqrt(pooled / static_cast<double>(d.ratings().size())), r.overall_rmse[0], 1e-9);

    std::ostringstream out;
    write_group_csv(out, r, {});
    EXPECT_NE(out.str().find("rating_bin,tag_bin,test_users,test_ratings,rmse_rmf,rmse_wudiff_rmf"),
              std::string::npos);
}
