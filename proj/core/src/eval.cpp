#include "trirec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "trirec/error.hpp"
#include "trirec/random.hpp"

namespace trirec {

const char* to_string(ModelKind kind)
{
    return kind == ModelKind::rmf ? "rmf" : "wudiff_rmf";
}

std::optional<ModelKind> parse_model_kind(const std::string& s)
{
    if (s == "rmf") return ModelKind::rmf;
    if (s == "wudiff_rmf") return ModelKind::wudiff_rmf;
    return std::nullopt;
}

void CvParams::validate() const
{
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
        throw ConfigError("validation_fraction must lie in [0, 1)");
    }
}

FoldFit fit_fold(const Dataset& d, const ModelSpec& spec, const TrainConfig& cfg, const CvParams& cv,
                 std::size_t repeat, std::size_t fold)
{
    const auto plan = make_folds(d, cv.folds, derive_seed(cv.seed, "repeat", repeat), cv.validation_fraction);
    FoldFit fit{split(d, plan, fold), NeighborSets::empty(d.user_count()), {}};

    TrainConfig run_cfg = cfg;
    run_cfg.seed = derive_seed(cv.seed, "train", repeat * cv.folds + fold);
    if (spec.kind == ModelKind::rmf) {
        fit.trained = train_rmf(fit.split.train, fit.split.validation, run_cfg);
        return fit;
    }
    const UserRatingStats stats(fit.split.train);
    const auto graph = build_graph(fit.split.train, d.tags(), stats, spec.bm25);
    fit.neighbors = top_k_neighbors(graph, spec.neighbors);
    fit.trained = train(fit.split.train, fit.split.validation, fit.neighbors, run_cfg);
    return fit;
}

std::vector<double> predict_all(const FactorModel& m, const RatingTable& test)
{
    std::vector<double> out;
    out.reserve(test.size());
    for (UserId u = 0; u < test.user_count(); ++u) {
        for (const auto& e : test.row(u)) out.push_back(predict(m, u, e.col));
    }
    return out;
}

std::vector<double> values_of(const RatingTable& t)
{
    std::vector<double> out;
    out.reserve(t.size());
    for (const auto& e : t.entries()) out.push_back(e.value);
    return out;
}

std::vector<double> EvalReport::fold_maes() const
{
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(r.mae);
    return v;
}

std::vector<double> EvalReport::fold_rmses() const
{
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(r.rmse);
    return v;
}

EvalReport run_cv(const Dataset& d, const ModelSpec& spec, const TrainConfig& cfg, const CvParams& cv)
{
    cv.validate();
    cfg.validate();
    if (spec.kind == ModelKind::wudiff_rmf) {
        spec.neighbors.validate();
        spec.bm25.validate();
    }

    const auto n_runs = cv.repeats * cv.folds;
    std::vector<FoldResult> runs(n_runs);
    std::vector<std::exception_ptr> errors(n_runs);
    const auto execute = [&](std::size_t idx) {
        try {
            const auto repeat = idx / cv.folds;
            const auto fold = idx % cv.folds;
            const auto fit = fit_fold(d, spec, cfg, cv, repeat, fold);
            const auto pred = predict_all(fit.trained.model, fit.split.test);
            const auto truth = values_of(fit.split.test);
            runs[idx] = FoldResult{repeat, fold, mae(pred, truth), rmse(pred, truth), truth.size(),
                                   fit.trained.best_epoch};
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(cv.jobs, static_cast<unsigned>(n_runs)));
    if (jobs == 1) {
        for (std::size_t k = 0; k < n_runs; ++k) execute(k);
    } else {
        std::vector<std::thread> threads;
        for (unsigned j = 0; j < jobs; ++j) {
            threads.emplace_back([&, j] {
                for (std::size_t k = j; k < n_runs; k += jobs) execute(k);
            });
        }
        for (auto& t : threads) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EvalReport report;
    report.model = to_string(spec.kind);
    report.runs = std::move(runs);
    const auto maes = report.fold_maes();
    const auto rmses = report.fold_rmses();
    report.mae = summarize(maes);
    report.rmse = summarize(rmses);
    return report;
}

namespace {

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_echo(std::ostream& out, const ConfigEcho& config)
{
    for (const auto& [k, v] : config) out << "# " << k << '=' << v << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const EvalReport& r, const ConfigEcho& config)
{
    write_echo(out, config);
    out << "metric,mean,stddev,repeat,fold,value\n";
    out << "mae," << num(r.mae.mean) << ',' << num(r.mae.stddev) << ",,,\n";
    out << "rmse," << num(r.rmse.mean) << ',' << num(r.rmse.stddev) << ",,,\n";
    for (const auto& run : r.runs) {
        out << "mae,,," << run.repeat << ',' << run.fold << ',' << num(run.mae) << '\n';
        out << "rmse,,," << run.repeat << ',' << run.fold << ',' << num(run.rmse) << '\n';
    }
}

void write_report_json(std::ostream& out, const EvalReport& r, const ConfigEcho& config)
{
    nlohmann::ordered_json j;
    auto& cfg = j["config"];
    cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["model"] = r.model;
    j["mae"] = {{"mean", r.mae.mean}, {"stddev", r.mae.stddev}};
    j["rmse"] = {{"mean", r.rmse.mean}, {"stddev", r.rmse.stddev}};
    auto& runs = j["runs"];
    runs = nlohmann::ordered_json::array();
    for (const auto& run : r.runs) {
        runs.push_back({{"repeat", run.repeat},
                        {"fold", run.fold},
                        {"mae", run.mae},
                        {"rmse", run.rmse},
                        {"test_size", run.test_size},
                        {"best_epoch", run.best_epoch}});
    }
    out << j.dump(2) << '\n';
}

const char* to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::lambda: return "lambda";
    case SweepParam::k_neighbors: return "k_neighbors";
    case SweepParam::alpha: return "alpha";
    }
    return "?";
}

std::optional<SweepParam> parse_sweep_param(const std::string& s)
{
    if (s == "lambda") return SweepParam::lambda;
    if (s == "k_neighbors" || s == "k") return SweepParam::k_neighbors;
    if (s == "alpha") return SweepParam::alpha;
    return std::nullopt;
}

std::vector<SweepPoint> sweep(const Dataset& d, const ModelSpec& spec, const TrainConfig& cfg,
                              const CvParams& cv, SweepParam param, const std::vector<double>& grid)
{
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (const double value : grid) {
        ModelSpec s = spec;
        TrainConfig c = cfg;
        switch (param) {
        case SweepParam::lambda: s.neighbors.lambda = value; break;
        case SweepParam::k_neighbors:
            if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError("k_neighbors grid must hold integers >= 1");
            s.neighbors.k = static_cast<std::size_t>(value);
            break;
        case SweepParam::alpha: c.alpha = value; break;
        }
        points.push_back(SweepPoint{value, run_cv(d, s, c, cv)});
    }
    return points;
}

void write_sweep_csv(std::ostream& out, SweepParam param, const std::vector<SweepPoint>& points,
                     const ConfigEcho& config)
{
    write_echo(out, config);
    out << "param,value,rmse_mean,rmse_stddev,mae_mean,mae_stddev\n";
    for (const auto& p : points) {
        out << to_string(param) << ',' << num(p.value) << ',' << num(p.report.rmse.mean) << ','
            << num(p.report.rmse.stddev) << ',' << num(p.report.mae.mean) << ',' << num(p.report.mae.stddev)
            << '\n';
    }
}

std::size_t argmin_rmse(const std::vector<SweepPoint>& points)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (points[k].report.rmse.mean < points[best].report.rmse.mean) best = k;
    }
    return best;
}

}  // namespace trirec
