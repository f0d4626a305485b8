#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "trirec/error.hpp"
#include "trirec/groups.hpp"
#include "trirec/synthetic.hpp"

namespace trirec::cli {

namespace {

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.out);
    const auto path = cfg.out / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    return f;
}

void write_echo(std::ostream& f, const RunConfig& cfg)
{
    for (const auto& [k, v] : echo(cfg)) f << "# " << k << '=' << v << '\n';
}

Dataset load(const RunConfig& cfg, std::ostream& err)
{
    auto result = load_tsv(*cfg.ratings, cfg.tags, cfg.load);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    return std::move(result.dataset);
}

}  // namespace

void cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg, err);
    std::filesystem::create_directories(cfg.out);
    write_canonical(d, cfg.out / "ratings.tsv", cfg.out / "tags.tsv");

    std::size_t assignments = 0;
    for (const auto& e : d.tags().entries()) assignments += e.value;
    const double density = static_cast<double>(d.ratings().size()) /
                           (static_cast<double>(d.user_count()) * static_cast<double>(d.item_count()));
    std::ostringstream stats;
    stats << "users\t" << d.user_count() << '\n'
          << "items\t" << d.item_count() << '\n'
          << "tags\t" << d.tag_count() << '\n'
          << "ratings\t" << d.ratings().size() << '\n'
          << "tag_pairs\t" << d.tags().size() << '\n'
          << "tag_assignments\t" << assignments << '\n'
          << "r_max\t" << num(d.ratings().r_max()) << '\n'
          << "density\t" << num(density) << '\n';
    auto f = open_output(cfg, "summary.tsv");
    write_echo(f, cfg);
    f << stats.str();
    out << stats.str();
}

void cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg, err);
    const auto fit = fit_fold(d, cfg.model, cfg.train, cfg.cv, 0, cfg.test_fold);
    const auto& trained = fit.trained;

    {
        auto f = open_output(cfg, "model.txt");
        save_model(f, trained.model, echo(cfg));
    }
    {
        auto f = open_output(cfg, "history.csv");
        write_echo(f, cfg);
        f << "epoch,train_loss,train_rmse,validation_rmse\n";
        for (const auto& h : trained.history) {
            f << h.epoch << ',' << num(h.train_loss) << ',' << num(h.train_rmse) << ','
              << (std::isnan(h.validation_rmse) ? std::string("NA") : num(h.validation_rmse)) << '\n';
        }
    }
    const auto pred = predict_all(trained.model, fit.split.test);
    const auto truth = values_of(fit.split.test);
    const double test_mae = mae(pred, truth);
    const double test_rmse = rmse(pred, truth);
    {
        auto f = open_output(cfg, "metrics.csv");
        write_echo(f, cfg);
        f << "metric,value\n"
          << "test_mae," << num(test_mae) << '\n'
          << "test_rmse," << num(test_rmse) << '\n'
          << "best_epoch," << trained.best_epoch << '\n'
          << "epochs_run," << trained.history.size() - 1 << '\n';
    }
    if (cfg.dump_neighbors) {
        auto f = open_output(cfg, "neighbors.tsv");
        fit.neighbors.write_tsv(f);
    }
    out << "model " << to_string(cfg.model.kind) << ": best epoch " << trained.best_epoch << ", test MAE "
        << num(test_mae) << ", test RMSE " << num(test_rmse) << '\n';
}

void cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg, err);
    const auto report = run_cv(d, cfg.model, cfg.train, cfg.cv);
    const auto e = echo(cfg);
    {
        auto f = open_output(cfg, "report.csv");
        write_report_csv(f, report, e);
    }
    {
        auto f = open_output(cfg, "report.json");
        write_report_json(f, report, e);
    }
    out << report.model << ": MAE " << num(report.mae.mean) << " +- " << num(report.mae.stddev) << ", RMSE "
        << num(report.rmse.mean) << " +- " << num(report.rmse.stddev) << " over " << report.runs.size()
        << " runs\n";
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg, err);
    const auto points = sweep(d, cfg.model, cfg.train, cfg.cv, cfg.sweep_param, cfg.sweep_values);
    auto f = open_output(cfg, "sweep.csv");
    write_sweep_csv(f, cfg.sweep_param, points, echo(cfg));
    for (const auto& p : points) {
        out << to_string(cfg.sweep_param) << '=' << num(p.value) << "  RMSE " << num(p.report.rmse.mean) << " +- "
            << num(p.report.rmse.stddev) << '\n';
    }
}

void cmd_groups(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto d = load(cfg, err);
    ModelSpec rmf = cfg.model;
    rmf.kind = ModelKind::rmf;
    ModelSpec wudiff = cfg.model;
    wudiff.kind = ModelKind::wudiff_rmf;
    const std::vector<NamedModel> models{{"rmf", rmf, cfg.train}, {"wudiff_rmf", wudiff, cfg.train}};
    const UserGroupSpec spec(cfg.rating_bins, cfg.tag_bins);
    const auto report = group_report(d, models, spec, cfg.cv);
    auto f = open_output(cfg, "groups.csv");
    write_group_csv(f, report, echo(cfg));
    std::size_t nonempty = 0;
    for (const auto& c : report.cells) nonempty += c.test_ratings > 0 ? 1 : 0;
    out << nonempty << " non-empty groups; overall RMSE rmf " << num(report.overall_rmse[0]) << ", wudiff_rmf "
        << num(report.overall_rmse[1]) << '\n';
}

void cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    SyntheticSpec spec;
    spec.seed = cfg.cv.seed;
    const auto data = make_synthetic(spec);
    std::filesystem::create_directories(cfg.out);
    write_canonical(data.dataset, cfg.out / "ratings.tsv", cfg.out / "tags.tsv");
    out << "wrote " << data.dataset.ratings().size() << " ratings and " << data.dataset.tags().size()
        << " tag pairs to " << cfg.out.string() << '\n';
}

}  // namespace trirec::cli
