#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trirec/dataset.hpp"
#include "trirec/diffusion.hpp"
#include "trirec/ingest.hpp"
#include "trirec/metrics.hpp"
#include "trirec/mf.hpp"
#include "trirec/weighting.hpp"

namespace trirec {

enum class ModelKind { rmf, wudiff_rmf };

const char* to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(const std::string& s);

/// Which model to fit and, for wudiff_rmf, how to build its neighbourhoods.
struct ModelSpec {
    ModelKind kind = ModelKind::wudiff_rmf;
    NeighborParams neighbors;
    Bm25Params bm25;
};

struct CvParams {
    std::size_t folds = 10;
    std::size_t repeats = 10;  ///< repeat r uses fold seed derived from (seed, r)
    std::uint64_t seed = 0;
    double validation_fraction = 0.1;
    unsigned jobs = 1;  ///< parallel (repeat, fold) runs; results do not depend on it

    void validate() const;
};

/// Everything produced by fitting one (repeat, fold) cell.
struct FoldFit {
    Split split;
    NeighborSets neighbors;
    TrainResult trained;
};

/// Splits, derives weights/graph/neighbours from the training split only,
/// and trains. The training seed depends on (cv.seed, repeat, fold) but not
/// on the model kind, so rmf and wudiff_rmf start from the same point.
FoldFit fit_fold(const Dataset& d, const ModelSpec& spec, const TrainConfig& cfg, const CvParams& cv,
                 std::size_t repeat, std::size_t fold);

/// Predictions for every rating in `test`, row-major order.
std::vector<double> predict_all(const FactorModel& m, const RatingTable& test);
std::vector<double> values_of(const RatingTable& t);

struct FoldResult {
    std::size_t repeat;
    std::size_t fold;
    double mae;
    double rmse;
    std::size_t test_size;
    std::size_t best_epoch;
};

struct EvalReport {
    std::string model;
    std::vector<FoldResult> runs;  ///< ordered by (repeat, fold)
    Summary mae;
    Summary rmse;

    std::vector<double> fold_maes() const;
    std::vector<double> fold_rmses() const;
};

/// Repeated k-fold cross validation of one model.
EvalReport run_cv(const Dataset& d, const ModelSpec& spec, const TrainConfig& cfg, const CvParams& cv);

/// Key/value lines embedded at the top of every artifact.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// CSV: `# key=value` header, then `metric,mean,stddev,repeat,fold,value`
/// with two summary rows followed by one row per metric per run.
void write_report_csv(std::ostream& out, const EvalReport& r, const ConfigEcho& config);
void write_report_json(std::ostream& out, const EvalReport& r, const ConfigEcho& config);

enum class SweepParam { lambda, k_neighbors, alpha };

const char* to_string(SweepParam p);
std::optional<SweepParam> parse_sweep_param(const std::string& s);

struct SweepPoint {
    double value;
    EvalReport report;
};

/// One run_cv per grid value with the chosen parameter overridden.
/// Throws ConfigError on an empty grid.
std::vector<SweepPoint> sweep(const Dataset& d, const ModelSpec& spec, const TrainConfig& cfg,
                              const CvParams& cv, SweepParam param, const std::vector<double>& grid);

/// `param,value,rmse_mean,rmse_stddev,mae_mean,mae_stddev`.
void write_sweep_csv(std::ostream& out, SweepParam param, const std::vector<SweepPoint>& points,
                     const ConfigEcho& config);

/// Index of the grid point with the lowest mean RMSE (first on ties).
std::size_t argmin_rmse(const std::vector<SweepPoint>& points);

}  // namespace trirec
