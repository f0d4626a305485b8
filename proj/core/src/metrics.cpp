#include "trirec/metrics.hpp"

#include <cmath>
#include <cstdlib>

#include "trirec/error.hpp"

namespace trirec {

namespace {

void check_pairs(std::span<const double> pred, std::span<const double> truth)
{
    if (pred.empty()) throw InputError("empty test set");
    if (pred.size() != truth.size()) throw InputError("prediction and truth lengths differ");
}

}  // namespace

double mae(std::span<const double> pred, std::span<const double> truth)
{
    check_pairs(pred, truth);
    double s = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) s += std::abs(truth[k] - pred[k]);
    return s / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> truth)
{
    check_pairs(pred, truth);
    double s = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) s += (truth[k] - pred[k]) * (truth[k] - pred[k]);
    return std::sqrt(s / static_cast<double>(pred.size()));
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    if (values.empty()) return s;
    for (const double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

}  // namespace trirec
