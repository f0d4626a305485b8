#pragma once

#include <span>

namespace trirec {

/// Mean absolute error over aligned prediction/truth pairs. Throws
/// InputError on empty or misaligned input.
double mae(std::span<const double> pred, std::span<const double> truth);

/// Root mean squared error; same preconditions as mae().
double rmse(std::span<const double> pred, std::span<const double> truth);

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation (n - 1); 0 for n = 1
};

Summary summarize(std::span<const double> values);

}  // namespace trirec
