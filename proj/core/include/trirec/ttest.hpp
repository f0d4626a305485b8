#pragma once

#include <cstddef>
#include <span>

namespace trirec {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, 0 <= x <= 1.
double incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

struct TTestResult {
    double t;
    double p;  ///< two-tailed
    std::size_t dof;
    double mean_difference;
};

/// Two-tailed paired t-test on a - b. Needs equal lengths >= 2 (InputError);
/// zero-variance differences, including identical inputs, throw
/// DegenerateInputError.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

}  // namespace trirec
