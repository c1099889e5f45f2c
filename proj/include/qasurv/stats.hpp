#pragma once

#include <span>
#include <vector>

namespace qasurv::stats {

// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of
// freedom. Absolute error below 1e-10 for df <= 200, x <= 1000.
double chi_square_sf(double x, int df);

// Quantile of the standard normal distribution, p in (0, 1).
double normal_quantile(double p);

// Two-sided critical value for a confidence level in (0, 1),
// i.e. normal_quantile(1 - (1 - level) / 2).
double normal_two_sided_z(double level);

// Sample quantile with linear interpolation between order statistics
// (R type 7). `p` in [0, 1]. The span must be sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

// Convenience overload that copies and sorts.
double quantile(std::vector<double> values, double p);

double mean(std::span<const double> values);

// Pearson correlation; returns 0 when either input is constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace qasurv::stats
