#pragma once

#include <span>
#include <vector>

namespace rbp
{

//! Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2
double normal_cdf(double x);

/*!
 * One-sample Kolmogorov-Smirnov distance of a sample to Phi.
 *
 * The sample is used as given (callers standardize first). Throws
 * std::invalid_argument on an empty sample.
 */
double ks_to_normal(std::span<double const> sample);

//! Center by the mean and scale by the (divide-by-M) standard deviation;
//! a constant sample maps to all zeros
std::vector<double> self_normalize(std::span<double const> sample);

struct LinearFit
{
    double slope{0};
    double intercept{0};
    double r_squared{0};
};

//! Ordinary least squares of ys on xs (at least two distinct xs)
LinearFit fit_line(std::span<double const> xs, std::span<double const> ys);

//! Least squares on (log x, log y); needs >= 3 strictly positive pairs
LinearFit fit_power_law(std::span<double const> xs, std::span<double const> ys);

double mean(std::span<double const> xs);
//! Unbiased sample variance (zero for fewer than two values)
double sample_variance(std::span<double const> xs);

//! Linear-interpolation quantile of sorted data (type 7), p in [0, 1]
double quantile_sorted(std::span<double const> sorted, double p);

}  // namespace rbp
