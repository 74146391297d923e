#pragma once

// Kolmogorov-Smirnov distances and p-values, empirical CDFs.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace chigrid {

/// sup_x |F_n(x) - cdf(x)| for the empirical CDF of `samples`.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)| for two samples.
double ks_two_sample_distance(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov survival function Q(t) = 2 sum (-1)^(k-1) exp(-2 k^2 t^2).
double kolmogorov_survival(double t);

/// Asymptotic p-value of a two-sample KS statistic (Stephens' small-sample
/// correction on the effective size n_a n_b / (n_a + n_b)).
double ks_two_sample_pvalue(double distance, std::size_t n_a, std::size_t n_b);

/// Fraction of pairs with first <= x and second <= y, at each point.
std::vector<double> empirical_joint_cdf(std::span<const std::pair<double, double>> samples,
                                        std::span<const std::pair<double, double>> points);

/// Sample mean and standard error of the mean.
std::pair<double, double> mean_and_stderr(std::span<const double> values);

} // namespace chigrid
