#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>

namespace ruinlab {

/// Monte Carlo point estimate with its sampling uncertainty.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;  ///< 95% interval
    double ci_hi = 0.0;
    std::size_t n = 0;
    std::map<std::string, std::string> meta;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

inline constexpr double kZ95 = 1.959963984540054;

/// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_ci(std::size_t successes, std::size_t n);

/// Proportion estimate with binomial standard error and Wilson interval.
Estimate proportion_estimate(std::size_t successes, std::size_t n);

/// Sample mean, standard error of the mean and normal 95% interval. Sums in
/// index order.
Estimate mean_estimate(std::span<const double> samples);

}  // namespace ruinlab
