#include "ruinlab/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "ruinlab/errors.hpp"

namespace ruinlab {

std::pair<double, double> wilson_ci(std::size_t successes, std::size_t n) {
    detail::require(n >= 1, "wilson_ci requires n >= 1");
    detail::require(successes <= n, "wilson_ci requires successes <= n");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double centre = p + z2 / (2.0 * nn);
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    double lo = (centre - half) / denom;
    double hi = (centre + half) / denom;
    // The closed form is exact at the boundaries; rounding is not.
    if (successes == 0) lo = 0.0;
    if (successes == n) hi = 1.0;
    return {std::clamp(std::min(lo, p), 0.0, 1.0), std::clamp(std::max(hi, p), 0.0, 1.0)};
}

Estimate proportion_estimate(std::size_t successes, std::size_t n) {
    Estimate e;
    e.n = n;
    if (n == 0) return e;
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    e.value = p;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    std::tie(e.ci_lo, e.ci_hi) = wilson_ci(successes, n);
    return e;
}

Estimate mean_estimate(std::span<const double> samples) {
    Estimate e;
    e.n = samples.size();
    if (samples.empty()) return e;
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    e.value = mean;
    e.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    e.ci_lo = mean - kZ95 * e.std_error;
    e.ci_hi = mean + kZ95 * e.std_error;
    return e;
}

}  // namespace ruinlab
