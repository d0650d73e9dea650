#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ruinlab/estimate.hpp"
#include "ruinlab/gaussian.hpp"

namespace ruinlab {

/// Monte Carlo setup for
///   P(lambda, T) = E[ sup_{t in [0, lambda]} inf_{s in [0, T]} exp(sqrt(2) B(t - s) - |t - s| - (t - s)) ].
struct PiterbargConfig {
    double lambda = 10.0;
    double T = 0.0;
    double step = 5e-3;
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    /// Requires lambda > 0, T >= 0, 0 < step <= min(0.01, T / 8 when T > 0).
    void validate() const;
};

/// Z(v) = sqrt(2) B(v) - |v| - v on the nodes v = k * step, k = -m .. n, for a
/// two-sided Brownian motion with B(0) = 0.
struct PiterbargField {
    std::vector<double> values;  ///< values[zero_index + k] = Z(k * step)
    std::size_t zero_index = 0;  ///< m: number of nodes on the negative axis
    std::size_t window = 0;      ///< nodes spanned by [t - T, t) : floor(T / step)
    double step = 0.0;

    std::size_t positive_nodes() const { return values.size() - zero_index - 1; }
    double at(std::ptrdiff_t k) const { return values[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(zero_index) + k)]; }
};

/// Node counts used for a given (lambda, T, step): negative axis, positive axis, window.
struct PiterbargLayout {
    std::size_t negative = 0;
    std::size_t positive = 0;
    std::size_t window = 0;
};
PiterbargLayout piterbarg_layout(double lambda, double T, double step);

/// Positive axis draws from substream 0 of `key`, negative axis from
/// substream 1, each outward from 0. A longer lambda or T extends the field
/// without changing existing nodes.
PiterbargField simulate_field(const PiterbargConfig& config, StreamKey key);

/// exp( max_{0 <= k <= positive} min_{k - window <= j <= k} Z_j ) by a
/// monotone-queue sliding minimum. `zero_index` locates v = 0 in `values`.
double sup_inf_functional(std::span<const double> values, std::size_t zero_index, std::size_t positive,
                          std::size_t window);

/// Functional over the whole field.
double sup_inf_functional(const PiterbargField& field);

/// Functional for (lambda, T, step) over a field simulated at least that far.
double sup_inf_functional(const PiterbargField& field, double lambda, double T, double step);

/// Same sweep, reporting the running maximum after each positive node count in
/// `checkpoints` (ascending). Result i equals the functional truncated at
/// checkpoints[i].
std::vector<double> sup_inf_prefixes(const PiterbargField& field, std::span<const std::size_t> checkpoints);

/// Mean and standard error of the functional over `paths` fields, path i
/// keyed by (seed, i).
Estimate estimate_piterbarg(const PiterbargConfig& config);

struct PiterbargExtrapolation {
    std::vector<double> lambdas;
    std::vector<Estimate> estimates;      ///< one per lambda, common random numbers
    std::vector<double> increments;       ///< estimates[i+1] - estimates[i]
    std::vector<double> increment_se;     ///< paired standard errors of the increments
    double value = 0.0;                   ///< estimate at the largest lambda
    bool converged = false;               ///< last increment < max(2 SE, 1% of value)
    bool increments_shrinking = false;    ///< increments nonincreasing up to 2 combined SEs
    std::vector<std::string> warnings;
};

/// Estimates P(lambda, T) along an increasing schedule of lambdas using one
/// field per path, simulated to the largest lambda.
PiterbargExtrapolation extrapolate_piterbarg(double T, std::span<const double> lambda_schedule,
                                             const PiterbargConfig& base);

}  // namespace ruinlab
