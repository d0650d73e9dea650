#include "ruinlab/piterbarg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/format.hpp"

namespace ruinlab {

using detail::require;

namespace {

constexpr double kCountSlack = 1e-9;

}  // namespace

void PiterbargConfig::validate() const {
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    require(std::isfinite(T) && T >= 0.0, "T must be >= 0");
    require(std::isfinite(step) && step > 0.0, "step must be > 0");
    require(step <= 0.01, "step must be <= 0.01");
    require(T == 0.0 || step <= T / 8.0, "step must be <= T / 8 when T > 0");
    require(paths >= 1, "paths must be >= 1");
}

PiterbargLayout piterbarg_layout(double lambda, double T, double step) {
    PiterbargLayout out;
    out.negative = static_cast<std::size_t>(std::ceil(T / step - kCountSlack));
    out.window = static_cast<std::size_t>(std::floor(T / step + kCountSlack));
    out.positive = static_cast<std::size_t>(std::floor(lambda / step + kCountSlack));
    out.window = std::min(out.window, out.negative);
    return out;
}

PiterbargField simulate_field(const PiterbargConfig& config, StreamKey key) {
    config.validate();
    const auto layout = piterbarg_layout(config.lambda, config.T, config.step);
    PiterbargField field;
    field.step = config.step;
    field.zero_index = layout.negative;
    field.window = layout.window;
    field.values.assign(layout.negative + layout.positive + 1, 0.0);

    const double h = config.step;
    const double sqrt_h = std::sqrt(h);
    double* zero = field.values.data() + layout.negative;

    NormalStream forward(key, 0);
    double B = 0.0;
    for (std::size_t k = 1; k <= layout.positive; ++k) {
        B += sqrt_h * forward.next();
        zero[k] = std::numbers::sqrt2 * B - 2.0 * (static_cast<double>(k) * h);
    }
    NormalStream backward(key, 1);
    B = 0.0;
    for (std::size_t k = 1; k <= layout.negative; ++k) {
        B += sqrt_h * backward.next();
        *(zero - k) = std::numbers::sqrt2 * B;
    }
    return field;
}

namespace {

// Running max of window minima; out[c] receives exp(max) once the sweep has
// covered checkpoints[c] positive nodes.
void sweep(std::span<const double> values, std::size_t zero, std::size_t window,
           std::span<const std::size_t> checkpoints, std::span<double> out) {
    if (window > zero) throw std::logic_error("sup_inf_functional: window extends below the field");
    const std::size_t last = checkpoints.empty() ? 0 : checkpoints.back();
    if (zero + last >= values.size()) throw std::logic_error("sup_inf_functional: lambda beyond the field");

    std::vector<std::size_t> queue(window + last + 1);
    std::size_t head = 0;
    std::size_t tail = 0;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t c = 0;
    for (std::size_t idx = zero - window; idx <= zero + last; ++idx) {
        while (tail > head && values[queue[tail - 1]] >= values[idx]) --tail;
        queue[tail++] = idx;
        if (idx < zero) continue;
        const std::size_t lo = idx - window;
        while (queue[head] < lo) ++head;
        best = std::max(best, values[queue[head]]);
        const std::size_t k = idx - zero;
        while (c < checkpoints.size() && checkpoints[c] == k) out[c++] = std::exp(best);
    }
}

}  // namespace

double sup_inf_functional(std::span<const double> values, std::size_t zero_index, std::size_t positive,
                          std::size_t window) {
    double out = 0.0;
    const std::size_t cp[1] = {positive};
    sweep(values, zero_index, window, cp, std::span<double>(&out, 1));
    return out;
}

double sup_inf_functional(const PiterbargField& field) {
    return sup_inf_functional(field.values, field.zero_index, field.positive_nodes(), field.window);
}

double sup_inf_functional(const PiterbargField& field, double lambda, double T, double step) {
    const auto layout = piterbarg_layout(lambda, T, step);
    return sup_inf_functional(field.values, field.zero_index, layout.positive, layout.window);
}

std::vector<double> sup_inf_prefixes(const PiterbargField& field, std::span<const std::size_t> checkpoints) {
    require(std::is_sorted(checkpoints.begin(), checkpoints.end()), "checkpoints must be ascending");
    std::vector<double> out(checkpoints.size(), 0.0);
    sweep(field.values, field.zero_index, field.window, checkpoints, out);
    return out;
}

Estimate estimate_piterbarg(const PiterbargConfig& config) {
    config.validate();
    std::vector<double> samples(config.paths);
    detail::parallel_ranges(config.paths, config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            samples[i] = sup_inf_functional(simulate_field(config, StreamKey{config.seed, i}));
    });
    Estimate e = mean_estimate(samples);
    e.meta["seed"] = std::to_string(config.seed);
    e.meta["lambda"] = format_g17(config.lambda);
    e.meta["T"] = format_g17(config.T);
    e.meta["step"] = format_g17(config.step);
    if (config.paths < 100) e.meta["warning"] = "fewer than 100 paths; standard error unreliable";
    return e;
}

PiterbargExtrapolation extrapolate_piterbarg(double T, std::span<const double> lambda_schedule,
                                             const PiterbargConfig& base) {
    require(lambda_schedule.size() >= 3, "lambda schedule needs at least 3 values");
    for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
        require(std::isfinite(lambda_schedule[i]) && lambda_schedule[i] > 0.0, "lambdas must be > 0");
        require(i == 0 || lambda_schedule[i] > lambda_schedule[i - 1], "lambda schedule must be increasing");
    }
    PiterbargConfig config = base;
    config.T = T;
    config.lambda = lambda_schedule.back();
    config.validate();

    const std::size_t L = lambda_schedule.size();
    std::vector<std::size_t> checkpoints(L);
    for (std::size_t j = 0; j < L; ++j)
        checkpoints[j] = piterbarg_layout(lambda_schedule[j], T, config.step).positive;

    // Column-major: samples[j * paths + i] is path i at lambda j.
    const std::size_t n = config.paths;
    std::vector<double> samples(L * n);
    detail::parallel_ranges(n, config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto field = simulate_field(config, StreamKey{config.seed, i});
            const auto v = sup_inf_prefixes(field, checkpoints);
            for (std::size_t j = 0; j < L; ++j) samples[j * n + i] = v[j];
        }
    });

    PiterbargExtrapolation out;
    out.lambdas.assign(lambda_schedule.begin(), lambda_schedule.end());
    for (std::size_t j = 0; j < L; ++j) {
        Estimate e = mean_estimate(std::span<const double>(samples.data() + j * n, n));
        e.meta["seed"] = std::to_string(config.seed);
        e.meta["lambda"] = format_g17(lambda_schedule[j]);
        e.meta["T"] = format_g17(T);
        e.meta["step"] = format_g17(config.step);
        if (n < 100) e.meta["warning"] = "fewer than 100 paths; standard error unreliable";
        out.estimates.push_back(std::move(e));
    }
    std::vector<double> diff(n);
    for (std::size_t j = 0; j + 1 < L; ++j) {
        for (std::size_t i = 0; i < n; ++i) diff[i] = samples[(j + 1) * n + i] - samples[j * n + i];
        const Estimate d = mean_estimate(diff);
        out.increments.push_back(out.estimates[j + 1].value - out.estimates[j].value);
        out.increment_se.push_back(d.std_error);
        if (out.increments.back() < -2.0 * d.std_error)
            out.warnings.push_back("estimate decreases beyond noise between lambda=" + format_g17(lambda_schedule[j]) +
                                   " and lambda=" + format_g17(lambda_schedule[j + 1]));
    }
    out.value = out.estimates.back().value;
    const double last_inc = out.increments.back();
    out.converged = std::abs(last_inc) < std::max(2.0 * out.estimates.back().std_error, 0.01 * out.value);
    out.increments_shrinking = true;
    for (std::size_t j = 0; j + 1 < out.increments.size(); ++j) {
        const double noise = 2.0 * std::hypot(out.increment_se[j], out.increment_se[j + 1]);
        if (out.increments[j + 1] > out.increments[j] + noise) out.increments_shrinking = false;
    }
    if (!out.converged) out.warnings.push_back("last increment exceeds max(2 SE, 1% of value)");
    return out;
}

}  // namespace ruinlab
