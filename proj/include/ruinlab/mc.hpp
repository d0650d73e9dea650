#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ruinlab/estimate.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/pathsim.hpp"

namespace ruinlab {

/// How to lay out observation times for a parameter set.
struct GridSpec {
    double base_step = 1e-3;
    double fine_step = 1e-3;
    std::optional<double> fine_window;  ///< unset: default_fine_window(params)
    std::size_t variance_steps = 0;     ///< > 0 selects build_variance_grid on [0, S]

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

TimeGrid make_grid(const ModelParams& p, const GridSpec& spec);

struct McConfig {
    ModelParams params;
    GridSpec grid;
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;  ///< never affects results

    void validate() const;
};

enum class RuinMode { classical, parisian };

/// Per-path outcomes, path i simulated from stream (seed, i). With `classical_only`
/// the Parisian fields are unspecified.
std::vector<RuinOutcome> simulate_outcomes(const McConfig& cfg, bool classical_only = false);

/// Fraction of ruined paths, binomial standard error, Wilson interval.
Estimate estimate_ruin_prob(const McConfig& cfg, RuinMode mode);

struct RuinTimeTailRow {
    double x = 0.0;
    double empirical_tail = 0.0;  ///< fraction of ruined paths with u^2 (S + T_u - eta) >= x
    Estimate estimate;            ///< same value with conditional-sample uncertainty
    double theory_tail = 0.0;     ///< ruin_time_tail_asymptotic(params, x)
};

struct RuinTimeTail {
    std::size_t paths = 0;
    std::size_t ruined = 0;
    std::vector<RuinTimeTailRow> rows;  ///< ascending in x
    double sup_distance = 0.0;          ///< max |empirical - theory| over rows
    std::string diagnostic;             ///< non-empty when no path was ruined
};

/// Empirical conditional law of u^2 (S + T_u - eta) given Parisian ruin
/// (eta = tau when T_u = 0).
RuinTimeTail estimate_ruin_time_tail(const McConfig& cfg, std::span<const double> xs);

struct StudyRow {
    double u = 0.0;
    Estimate mc;
    double asymptotic = 0.0;
    std::optional<double> ratio;     ///< mc / asymptotic; absent when mc == 0
    std::optional<double> ratio_se;  ///< se / asymptotic
    std::optional<double> exact;     ///< closed form when delta == 0 and T_u == 0
    std::size_t grid_nodes = 0;
};

/// Parisian ruin estimate against parisian_asymptotic for each u, under common
/// random numbers. Per u the fine window follows default_fine_window and, when
/// T_u > 0, the fine step is capped at T_u / 8.
std::vector<StudyRow> convergence_study(const McConfig& base, std::span<const double> u_schedule,
                                        double piterbarg_value);

}  // namespace ruinlab
