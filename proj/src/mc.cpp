#include "ruinlab/mc.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/format.hpp"

namespace ruinlab {

using detail::require;

namespace {

const char* policy_name(GridPolicy p) {
    switch (p) {
        case GridPolicy::uniform: return "uniform";
        case GridPolicy::adaptive: return "adaptive";
        case GridPolicy::variance_uniform: return "variance_uniform";
    }
    return "unknown";
}

void tag(Estimate& e, const McConfig& cfg, const TimeGrid& grid) {
    e.meta["seed"] = std::to_string(cfg.seed);
    e.meta["grid_policy"] = policy_name(grid.policy);
    e.meta["grid_nodes"] = std::to_string(grid.size());
}

}  // namespace

TimeGrid make_grid(const ModelParams& p, const GridSpec& spec) {
    if (spec.variance_steps > 0) return build_variance_grid(p, spec.variance_steps, spec.fine_step);
    return build_grid(p, spec.base_step, spec.fine_step, spec.fine_window.value_or(default_fine_window(p)));
}

void McConfig::validate() const {
    params.validate();
    require(paths >= 1, "paths must be >= 1");
}

std::vector<RuinOutcome> simulate_outcomes(const McConfig& cfg, bool classical_only) {
    cfg.validate();
    const PathSimulator sim(cfg.params, make_grid(cfg.params, cfg.grid));
    std::vector<RuinOutcome> out(cfg.paths);
    detail::parallel_ranges(cfg.paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = sim.simulate_outcome(StreamKey{cfg.seed, i}, classical_only);
    });
    return out;
}

Estimate estimate_ruin_prob(const McConfig& cfg, RuinMode mode) {
    cfg.validate();
    const PathSimulator sim(cfg.params, make_grid(cfg.params, cfg.grid));
    const bool classical = mode == RuinMode::classical;
    std::vector<unsigned char> hit(cfg.paths, 0);
    detail::parallel_ranges(cfg.paths, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto o = sim.simulate_outcome(StreamKey{cfg.seed, i}, classical);
            hit[i] = classical ? o.classical_ruined : o.parisian_ruined;
        }
    });
    std::size_t successes = 0;
    for (unsigned char h : hit) successes += h;
    Estimate e = proportion_estimate(successes, cfg.paths);
    tag(e, cfg, sim.grid());
    e.meta["mode"] = classical ? "classical" : "parisian";
    return e;
}

RuinTimeTail estimate_ruin_time_tail(const McConfig& cfg, std::span<const double> xs) {
    for (double x : xs) require(std::isfinite(x) && x >= 0.0, "xs must be finite and >= 0");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());

    const auto outcomes = simulate_outcomes(cfg, false);
    const ModelParams& p = cfg.params;
    const double end = p.S + p.T_u();
    const double scale = p.u * p.u;
    std::vector<double> scaled;
    for (const auto& o : outcomes)
        if (o.parisian_ruined) scaled.push_back(scale * (end - *o.eta));

    RuinTimeTail out;
    out.paths = cfg.paths;
    out.ruined = scaled.size();
    if (scaled.empty()) {
        out.diagnostic = "no ruined paths among " + std::to_string(cfg.paths) + "; conditional law undefined";
        return out;
    }
    std::sort(scaled.begin(), scaled.end());
    for (double x : sorted) {
        // Count of ruined paths with scaled >= x.
        const auto above = static_cast<std::size_t>(scaled.end() - std::lower_bound(scaled.begin(), scaled.end(), x));
        RuinTimeTailRow row;
        row.x = x;
        row.estimate = proportion_estimate(above, scaled.size());
        row.estimate.meta["seed"] = std::to_string(cfg.seed);
        row.empirical_tail = row.estimate.value;
        row.theory_tail = ruin_time_tail_asymptotic(p, x);
        out.sup_distance = std::max(out.sup_distance, std::abs(row.empirical_tail - row.theory_tail));
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<StudyRow> convergence_study(const McConfig& base, std::span<const double> u_schedule,
                                        double piterbarg_value) {
    require(!u_schedule.empty(), "u schedule must not be empty");
    for (std::size_t i = 0; i < u_schedule.size(); ++i) {
        require(std::isfinite(u_schedule[i]) && u_schedule[i] > 0.0, "u values must be > 0");
        require(i == 0 || u_schedule[i] > u_schedule[i - 1], "u schedule must be increasing");
    }
    require(std::isfinite(piterbarg_value) && piterbarg_value > 0.0, "piterbarg value must be > 0");

    std::vector<StudyRow> rows;
    for (double u : u_schedule) {
        McConfig cfg = base;
        cfg.params.u = u;
        cfg.params.validate();
        const double T_u = cfg.params.T_u();
        if (cfg.grid.variance_steps == 0) cfg.grid.fine_window = default_fine_window(cfg.params);
        if (T_u > 0.0) {
            cfg.grid.fine_step = std::min(cfg.grid.fine_step, T_u / 8.0);
            cfg.grid.base_step = std::max(cfg.grid.base_step, cfg.grid.fine_step);
        }
        StudyRow row;
        row.u = u;
        row.mc = estimate_ruin_prob(cfg, RuinMode::parisian);
        row.mc.meta["u"] = format_g17(u);
        row.grid_nodes = std::stoul(row.mc.meta["grid_nodes"]);
        row.asymptotic = parisian_asymptotic(cfg.params, piterbarg_value);
        if (row.mc.value > 0.0 && row.asymptotic > 0.0) {
            row.ratio = row.mc.value / row.asymptotic;
            row.ratio_se = row.mc.std_error / row.asymptotic;
        }
        if (cfg.params.delta == 0.0 && T_u == 0.0) row.exact = psi_S_zero_exact(cfg.params);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ruinlab
