#include "ruinlab/pathsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ruinlab/errors.hpp"

namespace ruinlab {

using detail::require;

namespace {

double time_tolerance(double span) { return 1e-12 * std::max(1.0, span); }

// Appends from + k * step for k = 1, 2, ... while below `to`, then `to` itself.
void append_segment(std::vector<double>& nodes, double from, double to, double step, double tol) {
    for (std::size_t k = 1;; ++k) {
        const double t = from + static_cast<double>(k) * step;
        if (t >= to - tol) break;
        nodes.push_back(t);
    }
    if (to > nodes.back() + tol) nodes.push_back(to);
}

void check_size(double estimate) {
    require(estimate < static_cast<double>(kMaxGridNodes),
            "grid would exceed " + std::to_string(kMaxGridNodes) + " nodes");
}

inline double advance(double L, double mean, double sd, double z) noexcept { return L + mean + sd * z; }

}  // namespace

double default_fine_window(const ModelParams& p) {
    if (p.u <= 0.0) return p.S;
    return std::min(p.S, std::max(10.0 / (p.u * p.u), 0.05 * p.S));
}

TimeGrid build_grid(const ModelParams& p, double base_step, double fine_step, double fine_window) {
    p.validate();
    const double T_u = p.T_u();
    require(std::isfinite(fine_step) && fine_step > 0.0, "fine_step must be > 0");
    require(std::isfinite(base_step) && base_step >= fine_step, "base_step must be >= fine_step");
    require(std::isfinite(fine_window) && fine_window >= 0.0 && fine_window <= p.S,
            "fine_window must lie in [0, S]");
    require(T_u == 0.0 || fine_step <= T_u / 8.0,
            "fine_step must be <= T_u / 8 so every Parisian window holds at least 8 nodes");

    const double coarse_end = p.S - fine_window;
    check_size(coarse_end / base_step + (fine_window + T_u) / fine_step + 4.0);

    TimeGrid grid;
    grid.tol = time_tolerance(p.S + T_u);
    grid.policy = (fine_step == base_step || fine_window == p.S) ? GridPolicy::uniform : GridPolicy::adaptive;
    auto& nodes = grid.nodes;
    nodes.reserve(static_cast<std::size_t>(coarse_end / base_step + (fine_window + T_u) / fine_step) + 4);
    nodes.push_back(0.0);
    if (coarse_end > 0.0) append_segment(nodes, 0.0, coarse_end, base_step, grid.tol);
    append_segment(nodes, coarse_end, p.S, fine_step, grid.tol);
    grid.horizon_index = nodes.size() - 1;
    if (T_u > 0.0) append_segment(nodes, p.S, p.S + T_u, fine_step, grid.tol);
    return grid;
}

TimeGrid build_uniform_grid(const ModelParams& p, double step) { return build_grid(p, step, step, p.S); }

TimeGrid build_variance_grid(const ModelParams& p, std::size_t steps, double tail_step) {
    p.validate();
    const double T_u = p.T_u();
    require(steps >= 1, "variance grid needs at least one step");
    require(T_u == 0.0 || (std::isfinite(tail_step) && tail_step > 0.0 && tail_step <= T_u / 8.0),
            "tail_step must lie in (0, T_u / 8]");
    check_size(static_cast<double>(steps) + (T_u > 0.0 ? T_u / tail_step : 0.0) + 2.0);

    TimeGrid grid;
    grid.tol = time_tolerance(p.S + T_u);
    grid.policy = GridPolicy::variance_uniform;
    auto& nodes = grid.nodes;
    nodes.reserve(steps + 1);
    nodes.push_back(0.0);
    const double n = static_cast<double>(steps);
    if (p.delta == 0.0) {
        for (std::size_t k = 1; k < steps; ++k) nodes.push_back(p.S * (static_cast<double>(k) / n));
    } else {
        // V(t) = (1 - e^{-2 delta t}) / (2 delta), inverted at equally spaced levels.
        const double v_end = -std::expm1(-2.0 * p.delta * p.S);
        for (std::size_t k = 1; k < steps; ++k) {
            const double level = v_end * (static_cast<double>(k) / n);
            nodes.push_back(-std::log1p(-level) / (2.0 * p.delta));
        }
    }
    nodes.push_back(p.S);
    grid.horizon_index = nodes.size() - 1;
    if (T_u > 0.0) append_segment(nodes, p.S, p.S + T_u, tail_step, grid.tol);
    return grid;
}

double claim_variance(const ModelParams& p, double t) {
    if (p.delta == 0.0) return p.sigma * p.sigma * t;
    return p.sigma * p.sigma / (2.0 * p.delta) * -std::expm1(-2.0 * p.delta * t);
}

IncrementLaw increment_law(const ModelParams& p, const TimeGrid& grid) {
    const std::size_t n = grid.size();
    IncrementLaw law;
    law.mean.assign(n, 0.0);
    law.stddev.assign(n, 0.0);
    const double s2 = p.sigma * p.sigma;
    for (std::size_t k = 1; k < n; ++k) {
        const double t0 = grid.nodes[k - 1];
        const double dt = grid.nodes[k] - t0;
        if (p.delta == 0.0) {
            law.mean[k] = -p.c * dt;
            law.stddev[k] = p.sigma * std::sqrt(dt);
        } else {
            law.mean[k] = -(p.c / p.delta) * std::exp(-p.delta * t0) * -std::expm1(-p.delta * dt);
            const double var =
                s2 / (2.0 * p.delta) * std::exp(-2.0 * p.delta * t0) * -std::expm1(-2.0 * p.delta * dt);
            law.stddev[k] = std::sqrt(var);
        }
    }
    return law;
}

PathSimulator::PathSimulator(const ModelParams& p, TimeGrid grid)
    : params_(p), grid_(std::move(grid)) {
    params_.validate();
    require(grid_.size() >= 2 && grid_.nodes.front() == 0.0, "grid must start at 0 and hold >= 2 nodes");
    require(std::abs(grid_.horizon() - p.S) <= grid_.tol, "grid horizon node must equal S");
    require(std::abs(grid_.end() - (p.S + p.T_u())) <= grid_.tol, "grid must end at S + T_u");
    law_ = increment_law(params_, grid_);
}

PathSample PathSimulator::simulate(StreamKey key) const {
    const std::size_t n = grid_.size();
    PathSample path{grid_, std::vector<double>(n, 0.0)};
    NormalStream z(key);
    double L = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        L = advance(L, law_.mean[k], law_.stddev[k], z.next());
        path.L[k] = L;
    }
    return path;
}

RuinOutcome PathSimulator::simulate_outcome(StreamKey key, bool classical_only) const {
    const std::size_t n = grid_.size();
    RuinScanner scanner(grid_, params_.u, params_.T_u());
    if (scanner.push(0, 0.0)) return scanner.outcome();
    NormalStream z(key);
    const double* mean = law_.mean.data();
    const double* sd = law_.stddev.data();
    double L = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        L = advance(L, mean[k], sd[k], z.next());
        if (scanner.push(k, L)) break;
        if (classical_only && scanner.outcome().classical_ruined) break;
    }
    return scanner.outcome();
}

PathSample simulate_path(const ModelParams& p, const TimeGrid& grid, StreamKey key) {
    return PathSimulator(p, grid).simulate(key);
}

bool RuinScanner::push(std::size_t j, double L) noexcept {
    const auto& nodes = grid_->nodes;
    const std::size_t n = nodes.size();
    const double t = nodes[j];
    if (L > u_) {
        if (!out_.classical_ruined && t <= s_limit_) {
            out_.classical_ruined = true;
            out_.tau = t;
        }
        if (!run_active_ && t <= s_limit_) {
            run_active_ = true;
            run_start_ = t;
            run_end_ = t + T_u_ + grid_->tol;
        }
        if (run_active_ && (j + 1 == n || nodes[j + 1] > run_end_)) {
            out_.parisian_ruined = true;
            out_.eta = run_start_ + T_u_;
            done_ = true;
            return true;
        }
    } else {
        run_active_ = false;
    }
    if (j + 1 == n || (t > s_limit_ && !run_active_)) done_ = true;
    return done_;
}

RuinOutcome detect_ruin(const PathSample& path, const ModelParams& p) {
    require(path.L.size() == path.grid.size(), "path values and grid differ in length");
    RuinScanner scanner(path.grid, p.u, p.T_u());
    for (std::size_t j = 0; j < path.L.size(); ++j) {
        if (scanner.push(j, path.L[j])) break;
    }
    return scanner.outcome();
}

RuinOutcome detect_ruin_bruteforce(const PathSample& path, const ModelParams& p) {
    require(path.L.size() == path.grid.size(), "path values and grid differ in length");
    const auto& t = path.grid.nodes;
    const auto& L = path.L;
    const double T_u = p.T_u();
    const double s_limit = path.grid.horizon() + path.grid.tol;
    RuinOutcome out;
    for (std::size_t k = 0; k < t.size() && t[k] <= s_limit; ++k) {
        if (L[k] > p.u) {
            out.classical_ruined = true;
            out.tau = t[k];
            break;
        }
    }
    for (std::size_t i = 0; i < t.size() && t[i] <= s_limit; ++i) {
        const double window_end = t[i] + T_u + path.grid.tol;
        bool all_above = true;
        for (std::size_t k = i; k < t.size() && t[k] <= window_end; ++k) {
            if (!(L[k] > p.u)) {
                all_above = false;
                break;
            }
        }
        if (all_above) {
            out.parisian_ruined = true;
            out.eta = t[i] + T_u;
            break;
        }
    }
    return out;
}

}  // namespace ruinlab
