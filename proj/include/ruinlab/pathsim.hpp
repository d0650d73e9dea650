#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ruinlab/gaussian.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {

enum class GridPolicy { uniform, adaptive, variance_uniform };

/// Strictly increasing observation times 0 = t_0 < ... < t_n = S + T_u, with S
/// always a node.
struct TimeGrid {
    std::vector<double> nodes;
    GridPolicy policy = GridPolicy::uniform;
    std::size_t horizon_index = 0;  ///< index of the node equal to S
    double tol = 1e-12;             ///< absolute tolerance for time comparisons

    std::size_t size() const { return nodes.size(); }
    double horizon() const { return nodes[horizon_index]; }
    double end() const { return nodes.back(); }
};

/// Upper bound on grid size; larger requests are configuration errors.
inline constexpr std::size_t kMaxGridNodes = 50'000'000;

/// Default width of the fine region before S: min(S, max(10 / u^2, 0.05 S)).
double default_fine_window(const ModelParams& p);

/// Nodes every `base_step` on [0, S - fine_window], every `fine_step` on
/// [S - fine_window, S + T_u]. Requires 0 < fine_step <= base_step,
/// 0 <= fine_window <= S and, when T_u > 0, fine_step <= T_u / 8.
TimeGrid build_grid(const ModelParams& p, double base_step, double fine_step, double fine_window);

/// build_grid with a single step everywhere.
TimeGrid build_uniform_grid(const ModelParams& p, double step);

/// `steps` nodes on [0, S] placed so that every increment of
/// X(t) = sigma int_0^t e^{-delta z} dB(z) carries the same variance, followed
/// by nodes every `tail_step` on (S, S + T_u]. Reduces to a uniform grid for
/// delta == 0.
TimeGrid build_variance_grid(const ModelParams& p, std::size_t steps, double tail_step);

/// Exact Gaussian transition law of the discounted claim surplus
///   L(s) = X(s) - c int_0^s e^{-delta z} dz
/// between consecutive grid nodes.
struct IncrementLaw {
    std::vector<double> mean;    ///< mean[k]: E[L(t_k) - L(t_{k-1})], mean[0] = 0
    std::vector<double> stddev;  ///< stddev[k]: sd of the same increment, stddev[0] = 0
};

IncrementLaw increment_law(const ModelParams& p, const TimeGrid& grid);

/// Var X(t) = sigma^2 / (2 delta) (1 - e^{-2 delta t}), or sigma^2 t for delta == 0.
double claim_variance(const ModelParams& p, double t);

/// Values of L on a grid. Ruin of the original process at time t is the event
/// L(t) > u.
struct PathSample {
    TimeGrid grid;
    std::vector<double> L;
};

PathSample simulate_path(const ModelParams& p, const TimeGrid& grid, StreamKey key);

struct RuinOutcome {
    bool classical_ruined = false;
    std::optional<double> tau;
    bool parisian_ruined = false;
    std::optional<double> eta;

    friend bool operator==(const RuinOutcome&, const RuinOutcome&) = default;
};

/// Single forward pass over a path. Classical ruin is the first node t <= S
/// with L > u. Parisian ruin is the first node t <= S opening a window
/// [t, t + T_u] whose nodes all satisfy L > u; then eta = t + T_u.
RuinOutcome detect_ruin(const PathSample& path, const ModelParams& p);

/// Same contract as detect_ruin by direct enumeration of every window,
/// O(n * w). Test oracle.
RuinOutcome detect_ruin_bruteforce(const PathSample& path, const ModelParams& p);

/// Streaming form of detect_ruin: feed L at nodes 0, 1, 2, ... in order.
class RuinScanner {
public:
    RuinScanner(const TimeGrid& grid, double u, double T_u) noexcept
        : grid_(&grid), u_(u), T_u_(T_u), s_limit_(grid.horizon() + grid.tol) {}

    /// Returns true once no later node can change the outcome.
    bool push(std::size_t j, double L) noexcept;

    const RuinOutcome& outcome() const noexcept { return out_; }

private:
    const TimeGrid* grid_;
    double u_;
    double T_u_;
    double s_limit_;
    bool run_active_ = false;
    double run_start_ = 0.0;
    double run_end_ = 0.0;
    bool done_ = false;
    RuinOutcome out_;
};

/// Precomputed grid and transition law for repeated path simulation under
/// one parameter set.
class PathSimulator {
public:
    PathSimulator(const ModelParams& p, TimeGrid grid);

    const ModelParams& params() const noexcept { return params_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    const IncrementLaw& law() const noexcept { return law_; }

    PathSample simulate(StreamKey key) const;

    /// Simulates and scans in one pass, drawing only as many variates as the
    /// outcome needs. Equals detect_ruin(simulate(key), params()). With
    /// `classical_only`, stops at the first exceedance; the Parisian fields
    /// are then unspecified.
    RuinOutcome simulate_outcome(StreamKey key, bool classical_only = false) const;

private:
    ModelParams params_;
    TimeGrid grid_;
    IncrementLaw law_;
};

}  // namespace ruinlab
