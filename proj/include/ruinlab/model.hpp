#pragma once

namespace ruinlab {

/// Brownian risk model with constant force of interest
///   R(t) = e^{delta t} (u + c int_0^t e^{-delta s} ds - sigma int_0^t e^{-delta s} dB(s))
/// observed on [0, S], with Parisian window T_u = T_scaled / u^2.
struct ModelParams {
    double u = 0.0;         ///< initial reserve
    double c = 1.0;         ///< premium rate
    double sigma = 1.0;     ///< volatility
    double delta = 0.0;     ///< force of interest
    double S = 1.0;         ///< horizon
    double T_scaled = 0.0;  ///< u^2 T_u

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;

    /// Parisian window length T_scaled / u^2 (zero when T_scaled is zero).
    double T_u() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Rates of the limiting exponential laws and of the Piterbarg argument.
struct AsymptoticParams {
    double a = 0.0;  ///< 2 delta^2 e^{-2 delta S} / (sigma^2 (1 - e^{-2 delta S})^2); zero if delta == 0
    double b = 0.0;  ///< 1 / (2 sigma^2 S^2)
};

AsymptoticParams asymptotic_params(const ModelParams& p);

/// Rate entering the Piterbarg constant and the ruin-time law: a for
/// delta > 0, b for delta == 0.
double ruin_time_rate(const ModelParams& p);

/// Infinite-horizon ruin probability for delta > 0.
double psi_inf_delta(const ModelParams& p);

/// Infinite-horizon ruin probability for delta == 0: exp(-2 c u / sigma^2).
double psi_inf_zero(const ModelParams& p);

/// Dispatches on delta.
double psi_inf(const ModelParams& p);

/// Exact finite-horizon classical ruin probability for delta == 0
/// (first-passage law of drifted Brownian motion).
double psi_S_zero_exact(const ModelParams& p);

/// Large-u approximation of the Parisian ruin probability on [0, S]:
///   delta > 0:  P(aT) Psi(sqrt(2 delta)(u + c/delta (1 - e^{-delta S})) / (sigma sqrt(1 - e^{-2 delta S})))
///   delta == 0: P(bT) Psi((u + c S) / (sigma sqrt(S)))
/// `piterbarg_value` is the caller's value of P(aT) (resp. P(bT)); P(0) = 2.
double parisian_asymptotic(const ModelParams& p, double piterbarg_value);

/// Argument of Psi in parisian_asymptotic.
double parisian_threshold(const ModelParams& p);

/// Limiting conditional tail P(u^2 (S + T_u - eta) > x | eta <= S + T_u):
/// exp(-a x) for delta > 0, exp(-b x) for delta == 0.
double ruin_time_tail_asymptotic(const ModelParams& p, double x);

}  // namespace ruinlab
