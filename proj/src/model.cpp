#include "ruinlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ruinlab/errors.hpp"
#include "ruinlab/gaussian.hpp"

namespace ruinlab {

using detail::require;
using detail::require_domain;

void ModelParams::validate() const {
    require(std::isfinite(u) && u >= 0.0, "u must be finite and >= 0");
    require(std::isfinite(c) && c > 0.0, "c must be finite and > 0");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be finite and > 0");
    require(std::isfinite(delta) && delta >= 0.0, "delta must be finite and >= 0");
    require(std::isfinite(S) && S > 0.0, "S must be finite and > 0");
    require(std::isfinite(T_scaled) && T_scaled >= 0.0, "T_scaled must be finite and >= 0");
    require(T_scaled == 0.0 || u > 0.0, "T_scaled > 0 requires u > 0 (T_u = T_scaled / u^2)");
}

double ModelParams::T_u() const {
    if (T_scaled == 0.0) return 0.0;
    return T_scaled / (u * u);
}

AsymptoticParams asymptotic_params(const ModelParams& p) {
    p.validate();
    AsymptoticParams out;
    out.b = 1.0 / (2.0 * p.sigma * p.sigma * p.S * p.S);
    if (p.delta > 0.0) {
        const double one_minus = -std::expm1(-2.0 * p.delta * p.S);
        out.a = 2.0 * p.delta * p.delta * std::exp(-2.0 * p.delta * p.S) /
                (p.sigma * p.sigma * one_minus * one_minus);
    }
    return out;
}

double ruin_time_rate(const ModelParams& p) {
    const auto ab = asymptotic_params(p);
    return p.delta > 0.0 ? ab.a : ab.b;
}

double psi_inf_delta(const ModelParams& p) {
    p.validate();
    require_domain(p.delta > 0.0, "psi_inf_delta requires delta > 0; use psi_inf_zero");
    const double shift = std::sqrt(2.0 * p.c * p.c / (p.sigma * p.sigma * p.delta));
    const double arg = std::sqrt(2.0 * p.delta / (p.sigma * p.sigma)) * p.u + shift;
    const double den = normal_tail(shift);
    if (den > 1e-290) return normal_tail(arg) / den;
    return std::exp(log_normal_tail(arg) - log_normal_tail(shift));
}

double psi_inf_zero(const ModelParams& p) {
    p.validate();
    require_domain(p.delta == 0.0, "psi_inf_zero requires delta == 0; use psi_inf_delta");
    return std::exp(-2.0 * p.c * p.u / (p.sigma * p.sigma));
}

double psi_inf(const ModelParams& p) {
    return p.delta > 0.0 ? psi_inf_delta(p) : psi_inf_zero(p);
}

double psi_S_zero_exact(const ModelParams& p) {
    p.validate();
    require_domain(p.delta == 0.0, "psi_S_zero_exact requires delta == 0");
    const double scale = p.sigma * std::sqrt(p.S);
    const double first = normal_tail((p.u + p.c * p.S) / scale);
    const double second =
        std::exp(-2.0 * p.c * p.u / (p.sigma * p.sigma)) * normal_cdf((p.c * p.S - p.u) / scale);
    return std::min(1.0, first + second);
}

double parisian_threshold(const ModelParams& p) {
    p.validate();
    if (p.delta == 0.0) return (p.u + p.c * p.S) / (p.sigma * std::sqrt(p.S));
    const double drift = p.c / p.delta * -std::expm1(-p.delta * p.S);
    const double var = -std::expm1(-2.0 * p.delta * p.S);
    return std::sqrt(2.0 * p.delta) * (p.u + drift) / (p.sigma * std::sqrt(var));
}

double parisian_asymptotic(const ModelParams& p, double piterbarg_value) {
    require_domain(std::isfinite(piterbarg_value) && piterbarg_value > 0.0,
                   "piterbarg_value must be finite and > 0");
    require_domain(p.u > 0.0, "parisian_asymptotic requires u > 0");
    return piterbarg_value * normal_tail(parisian_threshold(p));
}

double ruin_time_tail_asymptotic(const ModelParams& p, double x) {
    require_domain(std::isfinite(x) && x >= 0.0, "ruin_time_tail_asymptotic requires x >= 0");
    return std::exp(-ruin_time_rate(p) * x);
}

}  // namespace ruinlab
