#include <gtest/gtest.h>

#include <cmath>

#include "normal_oracle.hpp"
#include "ruinlab/errors.hpp"
#include "ruinlab/gaussian.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {
namespace {

using testing::oracle_cdf;
using testing::oracle_tail;

ModelParams params(double u, double c, double sigma, double delta, double S = 1.0, double T = 0.0) {
    return ModelParams{u, c, sigma, delta, S, T};
}

TEST(ModelParams, ValidationNamesTheInvariant) {
    EXPECT_NO_THROW(params(1, 1, 1, 0).validate());
    try {
        params(1, 0, 1, 0).validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("c must"), std::string::npos);
    }
    EXPECT_THROW(params(-1, 1, 1, 0).validate(), ConfigError);
    EXPECT_THROW(params(1, 1, 0, 0).validate(), ConfigError);
    EXPECT_THROW(params(1, 1, 1, -0.1).validate(), ConfigError);
    EXPECT_THROW(params(1, 1, 1, 0, 0).validate(), ConfigError);
    EXPECT_THROW(params(1, 1, 1, 0, 1, -1).validate(), ConfigError);
    EXPECT_THROW(params(0, 1, 1, 0, 1, 1).validate(), ConfigError);
}

TEST(ModelParams, ParisianWindowScalesExactly) {
    for (double u : {0.5, 1.0, 3.0, 17.0}) {
        const auto p = params(u, 1, 1, 0, 1, 2.5);
        EXPECT_DOUBLE_EQ(p.T_u() * u * u, 2.5);
    }
    EXPECT_EQ(params(0, 1, 1, 0).T_u(), 0.0);
}

TEST(AsymptoticParams, ClosedFormValues) {
    // delta = 1, sigma = 1, S = 1: a = 2 e^{-2} / (1 - e^{-2})^2.
    const auto ab = asymptotic_params(params(1, 1, 1, 1));
    EXPECT_NEAR(ab.a, 0.3620308304831552332, 1e-15);
    EXPECT_DOUBLE_EQ(ab.b, 0.5);
    EXPECT_GT(ab.a, 0.0);
    EXPECT_EQ(asymptotic_params(params(1, 1, 1, 0)).a, 0.0);
    EXPECT_DOUBLE_EQ(asymptotic_params(params(1, 1, 2, 0, 3)).b, 1.0 / 72.0);
}

TEST(AsymptoticParams, RateAApproachesBAsDeltaVanishes) {
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (double S : {0.5, 1.0, 4.0}) {
            const double b = asymptotic_params(params(1, 1, sigma, 0, S)).b;
            EXPECT_NEAR(asymptotic_params(params(1, 1, sigma, 1e-6, S)).a / b, 1.0, 1e-5);
            EXPECT_NEAR(asymptotic_params(params(1, 1, sigma, 1e-9, S)).a / b, 1.0, 1e-6);
        }
    }
}

TEST(PsiInfDelta, Values) {
    EXPECT_DOUBLE_EQ(psi_inf_delta(params(0, 1, 1, 1)), 1.0);
    const double ref = static_cast<double>(oracle_tail(2.0L * std::sqrt(2.0L)) / oracle_tail(std::sqrt(2.0L)));
    EXPECT_NEAR(ref, 0.029737816666500396543, 1e-15);
    EXPECT_NEAR(psi_inf_delta(params(1, 1, 1, 1)), ref, 1e-12);
    double prev = 1.0;
    for (double u = 0.1; u < 20; u += 0.1) {
        const double v = psi_inf_delta(params(u, 1, 1, 1));
        ASSERT_LT(v, prev);
        prev = v;
    }
    EXPECT_THROW(psi_inf_delta(params(1, 1, 1, 0)), DomainError);
}

TEST(PsiInfDelta, SmallDeltaUsesLogTailsInsteadOfUnderflowing) {
    // Denominator Psi(sqrt(2 c^2 / (sigma^2 delta))) underflows for delta = 1e-4.
    const double v = psi_inf_delta(params(1, 1, 1, 1e-4));
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, psi_inf_zero(params(1, 1, 1, 0)), 2e-3);
}

TEST(PsiInfZero, Values) {
    EXPECT_EQ(psi_inf_zero(params(0, 1, 1, 0)), 1.0);
    EXPECT_NEAR(psi_inf_zero(params(1, 1, std::sqrt(2.0), 0)), 0.36787944117144233, 1e-15);
    EXPECT_NEAR(psi_inf_zero(params(2, 1, 1, 0)), 0.018315638888734179, 1e-15);
    EXPECT_THROW(psi_inf_zero(params(1, 1, 1, 0.5)), DomainError);
}

TEST(PsiSZeroExact, Values) {
    EXPECT_NEAR(psi_S_zero_exact(params(0, 1, 1, 0)), 1.0, 1e-15);
    const double ref = static_cast<double>(oracle_tail(2.0L) + std::exp(-2.0L) * oracle_cdf(0.0L));
    EXPECT_NEAR(ref, 0.090417773566485553147, 1e-15);
    EXPECT_NEAR(psi_S_zero_exact(params(1, 1, 1, 0)), ref, 1e-12);
    EXPECT_THROW(psi_S_zero_exact(params(1, 1, 1, 1)), DomainError);
}

TEST(PsiSZeroExact, RatioToTwoPsiTendsToOne) {
    double prev_gap = INFINITY;
    for (double u : {2.0, 5.0, 10.0, 20.0, 30.0}) {
        const auto p = params(u, 1, 1, 0);
        const double gap = std::abs(psi_S_zero_exact(p) / (2.0 * normal_tail((u + 1.0) / 1.0)) - 1.0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 0.1);
}

TEST(PsiSZeroExact, MonotoneInUAndSAndBelowInfiniteHorizon) {
    for (double S : {0.25, 1.0, 3.0}) {
        double prev = 2.0;
        for (double u = 0.0; u <= 6.0; u += 0.05) {
            const auto p = params(u, 1, 1, 0, S);
            const double v = psi_S_zero_exact(p);
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
            ASSERT_LE(v, psi_inf_zero(p) + 1e-15);
            if (u > 0) ASSERT_LT(v, prev);
            prev = v;
        }
    }
    for (double u : {0.5, 1.0, 2.0}) {
        double prev = 0.0;
        for (double S = 0.1; S <= 5.0; S += 0.1) {
            const double v = psi_S_zero_exact(params(u, 1, 1, 0, S));
            ASSERT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(ParisianAsymptotic, ReducesToTwoPsiAtZeroWindow) {
    const auto pd = params(3, 1, 1, 0.5, 2);
    const double arg = std::sqrt(2 * 0.5) * (3 + (1 / 0.5) * (1 - std::exp(-0.5 * 2))) /
                       (1 * std::sqrt(1 - std::exp(-2 * 0.5 * 2)));
    EXPECT_NEAR(parisian_asymptotic(pd, 2.0) / (2.0 * normal_tail(arg)), 1.0, 1e-13);

    const auto p0 = params(3, 1, 1, 0, 2);
    EXPECT_NEAR(parisian_asymptotic(p0, 2.0) / (2.0 * normal_tail((3 + 2) / std::sqrt(2.0))), 1.0, 1e-14);
}

TEST(ParisianAsymptotic, SmallerConstantGivesSmallerValue) {
    const auto p = params(2, 1, 1, 0.3, 1, 1.0);
    EXPECT_LE(parisian_asymptotic(p, 1.4), parisian_asymptotic(p, 2.0));
}

TEST(ParisianAsymptotic, ContinuousInDeltaAtZero) {
    for (double u : {0.5, 2.0, 5.0}) {
        for (double S : {0.5, 1.0, 3.0}) {
            const double at_zero = parisian_asymptotic(params(u, 1.3, 0.7, 0, S), 2.0);
            const double near_zero = parisian_asymptotic(params(u, 1.3, 0.7, 1e-9, S), 2.0);
            EXPECT_NEAR(near_zero / at_zero, 1.0, 1e-5) << u << " " << S;
        }
    }
}

TEST(ParisianAsymptotic, Errors) {
    EXPECT_THROW(parisian_asymptotic(params(1, 1, 1, 0), 0.0), DomainError);
    EXPECT_THROW(parisian_asymptotic(params(1, 1, 1, 0), -1.0), DomainError);
    EXPECT_THROW(parisian_asymptotic(params(0, 1, 1, 0), 2.0), DomainError);
}

TEST(RuinTimeTailAsymptotic, Values) {
    EXPECT_EQ(ruin_time_tail_asymptotic(params(1, 1, 1, 0), 0.0), 1.0);
    EXPECT_NEAR(ruin_time_tail_asymptotic(params(1, 1, 1, 0), 2.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(ruin_time_tail_asymptotic(params(1, 1, 1, 1), 1.0), 0.69626090145086923759, 1e-14);
    EXPECT_THROW(ruin_time_tail_asymptotic(params(1, 1, 1, 0), -0.1), DomainError);
}

TEST(Formulas, OutputsAreProbabilities) {
    for (double u : {0.0, 0.3, 1.0, 4.0, 12.0}) {
        for (double delta : {0.0, 0.01, 1.0, 5.0}) {
            const auto p = params(u, 0.8, 1.2, delta, 1.5);
            const double inf = psi_inf(p);
            EXPECT_GE(inf, 0.0);
            EXPECT_LE(inf, 1.0);
            if (delta == 0.0) {
                const double fin = psi_S_zero_exact(p);
                EXPECT_GE(fin, 0.0);
                EXPECT_LE(fin, 1.0);
            }
            EXPECT_LE(ruin_time_tail_asymptotic(p, 0.7), 1.0);
        }
    }
}

}  // namespace
}  // namespace ruinlab
