#include "sdeffect/kelly.hpp"
#include "sdeffect/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sdeffect;

namespace {

// Moments of log(1 + f X) for X = +1 w.p. p, -1 otherwise, straight from the two outcomes.
std::pair<double, double> two_outcome_moments(double p, double f) {
    const double up = std::log(1.0 + f);
    const double down = std::log(1.0 - f);
    const double mean = p * up + (1.0 - p) * down;
    const double second = p * up * up + (1.0 - p) * down * down;
    return {mean, second - mean * mean};
}

} // namespace

TEST(Kelly, FractionClampsAtZero) {
    EXPECT_NEAR(kelly_fraction(0.51), 0.02, 1e-15);
    EXPECT_EQ(kelly_fraction(0.5), 0.0);
    EXPECT_EQ(kelly_fraction(0.3), 0.0);
    EXPECT_THROW(kelly_fraction(1.2), Error);
    EXPECT_THROW(kelly_fraction(std::nan("")), Error);
}

TEST(Kelly, BinomialGrowthAgainstTwoOutcomeOracle) {
    for (double p : {0.505, 0.51, 0.55, 0.6, 0.75, 0.9}) {
        const auto [mean, var] = two_outcome_moments(p, 2.0 * p - 1.0);
        const GrowthStats g = growth_stats_binomial(p);
        EXPECT_NEAR(g.mean, mean, 1e-15) << p;
        EXPECT_NEAR(g.variance, var, 1e-14) << p;
    }
}

TEST(Kelly, SmallEdgeApproximations) {
    const GrowthStats g = growth_stats_binomial(0.51);
    EXPECT_NEAR(g.mean, 2.0 * 0.01 * 0.01, 0.05 * 2e-4);
    EXPECT_NEAR(g.variance, 4.0 * 0.01 * 0.01, 0.05 * 4e-4);
    EXPECT_NEAR(g.stddev_after(10000), 2.0 * 0.01 / 100.0, 1e-6);
    EXPECT_THROW(growth_stats_binomial(0.5), Error);
}

TEST(Kelly, OptimalityOnGrid) {
    for (double p : kelly_grid()) {
        const auto r = verify_kelly_optimality(p);
        EXPECT_TRUE(r.passed) << p << " argmax " << r.argmax;
        EXPECT_LT(r.abs_error, 1e-6);
        EXPECT_LT(r.second_difference, 0.0);
    }
    EXPECT_THROW(verify_kelly_optimality(0.5), Error);
}

TEST(Kelly, FuzzyAgainstTwoPointLaw) {
    // Bettor sizes each hand at the realised p in {p0 - s, p0 + s}.
    const double p0 = 0.51;
    for (double s : {0.002, 0.005, 0.01}) {
        const double var = s * s;
        double mean = 0.0;
        double second = 0.0;
        for (double p : {p0 - s, p0 + s}) {
            const auto [m, v] = two_outcome_moments(p, kelly_fraction(p));
            mean += 0.5 * m;
            second += 0.5 * (v + m * m);
        }
        const GrowthStats fz = growth_var_fuzzy(make_fuzzy_advantage(p0, var));
        // First-order expansion: error is O(var^2 / (p q)^3).
        EXPECT_NEAR(fz.mean, mean, 5e-7) << s;
        EXPECT_NEAR(fz.variance, second - mean * mean, 5e-6 * (1 + var * 1e4)) << s;
        EXPECT_GT(fz.mean, growth_stats_binomial(p0).mean);
    }
}

TEST(Kelly, FuzzyInputValidation) {
    EXPECT_THROW(make_fuzzy_advantage(1.0, 0.0), Error);
    EXPECT_THROW(make_fuzzy_advantage(0.51, -1e-4), Error);
    EXPECT_THROW(make_fuzzy_advantage(0.51, 0.3), Error);
    const FuzzyAdvantage a = fuzzy_from_edge(0.01, 2.0);
    EXPECT_DOUBLE_EQ(a.p0, 0.51);
    EXPECT_DOUBLE_EQ(a.var_p0, 4e-4);
    const GrowthStats zero = growth_var_fuzzy(make_fuzzy_advantage(0.51, 0.0));
    EXPECT_EQ(zero.mean, growth_stats_binomial(0.51).mean);
}

TEST(LongRun, ClosedForm) {
    EXPECT_EQ(long_run(0.01, 0.0, 2.0), 40000.0);
    EXPECT_EQ(long_run_hands(0.01, 0.0), 40000);
    EXPECT_NEAR(long_run(0.01, std::sqrt(0.02), 2.0) - long_run(0.01, 0.0, 2.0), 800.0, 1e-9);
    EXPECT_EQ(long_run(0.02, 0.5) - long_run(0.02, 0.5), 0.0);
    EXPECT_THROW(long_run(0.0, 0.0), Error);
    EXPECT_THROW(long_run(0.01, -1.0), Error);
}

TEST(LongRun, MeanOverSpreadReachesThreshold) {
    // At N = long_run the first-order mean/stddev ratio equals the threshold.
    const double eps = 0.015;
    const double sigma_bet = 0.8;
    const double n = long_run(eps, sigma_bet, 2.0);
    const double mean = 2.0 * eps * eps;
    const double var = 4.0 * eps * eps * (1.0 + sigma_bet * sigma_bet);
    EXPECT_NEAR(mean / std::sqrt(var / n), 2.0, 1e-12);
}

TEST(KellySuite, AllGroupsPass) {
    const auto res = run_kelly_suite();
    for (const auto& c : res.all()) {
        EXPECT_TRUE(c.passed()) << c.name << ": " << c.first_failure;
    }
}
