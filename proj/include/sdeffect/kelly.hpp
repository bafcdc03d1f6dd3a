#pragma once

// Kelly betting on a two-outcome game: growth-rate moments for a known
// advantage, a numeric optimality check, the first-order correction when the
// advantage is itself random at bet time, and the long-run hand count.

#include "sdeffect/error.hpp"

#include <cmath>
#include <string>

namespace sdeffect {

/// Expected exponential growth rate E(G_1) and Var(G_1); Var(G_n) = Var(G_1) / n.
struct GrowthStats {
    double mean = 0.0;
    double variance = 0.0;

    double variance_after(double hands) const { return variance / hands; }
    double stddev_after(double hands) const { return std::sqrt(variance / hands); }
};

/// Per-round win probability known only in law: mean p0 and Var(p0(x)).
struct FuzzyAdvantage {
    double p0 = 0.5;
    double var_p0 = 0.0;
};

inline FuzzyAdvantage make_fuzzy_advantage(double p0, double var_p0) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "p0 must lie in (0, 1)");
    }
    if (!(var_p0 >= 0.0) || var_p0 > p0 * (1.0 - p0)) {
        throw Error(ErrorKind::OutOfRange, "var_p0 must lie in [0, p0 (1 - p0)]");
    }
    return FuzzyAdvantage{p0, var_p0};
}

/// Advantage p0 = 1/2 + eps whose standard deviation is eps * sigma_bet, i.e.
/// sigma_bet measured in units of the edge.
inline FuzzyAdvantage fuzzy_from_edge(double eps, double sigma_bet) {
    return make_fuzzy_advantage(0.5 + eps, eps * eps * sigma_bet * sigma_bet);
}

/// max(0, 2p - 1).
inline double kelly_fraction(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::OutOfRange, "win probability must lie in [0, 1]");
    }
    return p > 0.5 ? 2.0 * p - 1.0 : 0.0;
}

/// Expected log growth of one round betting fraction f at win probability p.
inline double log_growth(double p, double f) { return p * std::log1p(f) + (1.0 - p) * std::log1p(-f); }

inline GrowthStats growth_stats_binomial(double p) {
    if (!(p > 0.5 && p < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "growth statistics need 1/2 < p < 1");
    }
    const double q = 1.0 - p;
    const double logit = std::log(p / q);
    return GrowthStats{p * std::log(2.0 * p) + q * std::log(2.0 - 2.0 * p), p * q * logit * logit};
}

struct KellyOptimalityReport {
    double p0 = 0.0;
    double argmax = 0.0;
    double kelly = 0.0;
    double abs_error = 0.0;
    double second_difference = 0.0;
    int iterations = 0;
    bool passed = false;
};

/// Golden-section search for the maximizer of f -> p0 log(1+f) + (1-p0) log(1-f)
/// on [0, 1 - delta], compared against 2 p0 - 1, plus a concavity probe there.
inline KellyOptimalityReport verify_kelly_optimality(double p0, double tolerance = 1e-6) {
    if (!(p0 > 0.5 && p0 < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "optimality check needs 1/2 < p0 < 1");
    }
    constexpr double delta = 1e-9;
    constexpr double xtol = 1e-11;
    constexpr int max_iterations = 500;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto objective = [p0](double f) { return log_growth(p0, f); };

    double lo = 0.0;
    double hi = 1.0 - delta;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    int it = 0;
    while (hi - lo > xtol) {
        if (++it > max_iterations) {
            throw Error(ErrorKind::ConvergenceFailure, "golden-section search did not converge");
        }
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d);
        }
    }

    KellyOptimalityReport report;
    report.p0 = p0;
    report.argmax = 0.5 * (lo + hi);
    report.kelly = kelly_fraction(p0);
    report.abs_error = std::abs(report.argmax - report.kelly);
    const double h = std::min(1e-4, 0.5 * (1.0 - delta - report.argmax));
    report.second_difference =
        objective(report.argmax + h) - 2.0 * objective(report.argmax) + objective(report.argmax - h);
    report.iterations = it;
    report.passed = report.abs_error < tolerance && report.second_difference < 0.0;
    return report;
}

/// First order in Var(p0(x)):
///   Var(G_1) = p0 q0 log^2(p0/q0) + (1 - (2p0 - 1) log(p0/q0)) Var(p0(x)) / (p0 q0)
///   E(G_1)   = p0 log(2p0) + q0 log(2q0) + Var(p0(x)) / (2 p0 q0)
inline GrowthStats growth_var_fuzzy(const FuzzyAdvantage& adv) {
    if (!(adv.p0 > 0.5 && adv.p0 < 1.0) || !(adv.var_p0 >= 0.0)) {
        throw Error(ErrorKind::OutOfRange, "fuzzy growth needs 1/2 < p0 < 1 and var_p0 >= 0");
    }
    const GrowthStats base = growth_stats_binomial(adv.p0);
    const double pq = adv.p0 * (1.0 - adv.p0);
    const double logit = std::log(adv.p0 / (1.0 - adv.p0));
    return GrowthStats{base.mean + adv.var_p0 / (2.0 * pq),
                       base.variance + (1.0 - (2.0 * adv.p0 - 1.0) * logit) * adv.var_p0 / pq};
}

/// Hands needed for E(G_N) / sigma(G_N) >= threshold: threshold^2 (1 + sigma_bet^2) / eps^2.
inline double long_run(double eps, double sigma_bet, double threshold = 2.0) {
    if (!(eps > 0.0) || !(sigma_bet >= 0.0) || !(threshold > 0.0)) {
        throw Error(ErrorKind::OutOfRange, "long run needs eps > 0, sigma_bet >= 0, threshold > 0");
    }
    const double ratio = threshold / eps;
    return ratio * ratio * (1.0 + sigma_bet * sigma_bet);
}

/// Integer presentation of long_run; ignores round-off below 1e-9 relative.
inline long long long_run_hands(double eps, double sigma_bet, double threshold = 2.0) {
    const double n = long_run(eps, sigma_bet, threshold);
    return static_cast<long long>(std::ceil(n * (1.0 - 1e-12) - 1e-9));
}

} // namespace sdeffect
