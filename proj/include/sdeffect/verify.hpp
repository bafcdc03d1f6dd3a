#pragma once

// Property sweeps over the exact checkers; shared by `verify` and the test suites.

#include "sdeffect/counting.hpp"
#include "sdeffect/exact_dist.hpp"
#include "sdeffect/kelly.hpp"
#include "sdeffect/table_sim.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sdeffect {

struct CheckResult {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool passed() const { return failures == 0 && instances > 0; }

    void record(bool ok, const std::function<std::string()>& describe) {
        ++instances;
        if (!ok) {
            if (failures == 0) {
                first_failure = describe();
            }
            ++failures;
        }
    }
};

namespace detail {

/// Every composition l over `weights` with min_total <= sum(l) <= max_total.
inline void for_each_composition(const std::vector<Weight>& weights, int min_total, int max_total,
                                 const std::function<void(const WeightComposition&)>& visit) {
    std::vector<int> counts(weights.size(), 0);
    auto recurse = [&](auto&& self, std::size_t idx, int used) -> void {
        if (idx == weights.size()) {
            if (used >= min_total) {
                std::map<Weight, int> m;
                for (std::size_t i = 0; i < weights.size(); ++i) {
                    m[weights[i]] = counts[i];
                }
                visit(WeightComposition(m));
            }
            return;
        }
        for (int c = 0; used + c <= max_total; ++c) {
            counts[idx] = c;
            self(self, idx + 1, used + c);
        }
        counts[idx] = 0;
    };
    recurse(recurse, 0, 0);
}

/// Every sub-multiset of comp with at most max_size cards, as a removal sequence.
inline void for_each_submultiset(const WeightComposition& comp, int max_size,
                                 const std::function<void(const std::vector<Weight>&)>& visit) {
    std::vector<std::pair<Weight, int>> classes(comp.counts().begin(), comp.counts().end());
    std::vector<Weight> seq;
    auto recurse = [&](auto&& self, std::size_t idx) -> void {
        if (idx == classes.size()) {
            visit(seq);
            return;
        }
        const std::size_t mark = seq.size();
        for (int c = 0; c <= classes[idx].second && static_cast<int>(seq.size()) <= max_size; ++c) {
            self(self, idx + 1);
            seq.push_back(classes[idx].first);
        }
        seq.resize(mark);
    };
    recurse(recurse, 0);
}

/// Every sequence of length `length` over `alphabet`.
inline void for_each_sequence(const std::vector<Weight>& alphabet, int length,
                              const std::function<void(const std::vector<Weight>&)>& visit) {
    std::vector<Weight> seq(static_cast<std::size_t>(length));
    auto recurse = [&](auto&& self, int idx) -> void {
        if (idx == length) {
            visit(seq);
            return;
        }
        for (const auto& w : alphabet) {
            seq[static_cast<std::size_t>(idx)] = w;
            self(self, idx + 1);
        }
    };
    recurse(recurse, 0);
}

inline std::string describe_seq(const std::vector<Weight>& seq) {
    std::string out = "[";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        out += (i ? "," : "") + seq[i].str();
    }
    return out + "]";
}

} // namespace detail

/// Weight sets used by the default sweeps: symmetric integer, asymmetric with
/// a zero class, and half-integer weights.
inline std::vector<std::vector<Weight>> default_sweep_weight_sets() {
    return {
        {Weight::whole(-1), Weight::whole(0), Weight::whole(1), Weight::whole(2)},
        {Weight::from_halves(-3), Weight::from_halves(-1), Weight::from_halves(1), Weight::whole(2)},
    };
}

/// Mean and variance of the enumerated law against R/N and (N-1)/(N-n) n sigma_1^2,
/// for every composition over each weight set with 2 <= N <= max_total and every 1 <= n < N.
inline CheckResult check_theorem_sweep(int max_total,
                                       const std::vector<std::vector<Weight>>& weight_sets = default_sweep_weight_sets()) {
    CheckResult result{"theorem: mean and variance of T_n", 0, 0, {}};
    for (const auto& weights : weight_sets) {
        detail::for_each_composition(weights, 2, max_total, [&](const WeightComposition& comp) {
            const int total = comp.size();
            const Rational before = true_count(comp);
            const Rational s1 = sigma1_exact(comp).squared;
            for (int n = 1; n < total; ++n) {
                const auto dist = tc_distribution(comp, n);
                const Rational mean = dist.mean();
                const Rational var = dist.second_moment() - mean * mean;
                const Rational closed = s1 * Rational(static_cast<long>(total - 1) * n, total - n);
                result.record(mean == before && var == closed && dist.probability_sum() == 1, [&] {
                    return comp.str() + " n=" + std::to_string(n) + ": mean " + to_fraction_string(mean) +
                           " vs " + to_fraction_string(before) + ", var " + to_fraction_string(var) + " vs " +
                           to_fraction_string(closed);
                });
            }
        });
    }
    return result;
}

struct LemmaSuiteResult {
    CheckResult lemma1{"lemma 1: one random removal", 0, 0, {}};
    CheckResult lemma2{"lemma 2: ordered clump, one removal", 0, 0, {}};
    CheckResult lemma34{"lemmas 3-4: k random removals", 0, 0, {}};
    CheckResult lemma6{"lemma 6: telescoping identity", 0, 0, {}};

    std::vector<CheckResult> all() const { return {lemma1, lemma2, lemma34, lemma6}; }
    bool passed() const { return lemma1.passed() && lemma2.passed() && lemma34.passed() && lemma6.passed(); }
};

namespace detail {

inline void record_lemma(CheckResult& into, const LemmaReport& r, const std::function<std::string()>& what) {
    into.record(r.holds, [&] {
        return what() + ": " + to_fraction_string(r.lhs) + " vs " + to_fraction_string(r.rhs);
    });
}

inline const std::vector<Weight>& random_weight_pool() {
    static const std::vector<Weight> pool{Weight::whole(-2), Weight::from_halves(-3), Weight::whole(-1),
                                          Weight::from_halves(-1), Weight::whole(0), Weight::from_halves(1),
                                          Weight::whole(1), Weight::from_halves(3), Weight::whole(2),
                                          Weight::whole(3)};
    return pool;
}

inline WeightComposition random_composition(TrialRng& rng, int max_total) {
    const auto& pool = random_weight_pool();
    const int classes = 1 + static_cast<int>(rng.below(4));
    const int total = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_total - 2)));
    std::vector<Weight> chosen;
    while (static_cast<int>(chosen.size()) < classes) {
        Weight w = pool[rng.below(pool.size())];
        if (std::find(chosen.begin(), chosen.end(), w) == chosen.end()) {
            chosen.push_back(w);
        }
    }
    std::map<Weight, int> counts;
    for (int i = 0; i < total; ++i) {
        ++counts[chosen[rng.below(chosen.size())]];
    }
    return WeightComposition(counts);
}

/// Random feasible removal sequence of the given length.
inline std::vector<Weight> random_prefix(TrialRng& rng, const WeightComposition& comp, int length) {
    std::vector<Weight> cards;
    for (const auto& [w, count] : comp.counts()) {
        cards.insert(cards.end(), static_cast<std::size_t>(count), w);
    }
    partial_shuffle(cards, static_cast<std::size_t>(length), rng);
    cards.resize(static_cast<std::size_t>(length));
    return cards;
}

/// Random sequence over the composition's classes plus one absent weight.
inline std::vector<Weight> random_v(TrialRng& rng, const WeightComposition& comp, int length) {
    std::vector<Weight> alphabet = detail::weight_classes(comp);
    alphabet.push_back(Weight::whole(7));
    std::vector<Weight> v;
    for (int i = 0; i < length; ++i) {
        v.push_back(alphabet[rng.below(alphabet.size())]);
    }
    return v;
}

} // namespace detail

/// Exhaustive small instances (N <= exhaustive_max over {-1, 0, +1}) followed by
/// `random_count` seeded instances per lemma with N <= random_max.
inline LemmaSuiteResult run_lemma_suite(std::uint64_t seed, int exhaustive_max = 8, int random_count = 100,
                                        int random_max = 20) {
    LemmaSuiteResult out;
    const std::vector<Weight> small{Weight::whole(-1), Weight::whole(0), Weight::whole(1)};

    detail::for_each_composition(small, 2, exhaustive_max, [&](const WeightComposition& comp) {
        const int total = comp.size();
        auto alphabet = small;
        detail::for_each_submultiset(comp, total - 2, [&](const std::vector<Weight>& prefix) {
            const int p = static_cast<int>(prefix.size());
            auto where = [&](const std::vector<Weight>& v, int k) {
                return [&comp, &prefix, v, k] {
                    return comp.str() + " prefix " + detail::describe_seq(prefix) + " k=" + std::to_string(k) +
                           " v " + detail::describe_seq(v);
                };
            };
            for (const auto& v0 : alphabet) {
                detail::record_lemma(out.lemma1, check_lemma1(comp, prefix, v0), where({v0}, 1));
            }
            for (int len = 1; len <= 3 && p + len - 1 <= total - 2; ++len) {
                detail::for_each_sequence(alphabet, len, [&](const std::vector<Weight>& v) {
                    detail::record_lemma(out.lemma2, check_lemma2(comp, prefix, v), where(v, 1));
                });
            }
            for (int k = 1; k <= 3; ++k) {
                for (int len = 1; len <= 2 && p + k + len - 1 <= total - 1; ++len) {
                    detail::for_each_sequence(alphabet, len, [&](const std::vector<Weight>& v) {
                        detail::record_lemma(out.lemma34, check_lemma34(comp, prefix, k, v), where(v, k));
                    });
                }
            }
        });
    });

    for (int total = 2; total <= exhaustive_max; ++total) {
        for (int r = -total; r <= total; ++r) {
            for (int n = 1; n < total && n <= 4; ++n) {
                detail::for_each_sequence(small, n, [&](const std::vector<Weight>& ws) {
                    std::vector<Rational> vals;
                    for (const auto& w : ws) {
                        vals.push_back(w.value());
                    }
                    detail::record_lemma(out.lemma6, check_lemma6(Rational(r), total, vals), [&] {
                        return "R=" + std::to_string(r) + " N=" + std::to_string(total) + " w " +
                               detail::describe_seq(ws);
                    });
                });
            }
        }
    }

    TrialRng rng(derive_trial_seed(seed, 0x1e33a));
    for (int i = 0; i < random_count; ++i) {
        const auto comp = detail::random_composition(rng, random_max);
        const int total = comp.size();
        auto prefix = detail::random_prefix(rng, comp, static_cast<int>(rng.below(static_cast<std::uint64_t>(total - 1))));
        const auto v0 = detail::random_v(rng, comp, 1);
        detail::record_lemma(out.lemma1, check_lemma1(comp, prefix, v0[0]),
                             [&] { return "random " + comp.str() + " prefix " + detail::describe_seq(prefix); });
    }
    for (int i = 0; i < random_count; ++i) {
        const auto comp = detail::random_composition(rng, random_max);
        const int total = comp.size();
        const int q = static_cast<int>(rng.below(std::min<std::uint64_t>(4, static_cast<std::uint64_t>(total - 1))));
        const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(total - 1 - q)));
        const auto prefix = detail::random_prefix(rng, comp, p);
        const auto v = detail::random_v(rng, comp, q + 1);
        detail::record_lemma(out.lemma2, check_lemma2(comp, prefix, v), [&] {
            return "random " + comp.str() + " prefix " + detail::describe_seq(prefix) + " v " + detail::describe_seq(v);
        });
    }
    for (int i = 0; i < random_count; ++i) {
        const auto comp = detail::random_composition(rng, random_max);
        const int total = comp.size();
        // Keep k small: the k-fold sum has |W|^k terms.
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(4, static_cast<std::uint64_t>(total - 1))));
        const int q = static_cast<int>(rng.below(std::min<std::uint64_t>(3, static_cast<std::uint64_t>(total - k))));
        const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(total - k - q)));
        const auto prefix = detail::random_prefix(rng, comp, p);
        const auto v = detail::random_v(rng, comp, q + 1);
        detail::record_lemma(out.lemma34, check_lemma34(comp, prefix, k, v), [&] {
            return "random " + comp.str() + " prefix " + detail::describe_seq(prefix) + " k=" + std::to_string(k) +
                   " v " + detail::describe_seq(v);
        });
    }
    for (int i = 0; i < random_count; ++i) {
        const int total = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(random_max - 1)));
        const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(total - 1)));
        const Rational running(static_cast<long>(rng.below(201)) - 100, 1 + static_cast<long>(rng.below(4)));
        const auto& pool = detail::random_weight_pool();
        std::vector<Rational> ws;
        for (int j = 0; j < n; ++j) {
            ws.push_back(pool[rng.below(pool.size())].value());
        }
        detail::record_lemma(out.lemma6, check_lemma6(running, total, ws), [&] {
            return "random R=" + to_fraction_string(running) + " N=" + std::to_string(total);
        });
    }
    return out;
}

struct KellySuiteResult {
    CheckResult optimality{"kelly: argmax equals 2p0 - 1 on grid", 0, 0, {}};
    CheckResult variance_identity{"kelly: two-outcome variance identity", 0, 0, {}};
    CheckResult long_run{"kelly: long-run arithmetic", 0, 0, {}};
    CheckResult fuzzy{"kelly: fuzzy growth reduces and grows", 0, 0, {}};

    std::vector<CheckResult> all() const { return {optimality, variance_identity, long_run, fuzzy}; }
    bool passed() const {
        return optimality.passed() && variance_identity.passed() && long_run.passed() && fuzzy.passed();
    }
};

/// p0 grid 0.505, 0.510, ..., 0.950.
inline std::vector<double> kelly_grid() {
    std::vector<double> grid;
    for (int i = 101; i <= 190; ++i) {
        grid.push_back(i * 0.005);
    }
    return grid;
}

inline KellySuiteResult run_kelly_suite(double tolerance = 1e-6) {
    KellySuiteResult out;
    for (double p : kelly_grid()) {
        const auto r = verify_kelly_optimality(p, tolerance);
        out.optimality.record(r.passed, [&] {
            return "p0=" + std::to_string(p) + " argmax " + std::to_string(r.argmax) + " second diff " +
                   std::to_string(r.second_difference);
        });

        const double f = kelly_fraction(p);
        const double mean = log_growth(p, f);
        const double direct = p * std::pow(std::log1p(f), 2) + (1 - p) * std::pow(std::log1p(-f), 2) - mean * mean;
        const auto g = growth_stats_binomial(p);
        out.variance_identity.record(std::abs(direct - g.variance) < 1e-12 && std::abs(mean - g.mean) < 1e-12,
                                     [&] { return "p=" + std::to_string(p); });

        const auto fz0 = growth_var_fuzzy(FuzzyAdvantage{p, 0.0});
        const bool reduces = fz0.mean == g.mean && fz0.variance == g.variance;
        bool grows = true;
        if (p <= 0.6) {
            grows = growth_var_fuzzy(FuzzyAdvantage{p, 2e-4}).variance > growth_var_fuzzy(FuzzyAdvantage{p, 1e-4}).variance;
        }
        out.fuzzy.record(reduces && grows, [&] { return "p0=" + std::to_string(p); });
    }
    out.long_run.record(long_run_hands(0.01, 0.0, 2.0) == 40000, [] { return "long_run(0.01, 0, 2) != 40000"; });
    out.long_run.record(std::abs(long_run(0.01, std::sqrt(0.02)) - long_run(0.01, 0.0) - 800.0) < 1e-6,
                        [] { return "2% sigma^2 gap does not give 800 hands"; });
    out.long_run.record(std::abs(long_run(0.02, 1.0) * 4.0 - long_run(0.01, 1.0)) < 1e-6,
                        [] { return "doubling eps does not quarter the long run"; });
    return out;
}

} // namespace sdeffect
