#pragma once

// Exact law of the true count after n unseen removals, closed-form dispersion
// of that law, and exact checkers for the identities it rests on.

#include "sdeffect/counting.hpp"
#include "sdeffect/error.hpp"
#include "sdeffect/rational.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdeffect {

struct TcAtom {
    Rational value;
    Rational probability;
};

/// Per-weight removed counts c_w summing to n.
struct RemovalCensus {
    std::map<Weight, int> removed;

    int size() const {
        int n = 0;
        for (const auto& [w, c] : removed) {
            n += c;
        }
        return n;
    }
};

/// Finite law of T_n. Stored over common denominators: an atom's value is
/// value_halves / (2 (N - n)) and its probability is ways / C(N, n).
class TrueCountDistribution {
public:
    struct RawAtom {
        long value_halves;
        BigInt ways;
    };

    TrueCountDistribution(WeightComposition source, int removed, BigInt total_ways, std::vector<RawAtom> raw)
        : source_(std::move(source)), removed_(removed), total_ways_(std::move(total_ways)), raw_(std::move(raw)) {}

    const WeightComposition& source() const { return source_; }
    int removed() const { return removed_; }
    const BigInt& total_ways() const { return total_ways_; }
    const std::vector<RawAtom>& raw_atoms() const { return raw_; }

    int remaining() const { return source_.size() - removed_; }

    std::vector<TcAtom> atoms() const {
        std::vector<TcAtom> out;
        out.reserve(raw_.size());
        for (const auto& a : raw_) {
            out.push_back(TcAtom{Rational(a.value_halves, 2 * remaining()), Rational(a.ways, total_ways_)});
        }
        return out;
    }

    Rational mean() const {
        BigInt acc = 0;
        for (const auto& a : raw_) {
            acc += a.ways * a.value_halves;
        }
        return Rational(acc, total_ways_ * (2 * remaining()));
    }

    Rational second_moment() const {
        BigInt acc = 0;
        for (const auto& a : raw_) {
            acc += a.ways * (a.value_halves * a.value_halves);
        }
        const long den = 2L * remaining();
        return Rational(acc, total_ways_ * (den * den));
    }

    Rational variance() const {
        const Rational m = mean();
        return second_moment() - m * m;
    }

    Rational probability_sum() const {
        BigInt acc = 0;
        for (const auto& a : raw_) {
            acc += a.ways;
        }
        return Rational(acc, total_ways_);
    }

private:
    WeightComposition source_;
    int removed_;
    BigInt total_ways_;
    std::vector<RawAtom> raw_;
};

namespace detail {

struct CensusClass {
    int halves;
    int available;
};

/// Walks every census with sum n, handing (sum of removed halves, ways) to sink.
/// Ways are products of per-class binomials computed in Count arithmetic.
template <typename Count, typename Table, typename Sink>
void for_each_census(const std::vector<CensusClass>& classes, int n, const Table& binom, Sink&& sink) {
    std::vector<int> capacity_after(classes.size() + 1, 0);
    for (std::size_t i = classes.size(); i-- > 0;) {
        capacity_after[i] = capacity_after[i + 1] + classes[i].available;
    }
    auto recurse = [&](auto&& self, std::size_t idx, int left, long halves, const Count& ways) -> void {
        if (idx == classes.size()) {
            sink(halves, ways);
            return;
        }
        const auto& cls = classes[idx];
        const int lo = std::max(0, left - capacity_after[idx + 1]);
        const int hi = std::min(cls.available, left);
        for (int c = lo; c <= hi; ++c) {
            self(self, idx + 1, left - c, halves + static_cast<long>(cls.halves) * c,
                 ways * binom(cls.available, c));
        }
    };
    recurse(recurse, 0, n, 0L, Count(1));
}

/// 64-bit Pascal triangle; only valid while every C(n, k) fits.
class SmallBinomialTable {
public:
    explicit SmallBinomialTable(int max_n) : max_n_(max_n), cells_((max_n + 1) * (max_n + 1), 0) {
        for (int n = 0; n <= max_n; ++n) {
            at(n, 0) = 1;
            for (int k = 1; k <= n; ++k) {
                at(n, k) = at(n - 1, k - 1) + (k <= n - 1 ? at(n - 1, k) : 0);
            }
        }
    }

    std::uint64_t operator()(int n, int k) const { return cells_[n * (max_n_ + 1) + k]; }

private:
    std::uint64_t& at(int n, int k) { return cells_[n * (max_n_ + 1) + k]; }
    int max_n_;
    std::vector<std::uint64_t> cells_;
};

// C(67, 33) is the largest central binomial below 2^64.
constexpr int kSmallBinomialLimit = 67;

inline const SmallBinomialTable& small_binomials() {
    static const SmallBinomialTable table(kSmallBinomialLimit);
    return table;
}

inline std::vector<CensusClass> census_classes(const WeightComposition& comp) {
    std::vector<CensusClass> out;
    for (const auto& [w, count] : comp.counts()) {
        out.push_back(CensusClass{w.halves(), count});
    }
    return out;
}

inline void require_removal_range(const WeightComposition& comp, int n) {
    const int total = comp.size();
    if (n < 1 || n >= total) {
        throw Error(ErrorKind::BadRange, "need 1 <= n < N, got n=" + std::to_string(n) +
                                             " with N=" + std::to_string(total));
    }
}

} // namespace detail

/// Multivariate hypergeometric law of the true count (card units) after n unseen
/// removals, aggregated over removal censuses and merged by value.
inline TrueCountDistribution tc_distribution(const WeightComposition& comp, int n) {
    detail::require_removal_range(comp, n);
    const int total = comp.size();
    const long r_halves = comp.running_count_halves();
    const auto classes = detail::census_classes(comp);

    std::map<long, BigInt> merged;
    BigInt total_ways;
    if (total <= detail::kSmallBinomialLimit) {
        const auto& binom = detail::small_binomials();
        std::map<long, unsigned __int128> acc;
        detail::for_each_census<unsigned __int128>(
            classes, n, [&](int a, int b) { return static_cast<unsigned __int128>(binom(a, b)); },
            [&](long halves, unsigned __int128 ways) { acc[r_halves + halves] += ways; });
        for (const auto& [v, ways] : acc) {
            const auto hi = static_cast<std::uint64_t>(ways >> 64);
            const auto lo = static_cast<std::uint64_t>(ways);
            BigInt big = hi;
            big <<= 64;
            big += lo;
            merged.emplace(v, std::move(big));
        }
        total_ways = binom(total, n);
    } else {
        const BinomialTable binom(total);
        detail::for_each_census<BigInt>(
            classes, n, [&](int a, int b) -> const BigInt& { return binom(a, b); },
            [&](long halves, const BigInt& ways) { merged[r_halves + halves] += ways; });
        total_ways = binom(total, n);
    }

    std::vector<TrueCountDistribution::RawAtom> raw;
    raw.reserve(merged.size());
    for (auto& [v, ways] : merged) {
        raw.push_back({v, std::move(ways)});
    }
    return TrueCountDistribution(comp, n, std::move(total_ways), std::move(raw));
}

/// Mean of the enumerated law. Throws std::logic_error if it ever differs from R/N,
/// which would falsify the true count theorem.
inline Rational expected_tc(const WeightComposition& comp, int n) {
    const auto dist = tc_distribution(comp, n);
    Rational mean = dist.mean();
    if (mean != true_count(comp)) {
        throw std::logic_error("true count theorem violated for " + comp.str() + ", n=" + std::to_string(n));
    }
    return mean;
}

struct ExactSigma {
    Rational squared;
    double value = 0.0;
};

/// sigma_1^2 = (N sum(w^2 l_w) - R^2) / (N^2 (N-1)^2), card units.
inline ExactSigma sigma1_exact(const WeightComposition& comp) {
    const int total = comp.size();
    if (total < 2) {
        throw Error(ErrorKind::BadRange, "sigma1 needs at least two cards");
    }
    const Rational r = comp.running_count();
    const Rational num = comp.weight_square_sum() * total - r * r;
    const Rational sq = num / (static_cast<long>(total) * total * (total - 1L) * (total - 1L));
    return ExactSigma{sq, std::sqrt(to_double(sq))};
}

/// sigma_n^2 = (N-1)/(N-n) * n * sigma_1^2.
inline ExactSigma sigma_n_exact(const WeightComposition& comp, int n) {
    detail::require_removal_range(comp, n);
    const int total = comp.size();
    const Rational sq = sigma1_exact(comp).squared * Rational(static_cast<long>(total - 1) * n, total - n);
    return ExactSigma{sq, std::sqrt(to_double(sq))};
}

inline double unit_scale(TcUnits units) { return units == TcUnits::Deck ? 52.0 : 1.0; }

/// Sigma0 / N.
inline double sigma1_approx(double remaining, double system_sigma0, TcUnits units = TcUnits::Card) {
    if (remaining < 2) {
        throw Error(ErrorKind::BadRange, "sigma1 approximation needs N >= 2");
    }
    return unit_scale(units) * system_sigma0 / remaining;
}

inline double sigma1_approx(double remaining, const CountSystem& system, TcUnits units = TcUnits::Card) {
    return sigma1_approx(remaining, sigma0(system), units);
}

/// sqrt(n) * Sigma0 / N; n may be a fractional average card count.
inline double sigma_n_approx(double remaining, double n, double system_sigma0, TcUnits units = TcUnits::Card) {
    if (n < 0 || n >= remaining) {
        throw Error(ErrorKind::BadRange, "need 0 <= n < N");
    }
    return unit_scale(units) * std::sqrt(n) * system_sigma0 / remaining;
}

inline double sigma_n_approx(double remaining, double n, const CountSystem& system,
                             TcUnits units = TcUnits::Card) {
    return sigma_n_approx(remaining, n, sigma0(system), units);
}

/// Expected sigma_n^2 over a random N-card remainder of a fresh `decks` shoe:
/// n / ((N-n)(N-1)) * Sigma0^2 * (1 - (M-N) / (N (M-1))) with M = 52 decks.
/// This is what a simulation of increments measures; the sqrt(n) Sigma0 / N form
/// drops the finite-population factors.
inline double sigma_n_shoe_average(double system_sigma0, int decks, int remaining, double n,
                                   TcUnits units = TcUnits::Card) {
    const double shoe = 52.0 * decks;
    if (remaining < 2 || remaining > shoe || n < 0 || n >= remaining) {
        throw Error(ErrorKind::BadRange, "need 0 <= n < N <= shoe size");
    }
    const double composition_spread =
        system_sigma0 * system_sigma0 * (1.0 - (shoe - remaining) / (remaining * (shoe - 1.0)));
    const double var = n / ((remaining - n) * (remaining - 1.0)) * composition_spread;
    return unit_scale(units) * std::sqrt(var);
}

// ---------------------------------------------------------------------------
// Identity checkers
// ---------------------------------------------------------------------------

struct LemmaReport {
    Rational lhs;
    Rational rhs;
    bool holds = false;
};

namespace detail {

inline LemmaReport make_report(Rational lhs, Rational rhs) {
    const bool eq = lhs == rhs;
    return LemmaReport{std::move(lhs), std::move(rhs), eq};
}

/// l_w after removing every weight in `removed` (may go negative for infeasible sequences).
class DepletedCounts {
public:
    explicit DepletedCounts(const WeightComposition& comp) : base_(comp.counts()) {}

    long operator()(Weight w) const {
        auto it = base_.find(w);
        long n = it == base_.end() ? 0 : it->second;
        for (const auto& r : removed_) {
            if (r == w) {
                --n;
            }
        }
        return n;
    }

    void push(Weight w) { removed_.push_back(w); }
    void pop() { removed_.pop_back(); }
    std::size_t depth() const { return removed_.size(); }

private:
    std::map<Weight, int> base_;
    std::vector<Weight> removed_;
};

inline void require_feasible_prefix(const WeightComposition& comp, const std::vector<Weight>& prefix) {
    try {
        (void)deplete(comp, prefix);
    } catch (const Error&) {
        throw Error(ErrorKind::InfeasiblePrefix, "prefix cannot be removed from " + comp.str());
    }
}

/// prod_j l_{v_j}^{state v_0..v_{j-1}} / (remaining - offset - j); restores state.
inline Rational ordered_clump_probability(DepletedCounts& state, const std::vector<Weight>& v, long remaining) {
    Rational acc = 1;
    std::size_t pushed = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const long count = state(v[j]);
        if (count <= 0) {
            acc = 0;
            break;
        }
        acc *= Rational(count, remaining - static_cast<long>(j));
        state.push(v[j]);
        ++pushed;
    }
    for (std::size_t j = 0; j < pushed; ++j) {
        state.pop();
    }
    return acc;
}

/// Sequential-draw probability of v_0..v_q computed from a state where the
/// sequence `extra` is removed after v_0..v_{j-1} for every factor j. This is
/// the lhs factor of the clump identities: l_{v_j}^{P v_0..v_{j-1} extra}.
inline Rational clump_after_extra(const WeightComposition& comp, const std::vector<Weight>& prefix,
                                  const std::vector<Weight>& extra, const std::vector<Weight>& v, long denom_start) {
    DepletedCounts state(comp);
    for (const auto& w : prefix) {
        state.push(w);
    }
    for (const auto& w : extra) {
        state.push(w);
    }
    return ordered_clump_probability(state, v, denom_start);
}

inline std::vector<Weight> weight_classes(const WeightComposition& comp) {
    std::vector<Weight> out;
    for (const auto& [w, count] : comp.counts()) {
        out.push_back(w);
    }
    return out;
}

} // namespace detail

/// Removing one card at random leaves the chance that the next card has weight v0 unchanged.
inline LemmaReport check_lemma1(const WeightComposition& comp, const std::vector<Weight>& prefix, Weight v0) {
    const long total = comp.size();
    const long p = static_cast<long>(prefix.size());
    if (p > total - 2) {
        throw Error(ErrorKind::InfeasiblePrefix, "need |prefix| <= N - 2");
    }
    detail::require_feasible_prefix(comp, prefix);

    detail::DepletedCounts state(comp);
    for (const auto& w : prefix) {
        state.push(w);
    }
    Rational lhs = 0;
    for (const auto& w : detail::weight_classes(comp)) {
        const long lw = state(w);
        if (lw <= 0) {
            continue;
        }
        state.push(w);
        lhs += Rational(lw, total - p) * Rational(state(v0), total - p - 1);
        state.pop();
    }
    Rational rhs(state(v0), total - p);
    return detail::make_report(std::move(lhs), std::move(rhs));
}

/// Ordered-clump version: the chance of drawing v_0..v_q in order survives one random removal.
inline LemmaReport check_lemma2(const WeightComposition& comp, const std::vector<Weight>& prefix,
                                const std::vector<Weight>& v) {
    const long total = comp.size();
    const long p = static_cast<long>(prefix.size());
    if (v.empty()) {
        throw Error(ErrorKind::BadRange, "v sequence must hold at least v_0");
    }
    const long q = static_cast<long>(v.size()) - 1;
    if (p + q > total - 2) {
        throw Error(ErrorKind::InfeasiblePrefix, "need p + q <= N - 2");
    }
    detail::require_feasible_prefix(comp, prefix);

    detail::DepletedCounts state(comp);
    for (const auto& w : prefix) {
        state.push(w);
    }
    Rational lhs = 0;
    for (const auto& w : detail::weight_classes(comp)) {
        const long lw = state(w);
        if (lw <= 0) {
            continue;
        }
        lhs += Rational(lw, total - p) * detail::clump_after_extra(comp, prefix, {w}, v, total - p - 1);
    }
    Rational rhs = detail::ordered_clump_probability(state, v, total - p);
    return detail::make_report(std::move(lhs), std::move(rhs));
}

/// k random removals instead of one (covers both the single-weight and clump forms).
inline LemmaReport check_lemma34(const WeightComposition& comp, const std::vector<Weight>& prefix, int k,
                                 const std::vector<Weight>& v) {
    const long total = comp.size();
    const long p = static_cast<long>(prefix.size());
    if (k < 1) {
        throw Error(ErrorKind::BadRange, "k must be >= 1");
    }
    if (v.empty()) {
        throw Error(ErrorKind::BadRange, "v sequence must hold at least v_0");
    }
    const long q = static_cast<long>(v.size()) - 1;
    if (p + k + q > total - 1) {
        throw Error(ErrorKind::InfeasiblePrefix, "need p + k + q <= N - 1");
    }
    detail::require_feasible_prefix(comp, prefix);

    const auto classes = detail::weight_classes(comp);
    detail::DepletedCounts state(comp);
    for (const auto& w : prefix) {
        state.push(w);
    }
    std::vector<Weight> removed;
    Rational lhs = 0;
    auto recurse = [&](auto&& self, const Rational& weight_so_far) -> void {
        const long depth = static_cast<long>(removed.size());
        if (depth == k) {
            lhs += weight_so_far * detail::clump_after_extra(comp, prefix, removed, v, total - p - k);
            return;
        }
        for (const auto& w : classes) {
            const long lw = state(w);
            if (lw <= 0) {
                continue;
            }
            const Rational factor(lw, total - p - depth);
            state.push(w);
            removed.push_back(w);
            self(self, weight_so_far * factor);
            removed.pop_back();
            state.pop();
        }
    };
    recurse(recurse, Rational(1));
    Rational rhs = detail::ordered_clump_probability(state, v, total - p);
    return detail::make_report(std::move(lhs), std::move(rhs));
}

/// (R + sum w_i)/(N - n) - R/N == (N-1)/(N-n) * sum((R + w_i)/(N-1) - R/N).
inline LemmaReport check_lemma6(const Rational& running, int total, const std::vector<Rational>& weights) {
    const long n = static_cast<long>(weights.size());
    if (total < 2 || n >= total) {
        throw Error(ErrorKind::BadRange, "need N >= 2 and n < N");
    }
    Rational sum = 0;
    Rational increments = 0;
    const Rational before = running / total;
    for (const auto& w : weights) {
        sum += w;
        increments += (running + w) / (total - 1) - before;
    }
    Rational lhs = (running + sum) / (total - n) - before;
    Rational rhs = Rational(total - 1, total - n) * increments;
    return detail::make_report(std::move(lhs), std::move(rhs));
}

} // namespace sdeffect
