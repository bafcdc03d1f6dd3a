#pragma once

// Balanced card-counting systems and remaining-deck compositions by weight class.

#include "sdeffect/error.hpp"
#include "sdeffect/rational.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdeffect {

/// Card weight with half-integer resolution, stored as an integer count of halves.
class Weight {
public:
    constexpr Weight() = default;

    static constexpr Weight from_halves(int halves) { return Weight(halves); }
    static constexpr Weight whole(int value) { return Weight(2 * value); }

    constexpr int halves() const { return halves_; }
    Rational value() const { return Rational(halves_, 2); }
    double to_double() const { return halves_ / 2.0; }
    constexpr bool is_zero() const { return halves_ == 0; }

    constexpr auto operator<=>(const Weight&) const = default;

    /// "+1", "-1", "0", "+1.5", "-0.5".
    std::string str() const {
        if (halves_ == 0) {
            return "0";
        }
        std::string out = halves_ > 0 ? "+" : "-";
        const int mag = std::abs(halves_);
        out += std::to_string(mag / 2);
        if (mag % 2 != 0) {
            out += ".5";
        }
        return out;
    }

    /// Accepts an optional sign, an integer part and an optional fraction that
    /// must be exactly .0 or .5 (trailing zeros allowed).
    static Weight parse(std::string_view text) {
        auto fail = [&] {
            return Error(ErrorKind::ParseError, "bad weight '" + std::string(text) + "'");
        };
        std::size_t i = 0;
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        }
        if (i >= text.size()) {
            throw fail();
        }
        long whole = 0;
        std::size_t digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            whole = whole * 10 + (text[i] - '0');
            if (whole > 1000000) {
                throw fail();
            }
            ++i;
            ++digits;
        }
        int half = 0;
        if (i < text.size() && text[i] == '.') {
            ++i;
            std::size_t frac_start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
                ++i;
            }
            std::string_view frac = text.substr(frac_start, i - frac_start);
            if (frac.empty() && digits == 0) {
                throw fail();
            }
            if (!frac.empty()) {
                if (frac[0] == '5') {
                    half = 1;
                } else if (frac[0] != '0') {
                    throw fail();
                }
                if (frac.find_first_not_of('0', 1) != std::string_view::npos) {
                    throw fail();
                }
            }
        } else if (digits == 0) {
            throw fail();
        }
        if (i != text.size()) {
            throw fail();
        }
        return Weight(sign * static_cast<int>(2 * whole + half));
    }

private:
    constexpr explicit Weight(int halves) : halves_(halves) {}
    int halves_ = 0;
};

/// One rank of a count system: its label, weight and number of cards per 52-card deck.
struct RankWeight {
    std::string rank;
    Weight weight;
    int per_deck = 4;
};

class CountSystem {
public:
    CountSystem(std::string name, std::vector<RankWeight> ranks)
        : name_(std::move(name)), ranks_(std::move(ranks)) {}

    const std::string& name() const { return name_; }
    const std::vector<RankWeight>& ranks() const { return ranks_; }

    /// s_w per single deck, keyed by weight.
    std::map<Weight, int> class_multiplicities() const {
        std::map<Weight, int> out;
        for (const auto& r : ranks_) {
            out[r.weight] += r.per_deck;
        }
        return out;
    }

    std::vector<Weight> distinct_weights() const {
        std::vector<Weight> out;
        for (const auto& [w, count] : class_multiplicities()) {
            out.push_back(w);
        }
        return out;
    }

    std::optional<Weight> weight_of(std::string_view rank) const {
        for (const auto& r : ranks_) {
            if (r.rank == rank) {
                return r.weight;
            }
        }
        return std::nullopt;
    }

private:
    std::string name_;
    std::vector<RankWeight> ranks_;
};

namespace detail {

inline const std::vector<std::string>& merged_rank_labels() {
    static const std::vector<std::string> labels{"A", "2", "3", "4", "5", "6", "7", "8", "9", "T"};
    return labels;
}

inline const std::vector<std::string>& full_rank_labels() {
    static const std::vector<std::string> labels{"A", "2", "3", "4", "5", "6", "7",
                                                 "8", "9", "T", "J", "Q", "K"};
    return labels;
}

inline std::string canonical_rank(std::string_view rank) {
    std::string r(rank);
    for (auto& ch : r) {
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    if (r == "10") {
        return "T";
    }
    if (r == "1") {
        return "A";
    }
    return r;
}

} // namespace detail

/// Validates rank coverage (10 merged ranks with T counted 16 times, or all 13
/// ranks) and the balance condition sum(weight * multiplicity) == 0.
inline CountSystem make_count_system(std::string name,
                                     const std::vector<std::pair<std::string, Weight>>& weights) {
    std::vector<RankWeight> ranks;
    const auto& labels = weights.size() == 10 ? detail::merged_rank_labels()
                                              : detail::full_rank_labels();
    if (weights.size() != 10 && weights.size() != 13) {
        throw Error(ErrorKind::InvalidMultiplicity,
                    "expected 10 or 13 rank entries, got " + std::to_string(weights.size()));
    }
    for (const auto& label : labels) {
        auto it = std::find_if(weights.begin(), weights.end(), [&](const auto& entry) {
            return detail::canonical_rank(entry.first) == label;
        });
        if (it == weights.end()) {
            throw Error(ErrorKind::InvalidMultiplicity, "missing rank " + label + " in " + name);
        }
        if (std::count_if(weights.begin(), weights.end(), [&](const auto& entry) {
                return detail::canonical_rank(entry.first) == label;
            }) != 1) {
            throw Error(ErrorKind::InvalidMultiplicity, "duplicate rank " + label + " in " + name);
        }
        const int per_deck = (weights.size() == 10 && label == "T") ? 16 : 4;
        ranks.push_back(RankWeight{label, it->second, per_deck});
    }

    int total = 0;
    long balance = 0;
    for (const auto& r : ranks) {
        total += r.per_deck;
        balance += static_cast<long>(r.weight.halves()) * r.per_deck;
    }
    if (total != 52) {
        throw Error(ErrorKind::InvalidMultiplicity, "rank multiplicities sum to " + std::to_string(total));
    }
    if (balance != 0) {
        throw Error(ErrorKind::UnbalancedSystem,
                    name + ": full-deck weight sum is " + Weight::from_halves(static_cast<int>(balance)).str());
    }
    return CountSystem(std::move(name), std::move(ranks));
}

/// Exact sum(w^2 * s_w) / 52 over one deck.
inline Rational sigma0_squared(const CountSystem& system) {
    long quarter_units = 0;
    for (const auto& r : system.ranks()) {
        quarter_units += static_cast<long>(r.weight.halves()) * r.weight.halves() * r.per_deck;
    }
    return Rational(quarter_units, 4 * 52);
}

/// Standard deviation of the weights over a full deck (the square root of the
/// mean squared weight, since the mean is zero for a balanced system).
inline double sigma0(const CountSystem& system) { return std::sqrt(to_double(sigma0_squared(system))); }

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

/// A catalog row: weight-defined systems compute their dispersion, the rest
/// carry only the published figure.
struct CatalogEntry {
    std::string key;
    std::string display_name;
    std::optional<CountSystem> system;
    double published_sigma0 = 0.0;

    double resolved_sigma0() const { return system ? sigma0(*system) : published_sigma0; }
};

namespace detail {

inline CountSystem merged_system(std::string name, std::initializer_list<int> halves_a_to_t) {
    std::vector<std::pair<std::string, Weight>> weights;
    std::size_t i = 0;
    for (int h : halves_a_to_t) {
        weights.emplace_back(merged_rank_labels()[i++], Weight::from_halves(h));
    }
    return make_count_system(std::move(name), weights);
}

inline std::vector<CatalogEntry> build_catalog() {
    // Weights in halves, ranks A 2 3 4 5 6 7 8 9 T.
    std::vector<CatalogEntry> c;
    auto add = [&](std::string key, std::string display, std::initializer_list<int> halves, double published) {
        c.push_back(CatalogEntry{key, display, merged_system(key, halves), published});
    };
    auto add_published = [&](std::string key, std::string display, double published) {
        c.push_back(CatalogEntry{std::move(key), std::move(display), std::nullopt, published});
    };

    add("uston-ace-five", "Uston ace-five", {-2, 0, 0, 0, 2, 0, 0, 0, 0, 0}, 0.392);
    add("hi-opt-1", "Hi-Opt I", {0, 0, 2, 2, 2, 2, 0, 0, 0, -2}, 0.784);
    add_published("cr-point", "C-R point count", 0.855);
    add("canfield-expert", "Canfield expert", {0, 0, 2, 2, 2, 2, 2, 0, -2, -2}, 0.877);
    add("hi-lo", "Hi-Lo", {-2, 2, 2, 2, 2, 2, 0, 0, 0, -2}, 0.877);
    add("uston-plus-minus", "Uston advanced plus-minus", {-2, 0, 2, 2, 2, 2, 2, 0, 0, -2}, 0.877);
    add("halves", "Halves", {-2, 1, 2, 2, 3, 2, 1, 0, -1, -2}, 0.920);
    add_published("systematic", "Systematic count", 0.961);
    add("hi-opt-2", "Hi-Opt II", {0, 2, 2, 4, 4, 2, 2, 0, 0, -4}, 1.468);
    add("canfield-master", "Canfield master", {0, 2, 2, 4, 4, 4, 2, 0, -2, -4}, 1.569);
    add("zen", "Zen count", {-2, 2, 2, 4, 4, 4, 2, 0, 0, -4}, 1.569);
    // The published figures below do not follow from the usual weight lists
    // (Uston APC and Thorp ultimate match only if the ten class is counted
    // once per deck instead of sixteen times), so they stay figure-only.
    add_published("uston-apc", "Uston advanced point count", 1.687);
    add("revere-point", "Revere point count", {-4, 2, 4, 4, 4, 4, 2, 0, 0, -4}, 1.710);
    add_published("uston-ss", "Uston SS count", 1.797);
    add_published("revere-apc", "Revere advanced point count", 2.449);
    add_published("griffin-seven", "Griffin seven count", 3.234);
    add_published("thorp-ultimate", "Thorp ultimate", 5.798);
    return c;
}

} // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = detail::build_catalog();
    return entries;
}

/// Weight-defined systems only; every one of them has passed balance validation.
inline std::vector<CountSystem> builtin_systems() {
    std::vector<CountSystem> out;
    for (const auto& entry : catalog()) {
        if (entry.system) {
            out.push_back(*entry.system);
        }
    }
    return out;
}

inline const CatalogEntry& find_catalog_entry(std::string_view key) {
    for (const auto& entry : catalog()) {
        if (entry.key == key) {
            return entry;
        }
    }
    throw Error(ErrorKind::NotFound, "no count system named '" + std::string(key) + "'");
}

inline CountSystem find_system(std::string_view key) {
    const auto& entry = find_catalog_entry(key);
    if (!entry.system) {
        throw Error(ErrorKind::NotFound, "'" + std::string(key) + "' has no weight list, only a published sigma0");
    }
    return *entry.system;
}

/// Plain-text definition: one `rank weight` pair per line, `#` starts a comment.
inline CountSystem parse_count_system(std::string name, std::istream& in) {
    std::vector<std::pair<std::string, Weight>> weights;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string rank;
        std::string weight;
        if (!(fields >> rank)) {
            continue;
        }
        std::string extra;
        if (!(fields >> weight) || (fields >> extra)) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected `rank weight`");
        }
        try {
            weights.emplace_back(rank, Weight::parse(weight));
        } catch (const Error& e) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return make_count_system(std::move(name), weights);
}

inline CountSystem load_count_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::NotFound, "cannot open " + path);
    }
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) {
        name = name.substr(slash + 1);
    }
    if (auto dot = name.find('.'); dot != std::string::npos && dot > 0) {
        name = name.substr(0, dot);
    }
    return parse_count_system(std::move(name), in);
}

// ---------------------------------------------------------------------------
// Compositions
// ---------------------------------------------------------------------------

enum class TcUnits { Card, Deck };

/// Census of the remaining cards by weight class. Empty classes are dropped so
/// equal censuses compare equal however they were reached.
class WeightComposition {
public:
    WeightComposition() = default;

    explicit WeightComposition(const std::map<Weight, int>& counts) {
        for (const auto& [w, count] : counts) {
            if (count < 0) {
                throw Error(ErrorKind::BadRange, "negative count for weight " + w.str());
            }
            if (count > 0) {
                counts_.emplace(w, count);
            }
        }
    }

    const std::map<Weight, int>& counts() const { return counts_; }

    int count(Weight w) const {
        auto it = counts_.find(w);
        return it == counts_.end() ? 0 : it->second;
    }

    int size() const {
        int n = 0;
        for (const auto& [w, count] : counts_) {
            n += count;
        }
        return n;
    }

    /// R = -sum(w * l_w), in halves.
    long running_count_halves() const {
        long acc = 0;
        for (const auto& [w, count] : counts_) {
            acc -= static_cast<long>(w.halves()) * count;
        }
        return acc;
    }

    Rational running_count() const { return Rational(running_count_halves(), 2); }

    /// sum(w^2 * l_w), exact.
    Rational weight_square_sum() const {
        long quarters = 0;
        for (const auto& [w, count] : counts_) {
            quarters += static_cast<long>(w.halves()) * w.halves() * count;
        }
        return Rational(quarters, 4);
    }

    bool operator==(const WeightComposition&) const = default;

    /// `weight:count` pairs, highest weight first: "+1:5,0:3,-1:5".
    std::string str() const {
        std::string out;
        for (auto it = counts_.rbegin(); it != counts_.rend(); ++it) {
            if (!out.empty()) {
                out += ',';
            }
            out += it->first.str() + ":" + std::to_string(it->second);
        }
        return out;
    }

    static WeightComposition parse(std::string_view text) {
        std::map<Weight, int> counts;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string_view::npos) {
                comma = text.size();
            }
            std::string_view item = text.substr(pos, comma - pos);
            while (!item.empty() && item.front() == ' ') {
                item.remove_prefix(1);
            }
            while (!item.empty() && item.back() == ' ') {
                item.remove_suffix(1);
            }
            if (item.empty()) {
                throw Error(ErrorKind::ParseError, "empty entry in composition '" + std::string(text) + "'");
            }
            const auto colon = item.find(':');
            if (colon == std::string_view::npos) {
                throw Error(ErrorKind::ParseError, "expected weight:count, got '" + std::string(item) + "'");
            }
            const Weight w = Weight::parse(item.substr(0, colon));
            const std::string count_text(item.substr(colon + 1));
            if (count_text.empty() || count_text.find_first_not_of("0123456789") != std::string::npos ||
                count_text.size() > 6) {
                throw Error(ErrorKind::ParseError, "bad count '" + count_text + "'");
            }
            counts[w] += std::stoi(count_text);
            pos = comma + 1;
        }
        return WeightComposition(counts);
    }

private:
    std::map<Weight, int> counts_;
};

inline WeightComposition fresh_shoe(const CountSystem& system, int decks) {
    if (decks < 1) {
        throw Error(ErrorKind::BadRange, "decks must be >= 1");
    }
    auto counts = system.class_multiplicities();
    for (auto& [w, count] : counts) {
        count *= decks;
    }
    return WeightComposition(counts);
}

/// Removes one card per listed weight; the running count grows by each removed weight.
inline WeightComposition deplete(const WeightComposition& comp, const std::vector<Weight>& removed) {
    auto counts = comp.counts();
    for (const auto& w : removed) {
        auto it = counts.find(w);
        if (it == counts.end() || it->second == 0) {
            throw Error(ErrorKind::EmptyClass, "no card of weight " + w.str() + " left");
        }
        --it->second;
    }
    return WeightComposition(counts);
}

inline Rational true_count(const WeightComposition& comp, TcUnits units = TcUnits::Card) {
    const int n = comp.size();
    if (n == 0) {
        throw Error(ErrorKind::EmptyDeck, "true count undefined with no cards remaining");
    }
    Rational tc = comp.running_count() / n;
    return units == TcUnits::Deck ? tc * 52 : tc;
}

} // namespace sdeffect
