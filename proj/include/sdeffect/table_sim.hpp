#pragma once

// Seat / card-consumption model and the seeded Monte Carlo engine.
//
// Reproducibility contract: trial i of a run with master seed s draws from a
// std::mt19937_64 seeded with derive_trial_seed(s, i) (a SplitMix64 step).
// Bounded integers use rejection sampling on full 64-bit outputs and uniform
// reals use the top 53 bits, so no implementation-defined std distribution is
// involved. Per-trial results land in an indexed buffer and are reduced in
// index order, so reports do not depend on the worker count.

#include "sdeffect/counting.hpp"
#include "sdeffect/error.hpp"
#include "sdeffect/exact_dist.hpp"
#include "sdeffect/kelly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace sdeffect {

// ---------------------------------------------------------------------------
// Seat model
// ---------------------------------------------------------------------------

/// Law of the extra cards H >= 0 a hand draws beyond its first two.
class HandLengthLaw {
public:
    explicit HandLengthLaw(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
        if (probs_.empty()) {
            throw Error(ErrorKind::InvalidModel, "hand-length law needs at least one outcome");
        }
        double total = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0)) {
                throw Error(ErrorKind::InvalidModel, "hand-length probabilities must be non-negative");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw Error(ErrorKind::InvalidModel, "hand-length probabilities must sum to 1");
        }
    }

    /// H in {0, 1, 2} with (0.55, 0.30, 0.15): 2.6 cards per hand.
    static HandLengthLaw standard() { return HandLengthLaw({0.55, 0.30, 0.15}); }

    static HandLengthLaw fixed(int extra) {
        std::vector<double> p(static_cast<std::size_t>(extra) + 1, 0.0);
        p.back() = 1.0;
        return HandLengthLaw(std::move(p));
    }

    /// Two adjacent outcomes floor(m), floor(m)+1 mixed to give mean_cards - 2 extra cards.
    static HandLengthLaw with_mean(double mean_cards) {
        const double extra = mean_cards - 2.0;
        if (!(extra >= 0.0) || extra > 1000.0) {
            throw Error(ErrorKind::InvalidModel, "mean cards per hand must be >= 2");
        }
        const int base = static_cast<int>(std::floor(extra));
        const double frac = extra - base;
        std::vector<double> p(static_cast<std::size_t>(base) + 2, 0.0);
        p[static_cast<std::size_t>(base)] = 1.0 - frac;
        p[static_cast<std::size_t>(base) + 1] = frac;
        return HandLengthLaw(std::move(p));
    }

    const std::vector<double>& probabilities() const { return probs_; }

    double mean_extra() const {
        double m = 0.0;
        for (std::size_t k = 0; k < probs_.size(); ++k) {
            m += static_cast<double>(k) * probs_[k];
        }
        return m;
    }

    int max_extra() const { return static_cast<int>(probs_.size()) - 1; }

    template <typename Rng>
    int sample(Rng& rng) const {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < probs_.size(); ++k) {
            acc += probs_[k];
            if (u < acc) {
                return static_cast<int>(k);
            }
        }
        return max_extra();
    }

private:
    std::vector<double> probs_;
};

struct SeatCardModel {
    int seats = 7;
    int position = 1;
    HandLengthLaw law = HandLengthLaw::standard();

    double mean_cards_per_hand() const { return 2.0 + law.mean_extra(); }
};

inline SeatCardModel make_seat_model(int seats, int position, HandLengthLaw law = HandLengthLaw::standard()) {
    if (seats < 1 || seats > 7) {
        throw Error(ErrorKind::InvalidModel, "seats must be between 1 and 7");
    }
    if (position < 1 || position > seats) {
        throw Error(ErrorKind::InvalidModel, "position must be between 1 and seats");
    }
    return SeatCardModel{seats, position, std::move(law)};
}

enum class MomentPair { BetToPlay, PlayToDealer };

/// Expected cards seen between the two moments. Bet to play: two cards for every
/// seat and the dealer plus the extra cards of the seats acting first. Play to
/// dealer: the extra cards of this seat and every seat after it.
inline double n_cards_between(const SeatCardModel& model, MomentPair pair) {
    const double extra = model.law.mean_extra();
    if (pair == MomentPair::BetToPlay) {
        return 2.0 * (model.seats + 1) + (model.position - 1) * extra;
    }
    return (model.seats - model.position + 1) * extra;
}

/// sqrt(n_a / n_b): ratio of the true-count spreads when N >> n.
inline double sigma_ratio(double n_a, double n_b) {
    if (!(n_a >= 0.0) || !(n_b > 0.0)) {
        throw Error(ErrorKind::BadRange, "sigma ratio needs n_a >= 0 and n_b > 0");
    }
    return std::sqrt(n_a / n_b);
}

inline double sigma_ratio(const SeatCardModel& a, const SeatCardModel& b, MomentPair pair) {
    return sigma_ratio(n_cards_between(a, pair), n_cards_between(b, pair));
}

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t trial) {
    return splitmix64(master ^ splitmix64(trial));
}

class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates over the first `count` slots: afterwards cards[0..count) is a
/// uniformly random ordered draw without replacement.
template <typename T>
void partial_shuffle(std::vector<T>& cards, std::size_t count, TrialRng& rng) {
    const std::size_t n = cards.size();
    count = std::min(count, n);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(cards[i], cards[j]);
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct StatSummary {
    std::string name;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double variance = std::numeric_limits<double>::quiet_NaN();
    /// sqrt((m4 - s^4) / count): standard error of the variance estimate.
    double variance_std_error = std::numeric_limits<double>::quiet_NaN();
    bool sufficient = false;
};

/// Two-pass moments over values in index order.
inline StatSummary summarize(std::string name, const std::vector<double>& values) {
    StatSummary s;
    s.name = std::move(name);
    s.count = values.size();
    if (values.empty()) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) {
        return s;
    }
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(values.size());
    s.variance = m2 / (n - 1.0);
    s.stddev = std::sqrt(s.variance);
    s.std_error = s.stddev / std::sqrt(n);
    const double pop_var = m2 / n;
    s.variance_std_error = std::sqrt(std::max(0.0, m4 / n - pop_var * pop_var) / n);
    s.sufficient = true;
    return s;
}

struct SimulationReport {
    std::string kind;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<StatSummary> stats;
    /// Closed-form values keyed "<stat>.mean", "<stat>.stddev", "<stat>.stddev_finite"
    /// or "<stat>.variance", for side-by-side display.
    std::vector<std::pair<std::string, double>> predictions;

    const StatSummary& stat(const std::string& name) const {
        for (const auto& s : stats) {
            if (s.name == name) {
                return s;
            }
        }
        throw Error(ErrorKind::NotFound, "no statistic named " + name);
    }

    std::optional<double> prediction(const std::string& name) const {
        for (const auto& [k, v] : predictions) {
            if (k == name) {
                return v;
            }
        }
        return std::nullopt;
    }
};

namespace detail {

inline unsigned resolve_workers(unsigned requested, std::size_t trials) {
    unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(1, trials)));
}

/// Runs body(trial, rng) for every trial on `workers` threads in contiguous blocks.
template <typename Body>
void run_trials(std::size_t trials, std::uint64_t seed, unsigned workers, Body&& body) {
    workers = resolve_workers(workers, trials);
    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            TrialRng rng(derive_trial_seed(seed, t));
            body(t, rng);
        }
    };
    if (workers == 1) {
        run_block(0, trials);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(trials, w * chunk);
        const std::size_t end = std::min(trials, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                run_block(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Seat simulation
// ---------------------------------------------------------------------------

struct SeatSimulationConfig {
    int decks = 8;
    double penetration = 0.5;
    SeatCardModel model;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

/// Cards dealt before the bet moment.
inline int cards_dealt_at(double penetration, int decks) {
    if (!(penetration > 0.0 && penetration < 1.0)) {
        throw Error(ErrorKind::BadPenetration, "penetration must lie in (0, 1)");
    }
    return static_cast<int>(std::lround(penetration * 52.0 * decks));
}

/// Shuffles a shoe per trial, deals to the penetration point and records the
/// deck-unit true count at the bet, play and dealer moments of one round.
/// Statistics: bet_to_play and play_to_dealer increments (their spreads are
/// sigma_BET and sigma_PLAY), tc_bet, cards_bet_to_play and cards_per_hand.
inline SimulationReport simulate_seat_sigma(const CountSystem& system, const SeatSimulationConfig& cfg) {
    if (cfg.trials < 1) {
        throw Error(ErrorKind::BadRange, "trials must be >= 1");
    }
    if (cfg.decks < 1) {
        throw Error(ErrorKind::BadRange, "decks must be >= 1");
    }
    const SeatCardModel& model = cfg.model;
    (void)make_seat_model(model.seats, model.position, model.law);

    std::vector<int> shoe;
    const WeightComposition full = fresh_shoe(system, cfg.decks);
    for (const auto& [w, count] : full.counts()) {
        shoe.insert(shoe.end(), static_cast<std::size_t>(count), w.halves());
    }
    const int shoe_size = static_cast<int>(shoe.size());
    const int dealt = cards_dealt_at(cfg.penetration, cfg.decks);
    const int worst_round = 2 * (model.seats + 1) + model.seats * model.law.max_extra();
    if (dealt + worst_round >= shoe_size) {
        throw Error(ErrorKind::ShoeExhausted, "round would need " + std::to_string(worst_round) + " cards but only " +
                                                  std::to_string(shoe_size - dealt) + " remain");
    }

    const std::size_t trials = cfg.trials;
    std::vector<double> tc_bet(trials), inc_play(trials), inc_dealer(trials), lag(trials);
    std::vector<double> hand_cards(trials * static_cast<std::size_t>(model.seats));

    detail::run_trials(trials, cfg.seed, cfg.workers, [&](std::size_t t, TrialRng& rng) {
        std::vector<int> cards = shoe;
        partial_shuffle(cards, static_cast<std::size_t>(dealt + worst_round), rng);
        long running = 0; // halves
        int next = 0;
        auto draw = [&](int count) {
            for (int i = 0; i < count; ++i) {
                running += cards[static_cast<std::size_t>(next++)];
            }
        };
        auto deck_tc = [&] { return 52.0 * (running / 2.0) / static_cast<double>(shoe_size - next); };

        draw(dealt);
        const double at_bet = deck_tc();
        const int bet_card = next;
        draw(2 * (model.seats + 1));
        std::vector<int> extras(static_cast<std::size_t>(model.seats));
        for (auto& e : extras) {
            e = model.law.sample(rng);
        }
        for (int s = 0; s < model.position - 1; ++s) {
            draw(extras[static_cast<std::size_t>(s)]);
        }
        const double at_play = deck_tc();
        lag[t] = next - bet_card;
        for (int s = model.position - 1; s < model.seats; ++s) {
            draw(extras[static_cast<std::size_t>(s)]);
        }
        const double at_dealer = deck_tc();

        tc_bet[t] = at_bet;
        inc_play[t] = at_play - at_bet;
        inc_dealer[t] = at_dealer - at_play;
        for (int s = 0; s < model.seats; ++s) {
            hand_cards[t * static_cast<std::size_t>(model.seats) + static_cast<std::size_t>(s)] =
                2.0 + extras[static_cast<std::size_t>(s)];
        }
    });

    SimulationReport report;
    report.kind = "seat-sigma";
    report.seed = cfg.seed;
    report.trials = trials;
    report.config = {{"system", system.name()},
                     {"decks", std::to_string(cfg.decks)},
                     {"penetration", detail::format_double(cfg.penetration)},
                     {"seats", std::to_string(model.seats)},
                     {"position", std::to_string(model.position)},
                     {"hand_mean", detail::format_double(model.mean_cards_per_hand())},
                     {"remaining_at_bet", std::to_string(shoe_size - dealt)}};
    report.stats.push_back(summarize("bet_to_play", inc_play));
    report.stats.push_back(summarize("play_to_dealer", inc_dealer));
    report.stats.push_back(summarize("tc_bet", tc_bet));
    report.stats.push_back(summarize("cards_bet_to_play", lag));
    report.stats.push_back(summarize("cards_per_hand", hand_cards));

    const double remaining = shoe_size - dealt;
    const double s0 = sigma0(system);
    const double n_bet = n_cards_between(model, MomentPair::BetToPlay);
    const double n_play = n_cards_between(model, MomentPair::PlayToDealer);
    report.predictions = {
        {"bet_to_play.mean", 0.0},
        {"bet_to_play.stddev", sigma_n_approx(remaining, n_bet, s0, TcUnits::Deck)},
        {"bet_to_play.stddev_finite", sigma_n_shoe_average(s0, cfg.decks, shoe_size - dealt, n_bet, TcUnits::Deck)},
        {"play_to_dealer.mean", 0.0},
        {"play_to_dealer.stddev", sigma_n_approx(remaining - n_bet, n_play, s0, TcUnits::Deck)},
        {"play_to_dealer.stddev_finite",
         sigma_n_shoe_average(s0, cfg.decks, static_cast<int>(std::lround(remaining - n_bet)), n_play, TcUnits::Deck)},
        {"tc_bet.mean", 0.0},
        {"tc_bet.stddev", 52.0 * s0 * std::sqrt(dealt / ((shoe_size - 1.0) * (shoe_size - dealt)))},
        {"cards_bet_to_play.mean", n_bet},
        {"cards_per_hand.mean", model.mean_cards_per_hand()},
    };
    return report;
}

// ---------------------------------------------------------------------------
// Bankroll simulation
// ---------------------------------------------------------------------------

/// Per-hand advantage law: a fixed win probability, or p0 +/- sqrt(var_p0)
/// with equal odds (matching mean and variance of a fuzzy advantage).
struct AdvantageModel {
    enum class Kind { Fixed, TwoPoint };
    Kind kind = Kind::Fixed;
    double p = 0.5;
    double var_p0 = 0.0;
    std::optional<double> forced_fraction;

    static AdvantageModel fixed(double p) { return AdvantageModel{Kind::Fixed, p, 0.0, std::nullopt}; }
    static AdvantageModel two_point(double p0, double var_p0) {
        return AdvantageModel{Kind::TwoPoint, p0, var_p0, std::nullopt};
    }
};

struct BankrollSimulationConfig {
    AdvantageModel model;
    std::size_t hands = 40000;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

/// Kelly-sized betting for `hands` rounds per trial; reports G_n = log(X_n / X_0) / n.
inline SimulationReport simulate_bankroll(const BankrollSimulationConfig& cfg) {
    const AdvantageModel& m = cfg.model;
    if (cfg.trials < 1 || cfg.hands < 1) {
        throw Error(ErrorKind::InvalidModel, "trials and hands must be >= 1");
    }
    double lo_p = m.p;
    double hi_p = m.p;
    if (m.kind == AdvantageModel::Kind::TwoPoint) {
        if (!(m.var_p0 >= 0.0)) {
            throw Error(ErrorKind::InvalidModel, "var_p0 must be non-negative");
        }
        const double s = std::sqrt(m.var_p0);
        lo_p = m.p - s;
        hi_p = m.p + s;
    }
    if (!(lo_p >= 0.0 && hi_p <= 1.0)) {
        throw Error(ErrorKind::InvalidModel, "advantage law leaves [0, 1]");
    }
    auto fraction_for = [&](double p) { return m.forced_fraction ? *m.forced_fraction : kelly_fraction(p); };
    for (double p : {lo_p, hi_p}) {
        const double f = fraction_for(p);
        if (!(f >= 0.0 && f < 1.0)) {
            throw Error(ErrorKind::InvalidModel, "bet fraction must lie in [0, 1)");
        }
    }

    std::vector<double> growth(cfg.trials);
    detail::run_trials(cfg.trials, cfg.seed, cfg.workers, [&](std::size_t t, TrialRng& rng) {
        double log_bankroll = 0.0;
        for (std::size_t h = 0; h < cfg.hands; ++h) {
            double p = m.p;
            if (m.kind == AdvantageModel::Kind::TwoPoint) {
                p = (rng.next() >> 63) != 0 ? hi_p : lo_p;
            }
            const double f = fraction_for(p);
            const bool win = rng.uniform01() < p;
            log_bankroll += std::log1p(win ? f : -f);
        }
        if (!std::isfinite(log_bankroll)) {
            throw std::logic_error("bankroll reached zero with a fraction below one");
        }
        growth[t] = log_bankroll / static_cast<double>(cfg.hands);
    });

    SimulationReport report;
    report.kind = "bankroll";
    report.seed = cfg.seed;
    report.trials = cfg.trials;
    report.config = {{"model", m.kind == AdvantageModel::Kind::Fixed ? "fixed" : "two-point"},
                     {"p", detail::format_double(m.p)},
                     {"var_p0", detail::format_double(m.var_p0)},
                     {"hands", std::to_string(cfg.hands)}};
    report.stats.push_back(summarize("growth", growth));

    if (!m.forced_fraction && m.p > 0.5 && m.p < 1.0) {
        const GrowthStats g = m.kind == AdvantageModel::Kind::Fixed
                                  ? growth_stats_binomial(m.p)
                                  : growth_var_fuzzy(FuzzyAdvantage{m.p, m.var_p0});
        const double hands = static_cast<double>(cfg.hands);
        report.predictions = {{"growth.mean", g.mean},
                              {"growth.stddev", g.stddev_after(hands)},
                              {"growth.variance", g.variance_after(hands)}};
    }
    return report;
}

} // namespace sdeffect
