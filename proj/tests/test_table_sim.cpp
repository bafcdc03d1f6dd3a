#include "sdeffect/table_sim.hpp"

#include <gtest/gtest.h>

#include <array>
#include <numeric>

using namespace sdeffect;

TEST(SeatModel, CardCounts) {
    const auto first = make_seat_model(7, 1);
    const auto third = make_seat_model(7, 7);
    EXPECT_DOUBLE_EQ(n_cards_between(first, MomentPair::BetToPlay), 16.0);
    EXPECT_DOUBLE_EQ(n_cards_between(third, MomentPair::BetToPlay), 19.6);
    EXPECT_NEAR(n_cards_between(first, MomentPair::PlayToDealer), 4.2, 1e-12);
    EXPECT_NEAR(n_cards_between(third, MomentPair::PlayToDealer), 0.6, 1e-12);
    EXPECT_DOUBLE_EQ(first.mean_cards_per_hand(), 2.6);
}

TEST(SeatModel, Ratios) {
    EXPECT_NEAR(sigma_ratio(make_seat_model(7, 7), make_seat_model(7, 1), MomentPair::BetToPlay),
                std::sqrt(19.6 / 16.0), 1e-12);
    const auto head_on = make_seat_model(1, 1);
    EXPECT_DOUBLE_EQ(n_cards_between(head_on, MomentPair::BetToPlay), 4.0);
    EXPECT_DOUBLE_EQ(sigma_ratio(n_cards_between(make_seat_model(7, 1), MomentPair::BetToPlay), 4.0), 2.0);
    const auto ploppy = make_seat_model(7, 7, HandLengthLaw::with_mean(3.5));
    EXPECT_DOUBLE_EQ(ploppy.mean_cards_per_hand(), 3.5);
    EXPECT_DOUBLE_EQ(n_cards_between(ploppy, MomentPair::BetToPlay), 25.0);
    EXPECT_DOUBLE_EQ(sigma_ratio(ploppy, make_seat_model(7, 1), MomentPair::BetToPlay), 1.25);
    EXPECT_THROW(sigma_ratio(1.0, 0.0), Error);
}

TEST(SeatModel, PlaySpreadShrinksTowardThirdBase) {
    double previous = 1e9;
    for (int pos = 1; pos <= 7; ++pos) {
        const double n = n_cards_between(make_seat_model(7, pos), MomentPair::PlayToDealer);
        EXPECT_LT(n, previous);
        previous = n;
    }
}

TEST(SeatModel, Validation) {
    EXPECT_THROW(make_seat_model(8, 1), Error);
    EXPECT_THROW(make_seat_model(3, 4), Error);
    EXPECT_THROW(make_seat_model(3, 0), Error);
    EXPECT_THROW(HandLengthLaw({0.5, 0.4}), Error);
    EXPECT_THROW(HandLengthLaw({1.2, -0.2}), Error);
    EXPECT_THROW(HandLengthLaw::with_mean(1.5), Error);
    EXPECT_DOUBLE_EQ(HandLengthLaw::with_mean(2.6).mean_extra(), 0.6);
    EXPECT_EQ(HandLengthLaw::fixed(2).max_extra(), 2);
}

TEST(Rng, SplitMixReferenceValue) {
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
    EXPECT_NE(derive_trial_seed(1, 0), derive_trial_seed(1, 1));
    EXPECT_NE(derive_trial_seed(1, 0), derive_trial_seed(2, 0));
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
    TrialRng rng(5);
    std::array<int, 7> hist{};
    for (int i = 0; i < 70000; ++i) {
        const auto x = rng.below(7);
        ASSERT_LT(x, 7u);
        ++hist[x];
    }
    for (int h : hist) {
        EXPECT_NEAR(h, 10000, 500);
    }
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, PartialShuffleIsUniformOverOrderedDraws) {
    // Chi-square over the 4*3 = 12 ordered pairs in the first two slots.
    TrialRng rng(99);
    std::array<int, 16> hist{};
    const int trials = 120000;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> v{0, 1, 2, 3};
        partial_shuffle(v, 2, rng);
        ++hist[static_cast<std::size_t>(v[0] * 4 + v[1])];
    }
    double chi2 = 0.0;
    const double expected = trials / 12.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const int h = hist[static_cast<std::size_t>(a * 4 + b)];
            if (a == b) {
                EXPECT_EQ(h, 0);
                continue;
            }
            chi2 += (h - expected) * (h - expected) / expected;
        }
    }
    EXPECT_LT(chi2, 31.3); // 11 dof, p = 0.001
}

TEST(Summary, KnownValues) {
    const auto s = summarize("x", {1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(5.0 / 3.0) / 2.0);
    EXPECT_TRUE(s.sufficient);
    const auto one = summarize("y", {3.0});
    EXPECT_FALSE(one.sufficient);
    EXPECT_TRUE(std::isnan(one.stddev));
}

TEST(SeatSimulation, DeterministicAcrossWorkerCounts) {
    SeatSimulationConfig cfg;
    cfg.trials = 3000;
    cfg.seed = 17;
    cfg.model = make_seat_model(7, 4);
    cfg.workers = 1;
    const auto a = simulate_seat_sigma(find_system("hi-lo"), cfg);
    cfg.workers = 3;
    const auto b = simulate_seat_sigma(find_system("hi-lo"), cfg);
    ASSERT_EQ(a.stats.size(), b.stats.size());
    for (std::size_t i = 0; i < a.stats.size(); ++i) {
        EXPECT_EQ(a.stats[i].mean, b.stats[i].mean) << a.stats[i].name;
        EXPECT_EQ(a.stats[i].stddev, b.stats[i].stddev) << a.stats[i].name;
    }
    cfg.seed = 18;
    const auto c = simulate_seat_sigma(find_system("hi-lo"), cfg);
    EXPECT_NE(a.stat("bet_to_play").stddev, c.stat("bet_to_play").stddev);
}

TEST(SeatSimulation, CardLagMatchesModel) {
    SeatSimulationConfig cfg;
    cfg.trials = 4000;
    cfg.seed = 3;
    cfg.model = make_seat_model(7, 4, HandLengthLaw::fixed(1));
    const auto r = simulate_seat_sigma(find_system("hi-lo"), cfg);
    EXPECT_EQ(r.stat("cards_bet_to_play").mean, 19.0);
    EXPECT_EQ(r.stat("cards_bet_to_play").stddev, 0.0);
    EXPECT_EQ(r.prediction("cards_bet_to_play.mean"), 19.0);
    EXPECT_FALSE(r.prediction("nonexistent").has_value());
}

TEST(SeatSimulation, SpreadNearFiniteShoePrediction) {
    SeatSimulationConfig cfg;
    cfg.trials = 20000;
    cfg.seed = 2024;
    cfg.model = make_seat_model(7, 1, HandLengthLaw::fixed(1));
    const auto r = simulate_seat_sigma(find_system("hi-lo"), cfg);
    const auto& s = r.stat("bet_to_play");
    const double predicted = *r.prediction("bet_to_play.stddev_finite");
    // Standard error of a standard deviation: se(var) / (2 sd).
    EXPECT_NEAR(s.stddev, predicted, 4.0 * s.variance_std_error / (2.0 * s.stddev));
    EXPECT_NEAR(r.stat("tc_bet").stddev, *r.prediction("tc_bet.stddev"),
                4.0 * r.stat("tc_bet").variance_std_error / (2.0 * r.stat("tc_bet").stddev));
}

TEST(SeatSimulation, Errors) {
    SeatSimulationConfig cfg;
    cfg.trials = 10;
    cfg.decks = 1;
    cfg.penetration = 0.95;
    try {
        simulate_seat_sigma(find_system("hi-lo"), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ShoeExhausted);
    }
    cfg.penetration = 1.0;
    try {
        simulate_seat_sigma(find_system("hi-lo"), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadPenetration);
    }
}

TEST(BankrollSimulation, DeterministicAndNearPrediction) {
    BankrollSimulationConfig cfg;
    cfg.model = AdvantageModel::fixed(0.52);
    cfg.hands = 5000;
    cfg.trials = 400;
    cfg.seed = 9;
    cfg.workers = 1;
    const auto a = simulate_bankroll(cfg);
    cfg.workers = 4;
    const auto b = simulate_bankroll(cfg);
    EXPECT_EQ(a.stat("growth").mean, b.stat("growth").mean);
    EXPECT_EQ(a.stat("growth").stddev, b.stat("growth").stddev);
    const auto& g = a.stat("growth");
    EXPECT_NEAR(g.mean, *a.prediction("growth.mean"), 4.0 * g.std_error);
}

TEST(BankrollSimulation, RejectsBadModels) {
    BankrollSimulationConfig cfg;
    cfg.trials = 2;
    cfg.hands = 2;
    cfg.model = AdvantageModel::two_point(0.99, 0.01);
    EXPECT_THROW(simulate_bankroll(cfg), Error);
    cfg.model = AdvantageModel::fixed(0.6);
    cfg.model.forced_fraction = 1.0;
    EXPECT_THROW(simulate_bankroll(cfg), Error);
    cfg.hands = 0;
    cfg.model = AdvantageModel::fixed(0.6);
    EXPECT_THROW(simulate_bankroll(cfg), Error);
}

TEST(BankrollSimulation, NoPredictionWithoutAnEdge) {
    BankrollSimulationConfig cfg;
    cfg.trials = 5;
    cfg.hands = 10;
    cfg.model = AdvantageModel::fixed(0.45);
    const auto r = simulate_bankroll(cfg);
    EXPECT_EQ(r.stat("growth").mean, 0.0); // Kelly stakes nothing
    EXPECT_FALSE(r.prediction("growth.mean").has_value());
}
