#include "sdeffect/verify.hpp"

#include <gtest/gtest.h>

using namespace sdeffect;

namespace {

// Oracle: fraction of ordered draws of k + |v| distinct physical cards, from the
// cards left after the prefix, whose last |v| cards spell v.
Rational clump_after_k_random(const WeightComposition& comp, const std::vector<Weight>& prefix, int k,
                              const std::vector<Weight>& v) {
    const auto left = deplete(comp, prefix);
    std::vector<Weight> cards;
    for (const auto& [w, c] : left.counts()) {
        cards.insert(cards.end(), static_cast<std::size_t>(c), w);
    }
    const std::size_t len = static_cast<std::size_t>(k) + v.size();
    std::vector<int> used(cards.size(), 0);
    std::vector<Weight> seq;
    long hits = 0;
    long total = 0;
    std::function<void()> rec = [&] {
        if (seq.size() == len) {
            ++total;
            hits += std::equal(v.begin(), v.end(), seq.begin() + k) ? 1 : 0;
            return;
        }
        for (std::size_t i = 0; i < cards.size(); ++i) {
            if (!used[i]) {
                used[i] = 1;
                seq.push_back(cards[i]);
                rec();
                seq.pop_back();
                used[i] = 0;
            }
        }
    };
    rec();
    return Rational(hits, total);
}

const Weight kPlus = Weight::whole(1);
const Weight kZero = Weight::whole(0);
const Weight kMinus = Weight::whole(-1);

} // namespace

TEST(Lemma1, HoldsAndMatchesEnumeration) {
    const auto comp = WeightComposition::parse("+1:3,0:2,-1:2");
    for (const auto& prefix : std::vector<std::vector<Weight>>{{}, {kPlus}, {kPlus, kMinus}, {kZero, kZero}}) {
        for (Weight v0 : {kPlus, kZero, kMinus, Weight::whole(5)}) {
            const auto r = check_lemma1(comp, prefix, v0);
            EXPECT_TRUE(r.holds);
            EXPECT_EQ(r.lhs, clump_after_k_random(comp, prefix, 1, {v0}));
        }
    }
}

TEST(Lemma1, PreconditionsEnforced) {
    const auto comp = WeightComposition::parse("+1:2,-1:1");
    try {
        check_lemma1(comp, {kPlus, kPlus}, kMinus);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasiblePrefix);
    }
    try {
        check_lemma1(comp, {kZero}, kMinus);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasiblePrefix);
    }
}

TEST(Lemma2, ClumpSurvivesOneRemoval) {
    const auto comp = WeightComposition::parse("+1:2,0:2,-1:3");
    const std::vector<std::vector<Weight>> vs{{kPlus, kMinus}, {kMinus, kMinus, kMinus}, {kZero, kPlus, kZero}};
    for (const auto& v : vs) {
        const auto r = check_lemma2(comp, {kMinus}, v);
        EXPECT_TRUE(r.holds);
        EXPECT_EQ(r.lhs, clump_after_k_random(comp, {kMinus}, 1, v));
        EXPECT_EQ(r.rhs, clump_after_k_random(comp, {kMinus}, 0, v));
    }
    EXPECT_THROW(check_lemma2(comp, {}, {}), Error);
    EXPECT_THROW(check_lemma2(WeightComposition::parse("+1:2,-1:2"), {kPlus}, {kPlus, kMinus, kMinus}), Error);
}

TEST(Lemma34, SeveralRemovals) {
    const auto comp = WeightComposition::parse("+1:3,0:1,-1:3");
    for (int k = 1; k <= 4; ++k) {
        for (const auto& v : std::vector<std::vector<Weight>>{{kPlus}, {kMinus, kPlus}, {kZero}}) {
            if (k + static_cast<int>(v.size()) - 1 > comp.size() - 1) {
                continue;
            }
            const auto r = check_lemma34(comp, {}, k, v);
            EXPECT_TRUE(r.holds) << k;
            EXPECT_EQ(r.lhs, clump_after_k_random(comp, {}, k, v)) << k;
        }
    }
    EXPECT_THROW(check_lemma34(comp, {}, 0, {kPlus}), Error);
    EXPECT_THROW(check_lemma34(comp, {kPlus}, 6, {kPlus}), Error);
}

TEST(Lemma6, DecompositionIdentity) {
    const Rational r(3, 2);
    const auto rep = check_lemma6(r, 11, {Rational(1), Rational(-1, 2), Rational(2), Rational(0)});
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.lhs, (r + Rational(5, 2)) / 7 - r / 11);
    EXPECT_THROW(check_lemma6(r, 3, {1, 1, 1}), Error);
    EXPECT_TRUE(check_lemma6(0, 2, {}).holds);
}

TEST(LemmaSuite, SmallRunPassesAndCounts) {
    const auto res = run_lemma_suite(7, 6, 20, 14);
    for (const auto& c : res.all()) {
        EXPECT_TRUE(c.passed()) << c.name << ": " << c.first_failure;
        EXPECT_GT(c.instances, 0u) << c.name;
    }
}

TEST(LemmaSuite, SeedsAreReproducible) {
    const auto a = run_lemma_suite(11, 4, 10, 12);
    const auto b = run_lemma_suite(11, 4, 10, 12);
    for (std::size_t i = 0; i < a.all().size(); ++i) {
        EXPECT_EQ(a.all()[i].instances, b.all()[i].instances);
    }
}

TEST(TheoremSweep, SmallSweepPasses) {
    const auto res = check_theorem_sweep(12);
    EXPECT_TRUE(res.passed()) << res.first_failure;
    EXPECT_GT(res.instances, 1000u);
}

TEST(CheckResult, RecordsFirstFailureOnly) {
    CheckResult c{"demo", 0, 0, {}};
    c.record(true, [] { return std::string("a"); });
    c.record(false, [] { return std::string("b"); });
    c.record(false, [] { return std::string("c"); });
    EXPECT_EQ(c.instances, 3u);
    EXPECT_EQ(c.failures, 2u);
    EXPECT_EQ(c.first_failure, "b");
    EXPECT_FALSE(c.passed());
    EXPECT_FALSE((CheckResult{"empty", 0, 0, {}}).passed());
}
