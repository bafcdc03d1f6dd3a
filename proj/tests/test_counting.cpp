#include "sdeffect/counting.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace sdeffect;

namespace {

// Straight floating-point dispersion of 13 per-rank weights, 4 cards each.
double naive_sigma0(const std::vector<double>& thirteen) {
    double acc = 0.0;
    for (double w : thirteen) {
        acc += 4.0 * w * w;
    }
    return std::sqrt(acc / 52.0);
}

std::vector<double> expand(const std::vector<double>& a_to_t) {
    std::vector<double> out(a_to_t);
    out.push_back(a_to_t.back());
    out.push_back(a_to_t.back());
    out.push_back(a_to_t.back());
    return out;
}

} // namespace

TEST(Weight, ParsesWholeAndHalfValues) {
    EXPECT_EQ(Weight::parse("+1").halves(), 2);
    EXPECT_EQ(Weight::parse("-1").halves(), -2);
    EXPECT_EQ(Weight::parse("0").halves(), 0);
    EXPECT_EQ(Weight::parse("1.5").halves(), 3);
    EXPECT_EQ(Weight::parse("-0.5").halves(), -1);
    EXPECT_EQ(Weight::parse("-.5").halves(), -1);
    EXPECT_EQ(Weight::parse("2.50").halves(), 5);
}

TEST(Weight, RejectsNonHalfValues) {
    for (const char* bad : {"", "+", "0.25", "1.7", "abc", "1x", "1.55", "."}) {
        EXPECT_THROW(Weight::parse(bad), Error) << bad;
    }
}

TEST(Weight, StrRoundTrips) {
    for (int h = -9; h <= 9; ++h) {
        const Weight w = Weight::from_halves(h);
        EXPECT_EQ(Weight::parse(w.str()), w) << w.str();
    }
    EXPECT_EQ(Weight::whole(1).str(), "+1");
    EXPECT_EQ(Weight::from_halves(-1).str(), "-0.5");
}

TEST(CountSystem, RejectsUnbalancedWeights) {
    std::vector<std::pair<std::string, Weight>> w;
    for (const char* r : {"A", "2", "3", "4", "5", "6", "7", "8", "9", "T"}) {
        w.emplace_back(r, Weight::whole(0));
    }
    w[1].second = Weight::whole(1);
    try {
        make_count_system("lopsided", w);
        FAIL() << "expected UnbalancedSystem";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnbalancedSystem);
    }
}

TEST(CountSystem, RejectsBadRankCoverage) {
    std::vector<std::pair<std::string, Weight>> w;
    for (const char* r : {"A", "2", "3", "4", "5", "6", "7", "8", "9"}) {
        w.emplace_back(r, Weight::whole(0));
    }
    try {
        make_count_system("short", w);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidMultiplicity);
    }
    w.emplace_back("9", Weight::whole(0)); // duplicate instead of T
    try {
        make_count_system("dup", w);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidMultiplicity);
    }
}

TEST(CountSystem, ThirteenRankFormMatchesMergedForm) {
    std::vector<std::pair<std::string, Weight>> full;
    const std::vector<int> halves{-2, 2, 2, 2, 2, 2, 0, 0, 0, -2, -2, -2, -2};
    for (std::size_t i = 0; i < halves.size(); ++i) {
        full.emplace_back(detail::full_rank_labels()[i], Weight::from_halves(halves[i]));
    }
    const CountSystem thirteen = make_count_system("hilo13", full);
    EXPECT_EQ(sigma0_squared(thirteen), sigma0_squared(find_system("hi-lo")));
    EXPECT_EQ(thirteen.class_multiplicities(), find_system("hi-lo").class_multiplicities());
}

TEST(CountSystem, RankAliases) {
    std::vector<std::pair<std::string, Weight>> w;
    for (const char* r : {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"}) {
        w.emplace_back(r, Weight::whole(0));
    }
    const CountSystem zero = make_count_system("zero", w);
    EXPECT_EQ(zero.weight_of("T"), Weight::whole(0));
    EXPECT_EQ(sigma0(zero), 0.0);
}

struct CatalogCase {
    const char* key;
    std::vector<double> a_to_t;
    double published;
};

TEST(Catalog, WeightDefinedSystemsMatchPublishedDispersion) {
    const std::vector<CatalogCase> cases{
        {"uston-ace-five", {-1, 0, 0, 0, 1, 0, 0, 0, 0, 0}, 0.392},
        {"hi-opt-1", {0, 0, 1, 1, 1, 1, 0, 0, 0, -1}, 0.784},
        {"canfield-expert", {0, 0, 1, 1, 1, 1, 1, 0, -1, -1}, 0.877},
        {"hi-lo", {-1, 1, 1, 1, 1, 1, 0, 0, 0, -1}, 0.877},
        {"uston-plus-minus", {-1, 0, 1, 1, 1, 1, 1, 0, 0, -1}, 0.877},
        {"halves", {-1, 0.5, 1, 1, 1.5, 1, 0.5, 0, -0.5, -1}, 0.920},
        {"hi-opt-2", {0, 1, 1, 2, 2, 1, 1, 0, 0, -2}, 1.468},
        {"canfield-master", {0, 1, 1, 2, 2, 2, 1, 0, -1, -2}, 1.569},
        {"zen", {-1, 1, 1, 2, 2, 2, 1, 0, 0, -2}, 1.569},
        {"revere-point", {-2, 1, 2, 2, 2, 2, 1, 0, 0, -2}, 1.710},
    };
    for (const auto& c : cases) {
        const double oracle = naive_sigma0(expand(c.a_to_t));
        const CountSystem sys = find_system(c.key);
        EXPECT_NEAR(sigma0(sys), oracle, 1e-12) << c.key;
        EXPECT_NEAR(sigma0(sys), c.published, 0.0005) << c.key;
        EXPECT_NEAR(std::round(sigma0(sys) * 1000) / 1000, c.published, 1e-9) << c.key;
    }
}

TEST(Catalog, HiLoSigmaSquaredIsExact) {
    // 20 low cards and 20 high cards of weight magnitude 1 per 52.
    EXPECT_EQ(sigma0_squared(find_system("hi-lo")), Rational(40, 52));
}

TEST(Catalog, PublishedOnlyEntriesCarryTheirFigure) {
    EXPECT_FALSE(find_catalog_entry("thorp-ultimate").system.has_value());
    EXPECT_DOUBLE_EQ(find_catalog_entry("thorp-ultimate").resolved_sigma0(), 5.798);
    EXPECT_EQ(catalog().size(), 17u);
    EXPECT_EQ(builtin_systems().size(), 10u);
}

TEST(Catalog, UnknownKeyIsNotFound) {
    try {
        find_system("no-such-count");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotFound);
    }
    // Published-only rows have no weights to simulate with.
    EXPECT_THROW(find_system("thorp-ultimate"), Error);
}

TEST(DefinitionFile, ParsesSampleFile) {
    const CountSystem sys = load_count_system(std::string(SDEFFECT_SAMPLES_DIR) + "/hi-lo.count");
    EXPECT_EQ(sys.name(), "hi-lo");
    EXPECT_EQ(sigma0_squared(sys), sigma0_squared(find_system("hi-lo")));
}

TEST(DefinitionFile, ReportsLineOfBadWeight) {
    std::istringstream in("A -1\n2 +1\n3 0.3\n");
    try {
        parse_count_system("bad", in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(DefinitionFile, MissingFileIsNotFound) {
    EXPECT_THROW(load_count_system("/nonexistent/x.count"), Error);
}

TEST(Composition, FreshShoeCensus) {
    const auto shoe = fresh_shoe(find_system("hi-lo"), 8);
    EXPECT_EQ(shoe.size(), 416);
    EXPECT_EQ(shoe.count(Weight::whole(1)), 160);
    EXPECT_EQ(shoe.count(Weight::whole(0)), 96);
    EXPECT_EQ(shoe.count(Weight::whole(-1)), 160);
    EXPECT_EQ(shoe.running_count(), 0);
    EXPECT_THROW(fresh_shoe(find_system("hi-lo"), 0), Error);
}

TEST(Composition, RevealingAWeightAddsItToTheRunningCount) {
    const auto shoe = fresh_shoe(find_system("hi-lo"), 1);
    const auto after_low = deplete(shoe, {Weight::whole(1)});
    EXPECT_EQ(after_low.running_count(), 1);
    const auto after_two = deplete(after_low, {Weight::whole(1), Weight::whole(-1)});
    EXPECT_EQ(after_two.running_count(), 1);
    EXPECT_EQ(after_two.size(), 49);
}

TEST(Composition, DepletingAnEmptyClassThrows) {
    const auto comp = WeightComposition::parse("+1:1");
    try {
        deplete(comp, {Weight::whole(-1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyClass);
    }
}

TEST(Composition, TrueCountUnits) {
    const auto comp = WeightComposition::parse("-1:5,+1:4,0:3");
    EXPECT_EQ(true_count(comp), Rational(1, 12));
    EXPECT_EQ(true_count(comp, TcUnits::Deck), Rational(52, 12));
    try {
        true_count(WeightComposition{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyDeck);
    }
}

TEST(Composition, ParseAndStrRoundTrip) {
    const auto comp = WeightComposition::parse(" +1:5, -1:5 ,0:3");
    EXPECT_EQ(comp.str(), "+1:5,0:3,-1:5");
    EXPECT_EQ(WeightComposition::parse(comp.str()), comp);
    EXPECT_EQ(WeightComposition::parse("+1:2,+1:3").count(Weight::whole(1)), 5);
    EXPECT_EQ(WeightComposition::parse("+1:0,0:2").str(), "0:2");
    for (const char* bad : {"", "+1", "+1:x", "+1:5,,0:1", "0.3:1", "+1:-1"}) {
        EXPECT_THROW(WeightComposition::parse(bad), Error) << bad;
    }
}

TEST(Composition, WeightSquareSumIsExactWithHalves) {
    const auto comp = WeightComposition::parse("+0.5:3,-1.5:1");
    EXPECT_EQ(comp.weight_square_sum(), Rational(3, 4) + Rational(9, 4));
    EXPECT_EQ(comp.running_count(), 0);
}
