#include <gtest/gtest.h>

#include <random>

#include "mecm/belief.hpp"
#include "test_util.hpp"

using namespace mecm;

namespace {

const FocalStructure s2{2, FocalMode::full_power_set};
const FocalStructure s3{3, FocalMode::full_power_set};

FocalSet w1(int c = 2) { return FocalSet::singleton(c, 0); }
FocalSet w2(int c = 2) { return FocalSet::singleton(c, 1); }

MassFunction random_mass(const FocalStructure& s, std::mt19937_64& rng, bool with_empty = true) {
    std::vector<double> m(s.size());
    double total = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) total += (m[j] = (j == 0 && !with_empty) ? 0.0 : testutil::uniform(rng));
    for (auto& x : m) x /= total;
    return {s, m};
}

}  // namespace

TEST(FocalSet, BasicsAndEncoding) {
    auto a = FocalSet::of(4, {0, 2});
    EXPECT_EQ(a.mask(), 0b101u);
    EXPECT_EQ(a.cardinality(), 2);
    EXPECT_TRUE(a.contains(2));
    EXPECT_FALSE(a.contains(1));
    EXPECT_EQ(a.complement(), FocalSet::of(4, {1, 3}));
    EXPECT_TRUE(FocalSet::singleton(4, 0).subset_of(a));
    EXPECT_TRUE(FocalSet::empty_set(4).is_empty());
    EXPECT_EQ(FocalSet::omega(4).cardinality(), 4);
    EXPECT_EQ(a.members(), (std::vector<int>{0, 2}));
    EXPECT_THROW(FocalSet(2, 0b100u), ValidationError);
    EXPECT_THROW(FocalSet::singleton(3, 3), ValidationError);
}

TEST(FocalStructure, FullAndPairsModes) {
    FocalStructure full(4, FocalMode::full_power_set);
    EXPECT_EQ(full.size(), 16u);
    FocalStructure pairs(5, FocalMode::pairs_plus_omega);
    EXPECT_EQ(pairs.size(), 1u + 5u + 10u + 1u);
    EXPECT_TRUE(pairs.contains(FocalSet::full_mask(5)));
    EXPECT_FALSE(pairs.contains(0b111u));
    EXPECT_EQ(pairs[FocalStructure::empty_index()].mask(), 0u);
    for (std::size_t j = 1; j < pairs.size(); ++j) EXPECT_LT(pairs[j - 1].mask(), pairs[j].mask());
    EXPECT_EQ(FocalStructure::default_for(8).mode(), FocalMode::full_power_set);
    EXPECT_EQ(FocalStructure::default_for(9).mode(), FocalMode::pairs_plus_omega);
    // c = 2 pairs mode collapses onto the full power set.
    EXPECT_EQ(FocalStructure(2, FocalMode::pairs_plus_omega).size(), 4u);
}

TEST(MassFunction, RejectsBadMasses) {
    EXPECT_THROW(MassFunction(s2, {0.0, 0.5, 0.4, 0.0}), ValidationError);
    EXPECT_THROW(MassFunction(s2, {-0.1, 0.6, 0.5, 0.0}), ValidationError);
    EXPECT_THROW(MassFunction(s2, {1.0, 0.0}), ValidationError);
    EXPECT_NO_THROW(MassFunction(s2, {0.0, 0.5, 0.5 + 5e-10, 0.0}));
}

TEST(Bel, Examples) {
    EXPECT_DOUBLE_EQ(MassFunction::from_pairs(s2, {{w1(), 1.0}}).bel(w1()), 1.0);
    auto m = MassFunction::from_pairs(s2, {{w1(), 0.3}, {FocalSet::omega(2), 0.7}});
    EXPECT_DOUBLE_EQ(m.bel(w1()), 0.3);
    auto e = MassFunction::from_pairs(s2, {{FocalSet::empty_set(2), 0.2}, {w1(), 0.8}});
    EXPECT_DOUBLE_EQ(e.bel(FocalSet::omega(2)), 0.8);
}

TEST(Pl, Examples) {
    EXPECT_DOUBLE_EQ(MassFunction::from_pairs(s2, {{FocalSet::omega(2), 1.0}}).pl(w1()), 1.0);
    auto e = MassFunction::from_pairs(s2, {{FocalSet::empty_set(2), 0.2}, {w1(), 0.8}});
    EXPECT_DOUBLE_EQ(e.pl(w2()), 0.0);
}

TEST(BelPl, DualityAndOrderOnRandomMasses) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_mass(s3, rng);
        for (const auto& a : s3) {
            EXPECT_LE(m.bel(a), m.pl(a) + 1e-15);
            EXPECT_NEAR(m.pl(a) + m.bel(a.complement()), 1.0 - m.conflict(), 1e-12);
        }
    }
}

TEST(Pignistic, Examples) {
    auto a = MassFunction::from_pairs(s2, {{w1(), 0.5}, {FocalSet::omega(2), 0.5}}).pignistic();
    EXPECT_DOUBLE_EQ(a[0], 0.75);
    EXPECT_DOUBLE_EQ(a[1], 0.25);
    auto b = MassFunction::vacuous(s3).pignistic();
    for (double x : b) EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
    auto c = MassFunction::from_pairs(s2, {{FocalSet::empty_set(2), 0.5}, {w1(), 0.5}}).pignistic();
    EXPECT_DOUBLE_EQ(c[0], 1.0);
    EXPECT_DOUBLE_EQ(c[1], 0.0);
    EXPECT_THROW(MassFunction::from_pairs(s2, {{FocalSet::empty_set(2), 1.0}}).pignistic(), NumericError);
}

TEST(Pignistic, BayesianMassIsReturnedExactly) {
    auto m = MassFunction::from_pairs(s3, {{w1(3), 0.2}, {w2(3), 0.3}, {FocalSet::singleton(3, 2), 0.5}});
    EXPECT_EQ(m.pignistic(), (std::vector<double>{0.2, 0.3, 0.5}));
}

TEST(Pignistic, IsProbabilityVector) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_mass(s3, rng).pignistic();
        double total = 0.0;
        for (double x : p) {
            EXPECT_GE(x, 0.0);
            total += x;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(Dempster, VacuousIsNeutral) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = random_mass(s3, rng, false);
        auto r = dempster_combine(MassFunction::vacuous(s3), m);
        for (std::size_t j = 0; j < s3.size(); ++j) EXPECT_NEAR(r.masses()[j], m.masses()[j], 1e-12);
    }
}

TEST(Dempster, TotalConflictIsReported) {
    auto a = MassFunction::from_pairs(s2, {{w1(), 1.0}});
    auto b = MassFunction::from_pairs(s2, {{w2(), 1.0}});
    EXPECT_THROW(dempster_combine(a, b), NumericError);
}

TEST(Dempster, HandEnumeratedExample) {
    auto a = MassFunction::from_pairs(s2, {{w1(), 0.6}, {FocalSet::omega(2), 0.4}});
    auto b = MassFunction::from_pairs(s2, {{w1(), 0.5}, {FocalSet::omega(2), 0.5}});
    auto r = dempster_combine(a, b);
    // {w1}: .6*.5 + .6*.5 + .4*.5 = .8; Omega: .4*.5 = .2; no conflict.
    EXPECT_NEAR(r(w1()), 0.8, 1e-15);
    EXPECT_NEAR(r(FocalSet::omega(2)), 0.2, 1e-15);
    EXPECT_EQ(r.conflict(), 0.0);
}

TEST(Dempster, Commutative) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_mass(s3, rng, false), b = random_mass(s3, rng, false);
        auto ab = dempster_combine(a, b), ba = dempster_combine(b, a);
        for (std::size_t j = 0; j < s3.size(); ++j) EXPECT_NEAR(ab.masses()[j], ba.masses()[j], 1e-12);
    }
}

TEST(Dempster, RequiresSameStructure) {
    EXPECT_THROW(dempster_combine(MassFunction::vacuous(s2), MassFunction::vacuous(s3)), ValidationError);
}

TEST(PlausibilityDecision, Examples) {
    auto m = MassFunction::from_pairs(s2, {{w1(), 0.8}, {FocalSet::omega(2), 0.2}});
    EXPECT_EQ(m.decide(1.0), w1());
    // r = 0 scores every set by Pl alone; Omega wins unless a smaller set ties it.
    auto split = MassFunction::from_pairs(s2, {{w1(), 0.5}, {w2(), 0.5}});
    EXPECT_EQ(split.decide(0.0), FocalSet::omega(2));
    EXPECT_EQ(m.decide(0.0), w1());
    EXPECT_EQ(MassFunction::vacuous(s2).decide(1.0), w1());
}

TEST(PlausibilityDecision, WeightsAndConflict) {
    auto m = MassFunction::from_pairs(s2, {{w1(), 0.8}, {FocalSet::omega(2), 0.2}});
    // Up-weighting {w2} enough flips the decision.
    auto lambda = [](const FocalSet& x) { return x == FocalSet::singleton(2, 1) ? 10.0 : 1.0; };
    EXPECT_EQ(m.decide(1.0, lambda), w2());
    EXPECT_THROW(MassFunction::from_pairs(s2, {{FocalSet::empty_set(2), 1.0}}).decide(1.0), NumericError);
    EXPECT_THROW(m.decide(1.5), ValidationError);
}

TEST(PlausibilityDecision, MatchesBruteForce) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_mass(s3, rng);
        const double r = testutil::uniform(rng);
        FocalSet best;
        double best_score = -1.0;
        for (std::uint32_t mask = 1; mask < 8; ++mask) {
            FocalSet x(3, mask);
            const double score = std::pow(x.cardinality(), -r) * m.pl(x) / (1.0 - m.conflict());
            if (score > best_score * (1 + 1e-12) ||
                (std::abs(score - best_score) <= 1e-12 * best_score &&
                 (x.cardinality() < best.cardinality() ||
                  (x.cardinality() == best.cardinality() && mask < best.mask())))) {
                best_score = score;
                best = x;
            }
        }
        EXPECT_EQ(m.decide(r), best);
    }
}
