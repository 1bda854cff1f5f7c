#include <gtest/gtest.h>

#include <random>

#include "mecm/credal.hpp"
#include "test_util.hpp"

using namespace mecm;

namespace {

MecmParams params(int c) {
    MecmParams p;
    p.c = c;
    return p;
}

// Direct transcription of the prototype-dependent cost for cluster k.
double cluster_cost(const CredalPartition& m, const Matrix& d, PrototypeSet v, int k, int cand, const MecmParams& p) {
    v[k] = cand;
    const auto& s = m.structure();
    double total = 0.0;
    for (int i = 0; i < m.n(); ++i)
        for (std::size_t j = 1; j < s.size(); ++j)
            if (s[j].contains(k))
                total += std::pow(s[j].cardinality(), p.alpha) * std::pow(m.row(i)[j], p.beta) *
                         meta_dissimilarity(i, s[j], d, v, p);
    return total;
}

}  // namespace

TEST(Rho, Examples) {
    const double ones[] = {1.0, 1.0, 1.0};
    EXPECT_EQ(rho(ones, Matrix::Constant(3, 3, 2.0), 0.5), 0.0);
    const double di[] = {1.0, 3.0};
    Matrix pd(2, 2);
    pd << 0, 4, 4, 0;
    EXPECT_DOUBLE_EQ(rho(di, pd, 0.5), 1.0);
    const double r = rho(di, Matrix::Zero(2, 2), 0.5);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GT(r, 1e9);
    const double one[] = {1.0};
    EXPECT_THROW(rho(one, Matrix::Zero(1, 1), 0.5), ValidationError);
}

TEST(Rho, DecreasesWithEta) {
    const double di[] = {1.0, 2.5, 4.0};
    Matrix pd = Matrix::Constant(3, 3, 3.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double eta : {0.1, 0.3, 0.5, 0.9, 1.0}) {
        const double r = rho(di, pd, eta);
        EXPECT_LT(r, prev);
        prev = r;
    }
}

TEST(MetaDissimilarity, Examples) {
    // Objects 0 and 1 are the prototypes; object 2 is the one under study.
    Matrix d = Matrix::Zero(3, 3);
    d(2, 0) = 1;
    d(2, 1) = 3;
    d(0, 1) = d(1, 0) = 4;
    MecmParams p = params(2);
    p.eta = 0.5;
    p.gamma = 1.0;
    const PrototypeSet v{0, 1};
    EXPECT_DOUBLE_EQ(meta_dissimilarity(2, FocalSet::singleton(2, 1), d, v, p), 9.0);
    EXPECT_DOUBLE_EQ(meta_dissimilarity(2, FocalSet::omega(2), d, v, p), 3.0);
    EXPECT_THROW(meta_dissimilarity(2, FocalSet::empty_set(2), d, v, p), ValidationError);

    d(2, 0) = d(2, 1) = 2.0;
    for (double g : {0.1, 0.6, 3.0}) {
        p.gamma = g;
        EXPECT_DOUBLE_EQ(meta_dissimilarity(2, FocalSet::omega(2), d, v, p), g * 4.0 / (g + 1.0));
    }
}

TEST(MassUpdate, Examples) {
    MecmParams p = params(1);
    p.delta = 3.0;
    FocalStructure s1(1, FocalMode::full_power_set);
    RowMatrix dbar(1, 2);
    dbar << 9.0, 9.0;
    auto m = mass_update(dbar, s1, p);
    EXPECT_NEAR(m.row(0)[1], 0.5, 1e-15);
    EXPECT_NEAR(m.row(0)[0], 0.5, 1e-15);

    FocalStructure s2(2, FocalMode::full_power_set);
    RowMatrix eq(1, 4);
    eq << 100, 4, 4, 2;
    for (double a : {-1.0, 0.0, 2.0}) {
        p = params(2);
        p.alpha = a;
        auto r = mass_update(eq, s2, p);
        EXPECT_DOUBLE_EQ(r.row(0)[1], r.row(0)[2]);
    }

    p = params(2);
    p.delta = 100.0;
    RowMatrix z(1, 4);
    z << 1e4, 0.0, 1.0, 2.0;
    EXPECT_GT(mass_update(z, s2, p).row(0)[1], 0.999);
}

TEST(MassUpdate, MatchesClosedFormAndRowsSumToOne) {
    std::mt19937_64 rng(4);
    FocalStructure s(3, FocalMode::full_power_set);
    for (int trial = 0; trial < 50; ++trial) {
        MecmParams p = params(3);
        p.alpha = testutil::uniform(rng, -1, 3);
        p.beta = testutil::uniform(rng, 1.2, 3);
        p.delta = testutil::uniform(rng, 1, 20);
        RowMatrix dbar(4, 8);
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 8; ++j) dbar(i, j) = j == 0 ? p.delta * p.delta : testutil::uniform(rng, 0.1, 50);
        auto m = mass_update(dbar, s, p);
        const double e = 1.0 / (p.beta - 1.0);
        for (int i = 0; i < 4; ++i) {
            double den = std::pow(p.delta, -2.0 * e);
            for (int j = 1; j < 8; ++j) den += std::pow(s[j].cardinality(), -p.alpha * e) * std::pow(dbar(i, j), -e);
            double total = 0.0;
            for (int j = 1; j < 8; ++j) {
                const double expect = std::pow(s[j].cardinality(), -p.alpha * e) * std::pow(dbar(i, j), -e) / den;
                EXPECT_NEAR(m.row(i)[j], expect, 1e-12);
                total += m.row(i)[j];
            }
            EXPECT_NEAR(m.row(i)[0], 1.0 - total, 1e-12);
        }
    }
}

TEST(MassUpdate, ScalingSplitsIntoQuadraticAndLinearParts) {
    // Singleton and empty columns scale by s^2; on imprecise sets the mean-square
    // part scales by s^2 while the rho * min d part scales only by s.
    std::mt19937_64 rng(9);
    const Matrix d = testutil::random_dissimilarity(12, rng);
    MecmParams p = params(3);
    p.delta = 4.0;
    const PrototypeSet v{0, 5, 9};
    FocalStructure s(3, FocalMode::full_power_set);
    const double k = 7.0;
    MecmParams q = p;
    q.delta = k * p.delta;
    auto base = meta_matrix(d, v, s, p);
    auto scaled = meta_matrix(k * d, v, s, q);
    for (int i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < s.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            if (s[j].cardinality() <= 1) {
                EXPECT_NEAR(scaled(i, jj), k * k * base(i, jj), 1e-12 * scaled(i, jj));
                continue;
            }
            double sq = 0;
            for (int m : s[j].members()) sq += d(i, v[m]) * d(i, v[m]);
            const double quad = p.gamma * sq / s[j].cardinality() / (p.gamma + 1.0);
            const double lin = base(i, jj) - quad;
            EXPECT_NEAR(scaled(i, jj), k * k * quad + k * lin, 1e-9 * scaled(i, jj));
        }
}

TEST(MassUpdate, ScaleInvariantWhenImpreciseSetsAreEquidistant) {
    // With every rho = 0 all columns are quadratic and the update is scale free.
    Matrix d = Matrix::Zero(5, 5);
    d(0, 1) = d(1, 0) = 2;
    for (int i = 2; i < 5; ++i) d(i, 0) = d(i, 1) = d(0, i) = d(1, i) = 1.0 + i;
    MecmParams p = params(2);
    p.delta = 3.0;
    FocalStructure s(2, FocalMode::full_power_set);
    auto m0 = mass_update(meta_matrix(d, {0, 1}, s, p), s, p);
    MecmParams q = p;
    q.delta = 5.0 * p.delta;
    auto m1 = mass_update(meta_matrix(5.0 * d, {0, 1}, s, q), s, q);
    EXPECT_LT((m0.masses() - m1.masses()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Objective, Examples) {
    FocalStructure s(2, FocalMode::full_power_set);
    MecmParams p = params(2);
    p.delta = 3.0;
    RowMatrix all_empty = RowMatrix::Zero(5, 4);
    all_empty.col(0).setOnes();
    EXPECT_DOUBLE_EQ(objective(CredalPartition(s, all_empty), RowMatrix::Constant(5, 4, 1.0), p), 5 * 9.0);
    RowMatrix one = RowMatrix::Zero(1, 4);
    one(0, 1) = 1.0;
    RowMatrix dbar(1, 4);
    dbar << 9, 4, 1, 1;
    for (double a : {0.5, 1.0, 3.0}) {
        p.alpha = a;
        EXPECT_DOUBLE_EQ(objective(CredalPartition(s, one), dbar, p), 4.0);
    }
}

TEST(PrototypeUpdate, Examples) {
    FocalStructure s1(1, FocalMode::full_power_set);
    MecmParams p = params(1);
    Matrix d2(2, 2);
    d2 << 0, 1, 1, 0;
    RowMatrix eq(2, 2);
    eq << 0.5, 0.5, 0.5, 0.5;
    EXPECT_EQ(prototype_update(CredalPartition(s1, eq), d2, {1}, p), PrototypeSet{0});

    const Matrix d3 = testutil::line_dissimilarity({0, 1, 5});
    RowMatrix sure = RowMatrix::Zero(3, 2);
    sure.col(1).setOnes();
    EXPECT_EQ(prototype_update(CredalPartition(s1, sure), d3, {0}, p), PrototypeSet{1});
    // Costs 26, 17, 41.
    CredalPartition m(s1, sure);
    EXPECT_DOUBLE_EQ(cluster_cost(m, d3, {0}, 0, 0, p), 26.0);
    EXPECT_DOUBLE_EQ(cluster_cost(m, d3, {0}, 0, 1, p), 17.0);
    EXPECT_DOUBLE_EQ(cluster_cost(m, d3, {0}, 0, 2, p), 41.0);
}

TEST(PrototypeUpdate, ExhaustiveOptimalityAndDistinctness) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 8 + int(rng() % 10), c = 2 + int(rng() % 3);
        const Matrix d = testutil::random_dissimilarity(n, rng);
        MecmParams p = params(c);
        p.gamma = testutil::uniform(rng, 0.1, 2);
        p.eta = testutil::uniform(rng, 0.2, 1);
        FocalStructure s = FocalStructure::default_for(c);
        auto m = testutil::random_partition(n, s, rng);
        PrototypeSet v0;
        for (int k = 0; k < c; ++k) v0.push_back(k);
        auto v = prototype_update(m, d, v0, p);
        EXPECT_NO_THROW(validate_prototypes(v, n, c));
        // Replay the sequential scan and check each pick against every admissible candidate.
        PrototypeSet cur = v0;
        for (int k = 0; k < c; ++k) {
            const double chosen = cluster_cost(m, d, cur, k, v[k], p);
            for (int l = 0; l < n; ++l) {
                bool taken = false;
                for (int o = 0; o < c; ++o) taken |= o != k && cur[o] == l;
                if (!taken) {
                    EXPECT_LE(chosen, cluster_cost(m, d, cur, k, l, p) * (1 + 1e-12));
                }
            }
            cur[k] = v[k];
        }
    }
}

TEST(MecmFit, NEqualsCConcentratesOnSingletons) {
    std::mt19937_64 rng(2);
    const Matrix d = testutil::random_dissimilarity(3, rng);
    MecmParams p = params(3);
    auto r = mecm_fit(d, p, {0, 1, 2});
    for (int i = 0; i < 3; ++i) EXPECT_GT(r.partition.row(i)[r.partition.structure().index_of(FocalSet::singleton(3, i))], 1 - 1e-9);
    EXPECT_LT(r.report.objective_trace.back(), 1e-9);
    EXPECT_EQ(r.report.converged_by, StopReason::prototypes_stable);
}

TEST(MecmFit, MonotoneDescentOnRandomInstances) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 6 + int(rng() % 25), c = 2 + int(rng() % 3);
        const Matrix d = testutil::random_dissimilarity(n, rng, trial % 2 == 0);
        MecmParams p = params(c);
        p.alpha = testutil::uniform(rng, 0.5, 2);
        p.gamma = testutil::uniform(rng, 0.1, 2);
        p.eta = testutil::uniform(rng, 0.3, 1);
        p.delta = testutil::uniform(rng, 2, 20);
        p.max_iter = 200;
        PrototypeSet init;
        for (int k = 0; k < c; ++k) init.push_back(k);
        auto r = mecm_fit(d, p, init);
        const auto& tr = r.report.objective_trace;
        for (std::size_t t = 1; t < tr.size(); ++t) EXPECT_LE(tr[t], tr[t - 1] + 1e-9);
        EXPECT_EQ(r.report.converged_by, StopReason::prototypes_stable);
        for (int i = 0; i < n; ++i) {
            double total = 0.0;
            for (double x : r.partition.row(i)) total += x;
            EXPECT_NEAR(total, 1.0, 1e-9);
        }
    }
}

TEST(MecmFit, ThreadCountDoesNotChangeResults) {
    std::mt19937_64 rng(77);
    const Matrix d = testutil::random_dissimilarity(40, rng);
    MecmParams p = params(3);
    auto a = mecm_fit(d, p, {0, 1, 2});
    p.threads = 4;
    auto b = mecm_fit(d, p, {0, 1, 2});
    EXPECT_EQ(a.prototypes, b.prototypes);
    EXPECT_EQ(a.partition.masses(), b.partition.masses());
    EXPECT_EQ(a.report.objective_trace, b.report.objective_trace);
}

TEST(MecmFit, ValidatesInputs) {
    Matrix d = Matrix::Zero(3, 3);
    MecmParams p = params(2);
    EXPECT_THROW(mecm_fit(d, p, {0, 0}), ValidationError);
    EXPECT_THROW(mecm_fit(d, p, {0}), ValidationError);
    EXPECT_THROW(mecm_fit(d, p, {0, 3}), ValidationError);
    d(0, 1) = -1;
    EXPECT_THROW(mecm_fit(d, p, {0, 1}), ValidationError);
    d(0, 1) = 1;
    p.eta = 0.0;
    EXPECT_THROW(mecm_fit(d, p, {0, 1}), ValidationError);
    p.eta = 1.0;
    p.beta = 1.0;
    EXPECT_THROW(mecm_fit(d, p, {0, 1}), ValidationError);
}

TEST(MecmFit, HitsIterationCapWithFinalMassUpdate) {
    std::mt19937_64 rng(31);
    const Matrix d = testutil::random_dissimilarity(20, rng);
    MecmParams p = params(3);
    p.max_iter = 1;
    auto r = mecm_fit(d, p, {0, 1, 2});
    if (r.report.converged_by == StopReason::max_iter) {
        auto expect = mass_update(meta_matrix(d, r.prototypes, r.partition.structure(), p), r.partition.structure(), p);
        EXPECT_EQ(expect.masses(), r.partition.masses());
    }
    EXPECT_EQ(r.report.iterations, 1);
}

TEST(ValidityIndex, Examples) {
    FocalStructure s(3, FocalMode::full_power_set);
    RowMatrix crisp = RowMatrix::Zero(3, 8);
    crisp(0, 1) = crisp(1, 2) = crisp(2, 4) = 1.0;
    EXPECT_EQ(validity_index(CredalPartition(s, crisp)), 0.0);
    RowMatrix vac = RowMatrix::Zero(3, 8);
    vac.col(7).setOnes();
    EXPECT_EQ(validity_index(CredalPartition(s, vac)), 1.0);
    RowMatrix emp = RowMatrix::Zero(3, 8);
    emp.col(0).setOnes();
    EXPECT_EQ(validity_index(CredalPartition(s, emp)), 1.0);
    FocalStructure s1(1, FocalMode::full_power_set);
    EXPECT_THROW(validity_index(CredalPartition(s1, RowMatrix::Constant(1, 2, 0.5))), ValidationError);
}
