#ifndef MECM_EVALUATION_HPP
#define MECM_EVALUATION_HPP

// Pair-counting indices and their evidential versions, hardening rules,
// modularity and information-theoretic agreement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "mecm/baselines.hpp"
#include "mecm/belief.hpp"
#include "mecm/credal.hpp"
#include "mecm/graph.hpp"

namespace mecm {

inline HardPartition harden_pignistic(const CredalPartition& m) {
    HardPartition out(static_cast<std::size_t>(m.n()));
    for (int i = 0; i < m.n(); ++i) {
        auto bet = pignistic(m.structure(), m.row(i));
        out[i] = static_cast<int>(std::max_element(bet.begin(), bet.end()) - bet.begin());
    }
    return out;
}

// Row argmax of a fuzzy partition, ties to the lower cluster.
inline HardPartition harden_fuzzy(const FuzzyPartition& u) {
    HardPartition out(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        Eigen::Index k;
        u.row(i).maxCoeff(&k);
        out[i] = static_cast<int>(k);
    }
    return out;
}

// Maximal-mass focal set per object; ties go to the smaller set, then the lower mask.
inline std::vector<FocalSet> harden_credal(const CredalPartition& m) {
    const auto& s = m.structure();
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s[a].cardinality() < s[b].cardinality(); });
    std::vector<FocalSet> out;
    out.reserve(static_cast<std::size_t>(m.n()));
    for (int i = 0; i < m.n(); ++i) {
        auto r = m.row(i);
        std::size_t best = order[0];
        for (std::size_t j : order)
            if (r[j] > r[best]) best = j;
        out.push_back(s[best]);
    }
    return out;
}

// Crisp credal partition with all mass on each object's cluster.
inline CredalPartition crisp_partition(const HardPartition& labels, int c) {
    FocalStructure s = FocalStructure::default_for(c);
    RowMatrix m = RowMatrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        detail::require(labels[i] >= 0 && labels[i] < c, "label out of range");
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s.index_of(1u << labels[i]))) = 1.0;
    }
    return {std::move(s), std::move(m)};
}

// Bayesian credal partition carrying the fuzzy memberships on singletons.
inline CredalPartition bayesian_partition(const FuzzyPartition& u) {
    const int c = static_cast<int>(u.cols());
    FocalStructure s = FocalStructure::default_for(c);
    RowMatrix m = RowMatrix::Zero(u.rows(), static_cast<Eigen::Index>(s.size()));
    for (int k = 0; k < c; ++k) m.col(static_cast<Eigen::Index>(s.index_of(1u << k))) = u.col(k);
    return {std::move(s), std::move(m)};
}

struct PairCounts {
    std::int64_t a = 0, b = 0, fp = 0, fn = 0;
};

struct PairIndices {
    PairCounts counts;
    double precision = 1.0, recall = 1.0, rand_index = 1.0;
    bool vacuous_precision = false;  // no pair was put together; P set to 1
};

struct EvidentialPairCounts {
    std::int64_t a_star = 0, b_star = 0, n_er = 0, n_e = 0, n_r = 0;
};

struct EvidentialIndices {
    EvidentialPairCounts counts;
    double ep = 1.0, er = 1.0, eri = 1.0;
    bool vacuous_precision = false;  // no specific pair; EP set to 1
};

namespace detail {

inline double ratio_or_one(std::int64_t num, std::int64_t den) {
    return den == 0 ? 1.0 : double(num) / double(den);
}

}  // namespace detail

inline PairIndices pair_indices(const HardPartition& pred, const HardPartition& ref) {
    detail::require(pred.size() == ref.size(), "partitions have different sizes");
    const auto n = static_cast<std::int64_t>(pred.size());
    detail::require(n >= 2, "pair indices need at least two objects");
    PairIndices out;
    auto& k = out.counts;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j) {
            const bool same_pred = pred[i] == pred[j], same_ref = ref[i] == ref[j];
            if (same_pred && same_ref) ++k.a;
            else if (!same_pred && !same_ref) ++k.b;
            else if (same_pred) ++k.fp;
            else ++k.fn;
        }
    out.vacuous_precision = k.a + k.fp == 0;
    out.precision = detail::ratio_or_one(k.a, k.a + k.fp);
    out.recall = detail::ratio_or_one(k.a, k.a + k.fn);
    out.rand_index = 2.0 * double(k.a + k.b) / double(n * (n - 1));
    return out;
}

// A pair is specific-together when both objects harden to the same singleton.
// b* counts reference-separated pairs that are not specific-together.
inline EvidentialIndices evidential_indices(const std::vector<FocalSet>& pred, const HardPartition& ref) {
    detail::require(pred.size() == ref.size(), "partitions have different sizes");
    const auto n = static_cast<std::int64_t>(pred.size());
    detail::require(n >= 2, "pair indices need at least two objects");
    EvidentialIndices out;
    auto& k = out.counts;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j) {
            const bool together = pred[i].is_singleton() && pred[i] == pred[j];
            const bool same_ref = ref[i] == ref[j];
            if (together) ++k.n_e;
            if (same_ref) ++k.n_r;
            if (together && same_ref) ++k.n_er;
            if (!together && !same_ref) ++k.b_star;
        }
    k.a_star = k.n_er;
    out.vacuous_precision = k.n_e == 0;
    out.ep = detail::ratio_or_one(k.n_er, k.n_e);
    out.er = detail::ratio_or_one(k.n_er, k.n_r);
    out.eri = 2.0 * double(k.a_star + k.b_star) / double(n * (n - 1));
    return out;
}

// trace(U' B U) / ||W|| with B = W - k k' / ||W||.
inline double modularity(const WeightedGraph& g, const Matrix& u) {
    detail::require(u.rows() == g.n(), "membership matrix has wrong row count");
    const double total = g.total_weight();
    detail::require(total > 0.0, "modularity is undefined on an edgeless graph");
    const Eigen::VectorXd k = g.weights().rowwise().sum();
    const Matrix wu = g.weights() * u;
    const Eigen::RowVectorXd ku = k.transpose() * u;
    return ((u.transpose() * wu).trace() - ku.squaredNorm() / total) / total;
}

inline Matrix indicator_matrix(const HardPartition& labels, int c) {
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), c);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        detail::require(labels[i] >= 0 && labels[i] < c, "label out of range");
        u(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return u;
}

inline Matrix contour_matrix(const CredalPartition& m) {
    Matrix pl(m.n(), m.c());
    for (int i = 0; i < m.n(); ++i) {
        auto row = contour(m.structure(), m.row(i));
        for (int k = 0; k < m.c(); ++k) pl(i, k) = row[k];
    }
    return pl;
}

inline double evidential_modularity(const WeightedGraph& g, const CredalPartition& m) {
    return modularity(g, contour_matrix(m));
}

struct InfoScores {
    double nmi = 1.0;
    double vi = 0.0;  // nats
};

inline InfoScores nmi_vi(const HardPartition& pred, const HardPartition& ref) {
    detail::require(pred.size() == ref.size(), "partitions have different sizes");
    detail::require(!pred.empty(), "partitions are empty");
    const double n = double(pred.size());
    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        pa[pred[i]] += 1.0;
        pb[ref[i]] += 1.0;
        joint[{pred[i], ref[i]}] += 1.0;
    }
    auto entropy = [n](const auto& counts) {
        double h = 0.0;
        for (const auto& [key, cnt] : counts) h -= cnt / n * std::log(cnt / n);
        return h;
    };
    const double ha = entropy(pa), hb = entropy(pb);
    double mi = 0.0;
    for (const auto& [key, cnt] : joint)
        mi += cnt / n * std::log(cnt * n / (pa[key.first] * pb[key.second]));
    InfoScores out;
    out.nmi = ha + hb > 0.0 ? std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0) : 1.0;
    out.vi = std::max(0.0, ha + hb - 2.0 * mi);
    return out;
}

}  // namespace mecm

#endif  // MECM_EVALUATION_HPP
