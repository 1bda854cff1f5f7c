#ifndef MECM_COMMUNITY_HPP
#define MECM_COMMUNITY_HPP

// Community detection: one dissimilarity per graph, MECM for every c in a
// range, keep the c with the largest evidential modularity.

#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "mecm/baselines.hpp"
#include "mecm/credal.hpp"
#include "mecm/evaluation.hpp"
#include "mecm/graph.hpp"

namespace mecm {

enum class InitStrategy { esc, mfcm_refined, random };

struct DetectionConfig {
    int c_min = 2;
    int c_max = 6;
    MecmParams mecm;  // c is overwritten per sweep step
    SeedConfig seeding;
    InitStrategy init = InitStrategy::esc;
    std::uint64_t seed = 0;  // used by InitStrategy::random
    LambdaScale scale = LambdaScale::root_mean;

    void validate() const {
        detail::require(c_min >= 2, "c_min must be >= 2");
        detail::require(c_min <= c_max, "c_min must not exceed c_max");
        seeding.validate();
    }
};

struct DetectionResult {
    int best_c = 0;
    MecmResult best;
    std::vector<std::pair<int, double>> q_trace;
    std::vector<MecmResult> fits;  // one per c, in sweep order
};

// Distinct objects drawn uniformly; the stream depends only on (seed, c).
inline PrototypeSet random_prototypes(int n, int c, std::uint64_t seed) {
    detail::require(c <= n, "more prototypes requested than objects");
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(c)};
    std::mt19937_64 rng(seq);
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < c; ++i) {
        const int j = i + static_cast<int>(rng() % std::uint64_t(n - i));
        std::swap(pool[i], pool[j]);
    }
    return {pool.begin(), pool.begin() + c};
}

inline PrototypeSet initial_prototypes(const Dissimilarity& d, const std::vector<double>& scores, int c,
                                       const DetectionConfig& cfg) {
    const int n = static_cast<int>(d.lambda.rows());
    if (cfg.init == InitStrategy::random) return random_prototypes(n, c, cfg.seed);
    SeedConfig sc = cfg.seeding;
    sc.c = c;
    PrototypeSet seeds = select_prototypes(scores, d.normalized, sc);
    if (cfg.init == InitStrategy::esc) return seeds;
    return mfcm_fit(d.lambda, c, cfg.mecm.beta, seeds, cfg.mecm.max_iter, cfg.mecm.threads).prototypes;
}

inline DetectionResult detect_communities(const WeightedGraph& g, const Dissimilarity& d,
                                          const std::vector<double>& scores, const DetectionConfig& cfg) {
    cfg.validate();
    detail::require(d.lambda.rows() == g.n(), "dissimilarity does not match graph");
    detail::require(cfg.c_max <= g.n(), "c_max exceeds node count");
    DetectionResult out;
    double best_q = 0.0;
    for (int c = cfg.c_min; c <= cfg.c_max; ++c) {
        MecmParams p = cfg.mecm;
        p.c = c;
        MecmResult fit = mecm_fit(d.lambda, p, FocalStructure::default_for(c), initial_prototypes(d, scores, c, cfg));
        const double q = evidential_modularity(g, fit.partition);
        out.q_trace.emplace_back(c, q);
        if (out.fits.empty() || q > best_q) {
            best_q = q;
            out.best_c = c;
            out.best = fit;
        }
        out.fits.push_back(std::move(fit));
    }
    return out;
}

inline DetectionResult detect_communities(const WeightedGraph& g, const DetectionConfig& cfg) {
    cfg.validate();
    const Dissimilarity d = graph_dissimilarity(g, cfg.scale, cfg.mecm.threads);
    return detect_communities(g, d, esc_centrality(g), cfg);
}

}  // namespace mecm

#endif  // MECM_COMMUNITY_HPP
