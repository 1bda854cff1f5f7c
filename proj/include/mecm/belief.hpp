#ifndef MECM_BELIEF_HPP
#define MECM_BELIEF_HPP

// Mass functions over the power set of a cluster frame {w_1..w_c}.
//
// Focal sets are bit masks: bit k set <=> cluster k (0-based) is a member.
// Every operation here is a pure function of its arguments.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mecm/error.hpp"

namespace mecm {

inline constexpr int kMaxFrameSize = 30;
inline constexpr double kMassTolerance = 1e-9;

class FocalSet {
public:
    FocalSet() = default;
    FocalSet(int frame_size, std::uint32_t mask) : frame_size_(frame_size), mask_(mask) {
        detail::require(frame_size >= 0 && frame_size <= kMaxFrameSize, "frame size out of range");
        detail::require((mask >> frame_size) == 0,
                        "focal set has members outside the frame");
    }

    static FocalSet empty_set(int c) { return {c, 0u}; }
    static FocalSet omega(int c) { return {c, full_mask(c)}; }
    static FocalSet singleton(int c, int k) {
        detail::require(k >= 0 && k < c, "singleton index out of range");
        return {c, 1u << k};
    }
    // 0-based member indices.
    static FocalSet of(int c, std::initializer_list<int> members) {
        std::uint32_t m = 0;
        for (int k : members) {
            detail::require(k >= 0 && k < c, "member index out of range");
            m |= 1u << k;
        }
        return {c, m};
    }

    static constexpr std::uint32_t full_mask(int c) {
        return c >= 32 ? ~0u : ((1u << c) - 1u);
    }

    int frame_size() const { return frame_size_; }
    std::uint32_t mask() const { return mask_; }
    int cardinality() const { return std::popcount(mask_); }
    bool is_empty() const { return mask_ == 0; }
    bool is_singleton() const { return std::popcount(mask_) == 1; }
    bool contains(int k) const { return (mask_ >> k) & 1u; }
    bool subset_of(const FocalSet& o) const { return (mask_ & ~o.mask_) == 0; }
    bool intersects(const FocalSet& o) const { return (mask_ & o.mask_) != 0; }
    FocalSet complement() const { return {frame_size_, full_mask(frame_size_) & ~mask_}; }

    std::vector<int> members() const {
        std::vector<int> out;
        for (int k = 0; k < frame_size_; ++k)
            if (contains(k)) out.push_back(k);
        return out;
    }

    bool operator==(const FocalSet&) const = default;

private:
    int frame_size_ = 0;
    std::uint32_t mask_ = 0;
};

enum class FocalMode { full_power_set, pairs_plus_omega };

inline std::string to_string(FocalMode m) {
    return m == FocalMode::full_power_set ? "full" : "pairs";
}

// Ordered list of focal sets, sorted by mask. Always holds the empty set
// and every singleton.
class FocalStructure {
public:
    FocalStructure() = default;
    FocalStructure(int frame_size, FocalMode mode) : frame_size_(frame_size), mode_(mode) {
        detail::require(frame_size >= 1 && frame_size <= kMaxFrameSize,
                        "frame size must be in [1, " + std::to_string(kMaxFrameSize) + "]");
        std::vector<std::uint32_t> masks;
        if (mode == FocalMode::full_power_set) {
            detail::require(frame_size <= 20, "full power set limited to c <= 20");
            masks.resize(std::size_t{1} << frame_size);
            std::iota(masks.begin(), masks.end(), 0u);
        } else {
            masks.push_back(0);
            for (int a = 0; a < frame_size; ++a) {
                masks.push_back(1u << a);
                for (int b = a + 1; b < frame_size; ++b) masks.push_back((1u << a) | (1u << b));
            }
            masks.push_back(FocalSet::full_mask(frame_size));
            std::sort(masks.begin(), masks.end());
            masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        }
        sets_.reserve(masks.size());
        for (std::size_t j = 0; j < masks.size(); ++j) {
            sets_.emplace_back(frame_size, masks[j]);
            index_.emplace(masks[j], j);
        }
    }

    // Full power set up to 8 clusters, pairs plus omega above.
    static FocalStructure default_for(int c) {
        return {c, c <= 8 ? FocalMode::full_power_set : FocalMode::pairs_plus_omega};
    }

    int frame_size() const { return frame_size_; }
    FocalMode mode() const { return mode_; }
    std::size_t size() const { return sets_.size(); }
    const FocalSet& operator[](std::size_t j) const { return sets_[j]; }
    const std::vector<FocalSet>& sets() const { return sets_; }
    auto begin() const { return sets_.begin(); }
    auto end() const { return sets_.end(); }

    bool contains(std::uint32_t mask) const { return index_.count(mask) != 0; }
    std::size_t index_of(std::uint32_t mask) const {
        auto it = index_.find(mask);
        detail::require(it != index_.end(), "focal set not in structure");
        return it->second;
    }
    std::size_t index_of(const FocalSet& a) const {
        detail::require(a.frame_size() == frame_size_, "frame size mismatch");
        return index_of(a.mask());
    }
    // Position of the empty set; always 0 since sets are sorted by mask.
    static constexpr std::size_t empty_index() { return 0; }

    bool operator==(const FocalStructure& o) const {
        return frame_size_ == o.frame_size_ && mode_ == o.mode_;
    }

private:
    int frame_size_ = 0;
    FocalMode mode_ = FocalMode::full_power_set;
    std::vector<FocalSet> sets_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
};

namespace detail {

inline void check_masses(const FocalStructure& s, std::span<const double> m) {
    require(m.size() == s.size(), "mass vector length does not match focal structure");
    double total = 0.0;
    for (double v : m) {
        require(std::isfinite(v) && v >= 0.0, "masses must be finite and nonnegative");
        total += v;
    }
    require(std::abs(total - 1.0) <= kMassTolerance, "masses must sum to 1");
}

}  // namespace detail

// Primitives on a (structure, mass row) pair. The CredalPartition rows use
// these directly; MassFunction below wraps them.

inline double bel(const FocalStructure& s, std::span<const double> m, const FocalSet& a) {
    detail::require(a.frame_size() == s.frame_size(), "frame size mismatch");
    double out = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (!s[j].is_empty() && s[j].subset_of(a)) out += m[j];
    return out;
}

inline double pl(const FocalStructure& s, std::span<const double> m, const FocalSet& a) {
    detail::require(a.frame_size() == s.frame_size(), "frame size mismatch");
    double out = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (s[j].intersects(a)) out += m[j];
    return out;
}

// pl restricted to singletons.
inline std::vector<double> contour(const FocalStructure& s, std::span<const double> m) {
    std::vector<double> out(static_cast<std::size_t>(s.frame_size()), 0.0);
    for (std::size_t j = 0; j < s.size(); ++j)
        for (int k : s[j].members()) out[static_cast<std::size_t>(k)] += m[j];
    return out;
}

inline std::vector<double> pignistic(const FocalStructure& s, std::span<const double> m) {
    const double conflict = m[FocalStructure::empty_index()];
    if (!(conflict < 1.0 - 1e-12))
        throw NumericError("pignistic transform undefined: all mass on the empty set");
    const double k = 1.0 / (1.0 - conflict);
    std::vector<double> out(static_cast<std::size_t>(s.frame_size()), 0.0);
    for (std::size_t j = 1; j < s.size(); ++j) {
        const double share = m[j] * k / s[j].cardinality();
        for (int w : s[j].members()) out[static_cast<std::size_t>(w)] += share;
    }
    return out;
}

// Per-set weight for the plausibility decision rule. Null means 1 everywhere.
using SetWeight = std::function<double(const FocalSet&)>;

// argmax over nonempty X of K * lambda_X / |X|^r * Pl(X).
// Near-equal scores (1e-12 relative) count as ties: smallest |X|, then lowest mask.
inline FocalSet plausibility_decision(const FocalStructure& s, std::span<const double> m, double r,
                                      const SetWeight& lambda = {}) {
    detail::require(r >= 0.0 && r <= 1.0, "r must lie in [0, 1]");
    const int c = s.frame_size();
    detail::require(c <= 20, "decision rule enumerates 2^c subsets; c <= 20");
    const double conflict = m[FocalStructure::empty_index()];
    if (!(conflict < 1.0 - 1e-12))
        throw NumericError("decision undefined: all mass on the empty set");
    const double kb = 1.0 / (1.0 - conflict);

    std::vector<std::uint32_t> order(FocalSet::full_mask(c));
    std::iota(order.begin(), order.end(), 1u);
    std::stable_sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::popcount(a) < std::popcount(b);
    });

    FocalSet best;
    double best_score = -1.0;
    for (std::uint32_t mask : order) {
        FocalSet x(c, mask);
        const double w = lambda ? lambda(x) : 1.0;
        const double score = kb * w * std::pow(1.0 / x.cardinality(), r) * pl(s, m, x);
        const double tol = 1e-12 * std::max({1.0, std::abs(score), std::abs(best_score)});
        if (score > best_score + tol) {
            best_score = score;
            best = x;
        }
    }
    return best;
}

class MassFunction {
public:
    MassFunction(FocalStructure structure, std::vector<double> masses)
        : structure_(std::move(structure)), masses_(std::move(masses)) {
        detail::check_masses(structure_, masses_);
    }

    // Vacuous mass: m(Omega) = 1.
    static MassFunction vacuous(const FocalStructure& s) {
        std::vector<double> m(s.size(), 0.0);
        m[s.index_of(FocalSet::full_mask(s.frame_size()))] = 1.0;
        return {s, std::move(m)};
    }

    // Build from (set, mass) pairs; unlisted sets get 0.
    static MassFunction from_pairs(const FocalStructure& s,
                                   std::initializer_list<std::pair<FocalSet, double>> pairs) {
        std::vector<double> m(s.size(), 0.0);
        for (const auto& [a, v] : pairs) m[s.index_of(a)] += v;
        return {s, std::move(m)};
    }

    const FocalStructure& structure() const { return structure_; }
    std::span<const double> masses() const { return masses_; }
    int frame_size() const { return structure_.frame_size(); }
    double operator()(const FocalSet& a) const {
        return structure_.contains(a.mask()) ? masses_[structure_.index_of(a)] : 0.0;
    }
    double conflict() const { return masses_[FocalStructure::empty_index()]; }

    double bel(const FocalSet& a) const { return mecm::bel(structure_, masses_, a); }
    double pl(const FocalSet& a) const { return mecm::pl(structure_, masses_, a); }
    std::vector<double> contour() const { return mecm::contour(structure_, masses_); }
    std::vector<double> pignistic() const { return mecm::pignistic(structure_, masses_); }
    FocalSet decide(double r, const SetWeight& lambda = {}) const {
        return plausibility_decision(structure_, masses_, r, lambda);
    }

private:
    FocalStructure structure_;
    std::vector<double> masses_;
};

// Normalized conjunctive (Dempster) combination. Both inputs must share a
// focal structure; full and pairs-plus-omega structures are closed under
// intersection, so the result lives on the same structure.
inline MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2) {
    const auto& s = m1.structure();
    detail::require(s.frame_size() == m2.frame_size(), "frame size mismatch");
    detail::require(s == m2.structure(), "mass functions use different focal structures");
    std::vector<double> out(s.size(), 0.0);
    const auto a = m1.masses();
    const auto b = m2.masses();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (b[j] == 0.0) continue;
            out[s.index_of(s[i].mask() & s[j].mask())] += a[i] * b[j];
        }
    }
    const double conflict = out[FocalStructure::empty_index()];
    if (!(conflict < 1.0 - 1e-12))
        throw NumericError("Dempster combination undefined: total conflict between sources");
    const double norm = 1.0 - conflict;
    out[FocalStructure::empty_index()] = 0.0;
    for (double& v : out) v /= norm;
    return {s, std::move(out)};
}

}  // namespace mecm

#endif  // MECM_BELIEF_HPP
