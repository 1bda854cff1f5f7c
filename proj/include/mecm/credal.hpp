#ifndef MECM_CREDAL_HPP
#define MECM_CREDAL_HPP

// Median evidential c-means on an arbitrary dissimilarity matrix.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mecm/belief.hpp"
#include "mecm/error.hpp"
#include "mecm/parallel.hpp"

namespace mecm {

using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// 0-based object indices, one per cluster.
using PrototypeSet = std::vector<int>;

inline void validate_dissimilarity(const Matrix& d) {
    detail::require(d.rows() == d.cols(), "dissimilarity matrix must be square");
    detail::require(d.rows() >= 1, "dissimilarity matrix is empty");
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            detail::require(std::isfinite(d(i, j)) && d(i, j) >= 0.0,
                            "dissimilarity entries must be finite and nonnegative (row " +
                                std::to_string(i + 1) + ", column " + std::to_string(j + 1) + ")");
}

inline void validate_prototypes(const PrototypeSet& v, int n, int c) {
    detail::require(static_cast<int>(v.size()) == c,
                    "expected " + std::to_string(c) + " prototypes, got " + std::to_string(v.size()));
    detail::require(n >= c, "need at least as many objects as clusters");
    for (std::size_t a = 0; a < v.size(); ++a) {
        detail::require(v[a] >= 0 && v[a] < n, "prototype index out of range");
        for (std::size_t b = 0; b < a; ++b)
            detail::require(v[a] != v[b], "prototypes must be distinct objects");
    }
}

struct MecmParams {
    int c = 2;
    double alpha = 1.0;
    double beta = 2.0;
    double delta = 10.0;
    double gamma = 1.0;
    double eta = 1.0;
    int max_iter = 100;
    double distance_floor = 1e-12;
    int threads = 1;  // does not change results

    void validate() const {
        detail::require(c >= 1, "c must be positive");
        detail::require(std::isfinite(alpha), "alpha must be finite");
        detail::require(beta > 1.0 && std::isfinite(beta), "beta must be > 1");
        detail::require(delta > 0.0 && std::isfinite(delta), "delta must be > 0");
        detail::require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
        detail::require(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
        detail::require(max_iter >= 1, "max_iter must be >= 1");
        detail::require(distance_floor > 0.0, "distance_floor must be > 0");
    }
};

class CredalPartition {
public:
    CredalPartition() = default;
    CredalPartition(FocalStructure structure, RowMatrix masses)
        : structure_(std::move(structure)), masses_(std::move(masses)) {
        detail::require(masses_.cols() == static_cast<Eigen::Index>(structure_.size()),
                        "mass matrix width does not match focal structure");
        for (Eigen::Index i = 0; i < masses_.rows(); ++i) detail::check_masses(structure_, row(i));
    }

    const FocalStructure& structure() const { return structure_; }
    const RowMatrix& masses() const { return masses_; }
    int n() const { return static_cast<int>(masses_.rows()); }
    int c() const { return structure_.frame_size(); }
    std::span<const double> row(Eigen::Index i) const {
        return {masses_.data() + i * masses_.cols(), static_cast<std::size_t>(masses_.cols())};
    }
    MassFunction mass_function(Eigen::Index i) const {
        auto r = row(i);
        return {structure_, std::vector<double>(r.begin(), r.end())};
    }

private:
    FocalStructure structure_;
    RowMatrix masses_;
};

enum class StopReason { prototypes_stable, max_iter };

inline std::string to_string(StopReason r) {
    return r == StopReason::prototypes_stable ? "prototypes_stable" : "max_iter";
}

struct FitReport {
    std::vector<double> objective_trace;
    int iterations = 0;
    StopReason converged_by = StopReason::max_iter;
};

// Spread of an object's distances to the prototypes of a meta-cluster, relative
// to the spread of those prototypes. member_dist[x] = d(i, v_x); proto_dist is
// |A| x |A| with proto_dist(x, y) = d(v_x, v_y). Sums run over ordered pairs.
inline double rho(std::span<const double> member_dist, const Matrix& proto_dist, double eta,
                  double floor = 1e-12) {
    const auto a = static_cast<Eigen::Index>(member_dist.size());
    detail::require(a >= 2, "rho needs a focal set with at least two clusters");
    detail::require(proto_dist.rows() == a && proto_dist.cols() == a, "prototype distance block has wrong shape");
    detail::require(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
    double num = 0.0, den = 0.0;
    for (Eigen::Index x = 0; x < a; ++x)
        for (Eigen::Index y = 0; y < a; ++y) {
            if (x == y) continue;
            num += std::abs(member_dist[x] - member_dist[y]);
            den += proto_dist(x, y);
        }
    return num / std::max(eta * den, floor);
}

namespace detail {

// d-bar^2 for one object and one nonempty focal set given the object's
// distances to every prototype. Shared by the update and the candidate scan.
inline double meta_value(const FocalSet& a, std::span<const double> dist_to_proto, const Matrix& d,
                         const PrototypeSet& v, const MecmParams& p) {
    const int card = a.cardinality();
    if (card == 1) {
        const double x = dist_to_proto[std::countr_zero(a.mask())];
        return x * x;
    }
    double sq = 0.0, mn = std::numeric_limits<double>::infinity(), num = 0.0, den = 0.0;
    for (std::uint32_t mx = a.mask(); mx; mx &= mx - 1) {
        const int kx = std::countr_zero(mx);
        const double dx = dist_to_proto[kx];
        sq += dx * dx;
        mn = std::min(mn, dx);
        for (std::uint32_t my = a.mask(); my; my &= my - 1) {
            const int ky = std::countr_zero(my);
            if (ky == kx) continue;
            num += std::abs(dx - dist_to_proto[ky]);
            den += d(v[kx], v[ky]);
        }
    }
    const double r = num / std::max(p.eta * den, p.distance_floor);
    return (p.gamma * sq / card + r * mn) / (p.gamma + 1.0);
}

}  // namespace detail

inline double meta_dissimilarity(int i, const FocalSet& a, const Matrix& d, const PrototypeSet& v,
                                 const MecmParams& p) {
    detail::require(!a.is_empty(), "meta dissimilarity is undefined for the empty set");
    detail::require(a.frame_size() == static_cast<int>(v.size()), "frame size mismatch");
    detail::require(i >= 0 && i < d.rows(), "object index out of range");
    std::vector<double> dv(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) dv[k] = d(i, v[k]);
    return detail::meta_value(a, dv, d, v, p);
}

// n x |F| matrix of squared meta dissimilarities; the empty-set column holds delta^2.
inline RowMatrix meta_matrix(const Matrix& d, const PrototypeSet& v, const FocalStructure& s,
                             const MecmParams& p) {
    const auto n = d.rows();
    RowMatrix out(n, static_cast<Eigen::Index>(s.size()));
    detail::parallel_for(static_cast<std::size_t>(n), p.threads, [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        std::vector<double> dv(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) dv[k] = d(i, v[k]);
        out(i, 0) = p.delta * p.delta;
        for (std::size_t j = 1; j < s.size(); ++j)
            out(i, static_cast<Eigen::Index>(j)) = detail::meta_value(s[j], dv, d, v, p);
    });
    return out;
}

// Closed-form mass minimizer for fixed meta dissimilarities. Evaluated in log
// space so small beta - 1 does not overflow.
inline CredalPartition mass_update(const RowMatrix& dbar, const FocalStructure& s, const MecmParams& p) {
    p.validate();
    detail::require(dbar.cols() == static_cast<Eigen::Index>(s.size()), "meta matrix width mismatch");
    const double e = 1.0 / (p.beta - 1.0);
    const double floor2 = p.distance_floor * p.distance_floor;
    const auto width = static_cast<std::size_t>(s.size());
    RowMatrix m(dbar.rows(), dbar.cols());
    detail::parallel_for(static_cast<std::size_t>(dbar.rows()), p.threads, [&](std::size_t ii) {
        const auto i = static_cast<Eigen::Index>(ii);
        std::vector<double> logw(width);
        logw[0] = -2.0 * e * std::log(p.delta);
        double top = logw[0];
        for (std::size_t j = 1; j < width; ++j) {
            const double x = dbar(i, static_cast<Eigen::Index>(j));
            detail::require(x >= 0.0, "meta dissimilarities must be nonnegative");
            logw[j] = -p.alpha * e * std::log(double(s[j].cardinality())) - e * std::log(std::max(x, floor2));
            top = std::max(top, logw[j]);
        }
        double total = 0.0;
        for (auto& w : logw) total += (w = std::exp(w - top));
        for (std::size_t j = 0; j < width; ++j) m(i, static_cast<Eigen::Index>(j)) = logw[j] / total;
    });
    return {s, std::move(m)};
}

inline double objective(const CredalPartition& m, const RowMatrix& dbar, const MecmParams& p) {
    detail::require(dbar.rows() == m.n() && dbar.cols() == m.masses().cols(), "shape mismatch");
    const auto& s = m.structure();
    double j_total = 0.0;
    for (int i = 0; i < m.n(); ++i) {
        auto r = m.row(i);
        j_total += p.delta * p.delta * std::pow(r[0], p.beta);
        for (std::size_t j = 1; j < s.size(); ++j)
            j_total += std::pow(double(s[j].cardinality()), p.alpha) * std::pow(r[j], p.beta) *
                       dbar(i, static_cast<Eigen::Index>(j));
    }
    return j_total;
}

// Gauss-Seidel medoid scan: cluster k's prototype becomes the object minimizing
// the part of J that depends on v_k, with the other prototypes held fixed.
inline PrototypeSet prototype_update(const CredalPartition& m, const Matrix& d, const PrototypeSet& v_old,
                                     const MecmParams& p) {
    const int n = static_cast<int>(d.rows());
    const int c = m.c();
    validate_prototypes(v_old, n, c);
    detail::require(m.n() == n, "partition and dissimilarity sizes differ");
    const auto& s = m.structure();

    // Weights |A|^alpha m^beta do not depend on the prototypes.
    RowMatrix w(n, static_cast<Eigen::Index>(s.size()));
    for (int i = 0; i < n; ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j < s.size(); ++j)
            w(i, static_cast<Eigen::Index>(j)) = std::pow(double(s[j].cardinality()), p.alpha) * std::pow(r[j], p.beta);
    }

    PrototypeSet v = v_old;
    std::vector<double> cost(static_cast<std::size_t>(n));
    for (int k = 0; k < c; ++k) {
        std::vector<std::size_t> sets;
        for (std::size_t j = 1; j < s.size(); ++j)
            if (s[j].contains(k)) sets.push_back(j);
        detail::parallel_for(static_cast<std::size_t>(n), p.threads, [&](std::size_t l) {
            const int cand = static_cast<int>(l);
            for (int o = 0; o < c; ++o)
                if (o != k && v[o] == cand) {
                    cost[l] = std::numeric_limits<double>::infinity();
                    return;
                }
            PrototypeSet trial = v;
            trial[k] = cand;
            std::vector<double> dv(static_cast<std::size_t>(c));
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int o = 0; o < c; ++o) dv[o] = d(i, trial[o]);
                for (std::size_t j : sets)
                    total += w(i, static_cast<Eigen::Index>(j)) * detail::meta_value(s[j], dv, d, trial, p);
            }
            cost[l] = total;
        });
        int best = -1;
        for (int l = 0; l < n; ++l)
            if (std::isfinite(cost[l]) && (best < 0 || cost[l] < cost[best])) best = l;
        v[k] = best;
    }
    return v;
}

struct MecmResult {
    CredalPartition partition;
    PrototypeSet prototypes;
    FitReport report;
};

inline MecmResult mecm_fit(const Matrix& d, const MecmParams& p, const FocalStructure& s, const PrototypeSet& init) {
    p.validate();
    validate_dissimilarity(d);
    detail::require(s.frame_size() == p.c, "focal structure frame size differs from c");
    validate_prototypes(init, static_cast<int>(d.rows()), p.c);

    MecmResult out;
    PrototypeSet v = init;
    for (int t = 1; t <= p.max_iter; ++t) {
        CredalPartition m = mass_update(meta_matrix(d, v, s, p), s, p);
        PrototypeSet next = prototype_update(m, d, v, p);
        out.report.objective_trace.push_back(objective(m, meta_matrix(d, next, s, p), p));
        out.report.iterations = t;
        if (next == v) {
            out.partition = std::move(m);
            out.prototypes = std::move(v);
            out.report.converged_by = StopReason::prototypes_stable;
            return out;
        }
        v = std::move(next);
    }
    out.partition = mass_update(meta_matrix(d, v, s, p), s, p);
    out.prototypes = std::move(v);
    out.report.converged_by = StopReason::max_iter;
    return out;
}

inline MecmResult mecm_fit(const Matrix& d, const MecmParams& p, const PrototypeSet& init) {
    return mecm_fit(d, p, FocalStructure::default_for(p.c), init);
}

// N*: 0 for crisp partitions, 1 when all mass sits on Omega or on the empty set.
inline double validity_index(const CredalPartition& m) {
    const int c = m.c();
    detail::require(c >= 2, "validity index needs c >= 2");
    detail::require(m.n() >= 1, "empty partition");
    const auto& s = m.structure();
    const double lc = std::log2(double(c));
    double total = 0.0;
    for (int i = 0; i < m.n(); ++i) {
        auto r = m.row(i);
        double row_total = r[0] * lc;
        for (std::size_t j = 1; j < s.size(); ++j) row_total += r[j] * std::log2(double(s[j].cardinality()));
        total += row_total / lc;
    }
    return total / m.n();
}

}  // namespace mecm

#endif  // MECM_CREDAL_HPP
