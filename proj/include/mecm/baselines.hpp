#ifndef MECM_BASELINES_HPP
#define MECM_BASELINES_HPP

// Comparison methods: median c-means (hard), median fuzzy c-means, and
// evidential c-means on Euclidean object data.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mecm/credal.hpp"

namespace mecm {

// 0-based cluster index per object.
using HardPartition = std::vector<int>;
// n x c memberships, rows sum to 1.
using FuzzyPartition = RowMatrix;

struct HardResult {
    HardPartition labels;
    PrototypeSet prototypes;
    FitReport report;
};

struct FuzzyResult {
    FuzzyPartition memberships;
    PrototypeSet prototypes;
    FitReport report;
};

namespace detail {

inline void check_fit_inputs(const Matrix& d, int c, const PrototypeSet& init, int max_iter) {
    validate_dissimilarity(d);
    require(c >= 1, "c must be positive");
    require(max_iter >= 1, "max_iter must be >= 1");
    validate_prototypes(init, static_cast<int>(d.rows()), c);
}

// Sequential medoid scan shared by MCM and MFCM: v_k = argmin_l sum_i w(i,k) d(i,l)^2
// over objects that are not another cluster's prototype; ties go to the lower index.
inline PrototypeSet weighted_medoids(const Matrix& d, const RowMatrix& w, PrototypeSet v, int threads) {
    const auto n = d.rows();
    const int c = static_cast<int>(v.size());
    std::vector<double> cost(static_cast<std::size_t>(n));
    for (int k = 0; k < c; ++k) {
        parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t l) {
            for (int o = 0; o < c; ++o)
                if (o != k && v[o] == static_cast<int>(l)) {
                    cost[l] = std::numeric_limits<double>::infinity();
                    return;
                }
            double total = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double x = d(i, static_cast<Eigen::Index>(l));
                total += w(i, k) * x * x;
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

inline HardPartition nearest_prototype(const Matrix& d, const PrototypeSet& v) {
    HardPartition labels(static_cast<std::size_t>(d.rows()));
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        int best = 0;
        for (int k = 1; k < static_cast<int>(v.size()); ++k)
            if (d(i, v[k]) < d(i, v[best])) best = k;
        labels[i] = best;
    }
    return labels;
}

}  // namespace detail

inline double mcm_objective(const Matrix& d, const HardPartition& labels, const PrototypeSet& v) {
    double j = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        const double x = d(i, v[labels[i]]);
        j += x * x;
    }
    return j;
}

// Empty clusters take over the object worst served by its own prototype.
inline HardResult mcm_fit(const Matrix& d, int c, const PrototypeSet& init, int max_iter = 100, int threads = 1) {
    detail::check_fit_inputs(d, c, init, max_iter);
    const auto n = d.rows();
    HardResult out;
    PrototypeSet v = init;
    HardPartition prev;
    for (int t = 1; t <= max_iter; ++t) {
        HardPartition labels = detail::nearest_prototype(d, v);
        for (int guard = 0; guard < c; ++guard) {
            std::vector<int> size(static_cast<std::size_t>(c), 0);
            for (int l : labels) ++size[l];
            auto empty = std::find(size.begin(), size.end(), 0);
            if (empty == size.end()) break;
            int worst = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (std::find(v.begin(), v.end(), static_cast<int>(i)) != v.end()) continue;
                if (worst < 0 || d(i, v[labels[i]]) > d(worst, v[labels[worst]])) worst = static_cast<int>(i);
            }
            if (worst < 0) break;
            v[empty - size.begin()] = worst;
            labels = detail::nearest_prototype(d, v);
        }
        if (labels == prev) {
            out.report.converged_by = StopReason::prototypes_stable;
            break;
        }
        RowMatrix w = RowMatrix::Zero(n, c);
        for (Eigen::Index i = 0; i < n; ++i) w(i, labels[i]) = 1.0;
        v = detail::weighted_medoids(d, w, v, threads);
        out.report.objective_trace.push_back(mcm_objective(d, labels, v));
        out.report.iterations = t;
        prev = std::move(labels);
    }
    out.labels = detail::nearest_prototype(d, v);
    out.prototypes = std::move(v);
    return out;
}

// u_ik proportional to d_ik^(-2/(beta-1)); zero distances are clamped to floor.
inline FuzzyPartition mfcm_assignment(const Matrix& d_to_proto, double beta, double floor = 1e-12) {
    detail::require(beta > 1.0, "beta must be > 1");
    const double e = 2.0 / (beta - 1.0);
    FuzzyPartition u(d_to_proto.rows(), d_to_proto.cols());
    for (Eigen::Index i = 0; i < d_to_proto.rows(); ++i) {
        double top = -std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < d_to_proto.cols(); ++k) {
            detail::require(d_to_proto(i, k) >= 0.0, "distances must be nonnegative");
            u(i, k) = -e * std::log(std::max(d_to_proto(i, k), floor));
            top = std::max(top, u(i, k));
        }
        double total = 0.0;
        for (Eigen::Index k = 0; k < u.cols(); ++k) total += (u(i, k) = std::exp(u(i, k) - top));
        u.row(i) /= total;
    }
    return u;
}

inline Matrix distances_to(const Matrix& d, const PrototypeSet& v) {
    Matrix out(d.rows(), static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = d.col(v[k]);
    return out;
}

inline double mfcm_objective(const Matrix& d, const FuzzyPartition& u, const PrototypeSet& v, double beta) {
    double j = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double x = d(i, v[k]);
            j += std::pow(u(i, static_cast<Eigen::Index>(k)), beta) * x * x;
        }
    return j;
}

inline FuzzyResult mfcm_fit(const Matrix& d, int c, double beta, const PrototypeSet& init, int max_iter = 100,
                            int threads = 1) {
    detail::check_fit_inputs(d, c, init, max_iter);
    detail::require(beta > 1.0, "beta must be > 1");
    FuzzyResult out;
    PrototypeSet v = init;
    for (int t = 1; t <= max_iter; ++t) {
        FuzzyPartition u = mfcm_assignment(distances_to(d, v), beta);
        RowMatrix w = u.array().pow(beta).matrix();
        PrototypeSet next = detail::weighted_medoids(d, w, v, threads);
        out.report.objective_trace.push_back(mfcm_objective(d, u, next, beta));
        out.report.iterations = t;
        if (next == v) {
            out.report.converged_by = StopReason::prototypes_stable;
            out.memberships = std::move(u);
            out.prototypes = std::move(v);
            return out;
        }
        v = std::move(next);
    }
    out.memberships = mfcm_assignment(distances_to(d, v), beta);
    out.prototypes = std::move(v);
    return out;
}

struct EcmParams {
    double alpha = 1.0;
    double beta = 2.0;
    double delta = 10.0;
    int max_iter = 100;
    double tol = 1e-6;
};

struct EcmResult {
    CredalPartition partition;
    Matrix centers;
    FitReport report;
};

namespace detail {

// Squared Euclidean distance from each object to each focal-set barycenter;
// the empty-set column holds delta^2.
inline RowMatrix ecm_distances(const Matrix& x, const Matrix& centers, const FocalStructure& s, double delta) {
    RowMatrix out(x.rows(), static_cast<Eigen::Index>(s.size()));
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (s[j].is_empty()) {
            out.col(jj).setConstant(delta * delta);
            continue;
        }
        Eigen::RowVectorXd bary = Eigen::RowVectorXd::Zero(x.cols());
        for (int k : s[j].members()) bary += centers.row(k);
        bary /= s[j].cardinality();
        for (Eigen::Index i = 0; i < x.rows(); ++i) out(i, jj) = (x.row(i) - bary).squaredNorm();
    }
    return out;
}

inline MecmParams ecm_as_mecm(const EcmParams& p, int c) {
    MecmParams q;
    q.c = c;
    q.alpha = p.alpha;
    q.beta = p.beta;
    q.delta = p.delta;
    return q;
}

}  // namespace detail

// Builds the c x c system H V = B for the centers given fixed masses.
inline std::pair<Matrix, Matrix> ecm_linear_system(const Matrix& x, const CredalPartition& m, double alpha, double beta) {
    const int c = m.c();
    const auto& s = m.structure();
    Matrix h = Matrix::Zero(c, c);
    Matrix b = Matrix::Zero(c, x.cols());
    for (int i = 0; i < m.n(); ++i) {
        auto r = m.row(i);
        for (std::size_t j = 1; j < s.size(); ++j) {
            const double card = s[j].cardinality();
            const double mb = std::pow(r[j], beta);
            const double wh = std::pow(card, alpha - 2.0) * mb;
            const double wb = std::pow(card, alpha - 1.0) * mb;
            for (int l : s[j].members()) {
                b.row(l) += wb * x.row(i);
                for (int k : s[j].members()) h(l, k) += wh;
            }
        }
    }
    return {h, b};
}

inline EcmResult ecm_fit(const Matrix& x, int c, const EcmParams& p, const FocalStructure& s, const Matrix& init_centers) {
    detail::require(x.rows() >= 1 && x.cols() >= 1, "object data must be nonempty");
    detail::require(x.allFinite(), "object data must be finite");
    detail::require(x.rows() >= c, "need at least as many objects as clusters");
    detail::require(s.frame_size() == c, "focal structure frame size differs from c");
    detail::require(init_centers.rows() == c && init_centers.cols() == x.cols(), "initial centers have wrong shape");
    detail::require(p.max_iter >= 1, "max_iter must be >= 1");
    const MecmParams mp = detail::ecm_as_mecm(p, c);
    mp.validate();

    EcmResult out;
    Matrix v = init_centers;
    for (int t = 1; t <= p.max_iter; ++t) {
        CredalPartition m = mass_update(detail::ecm_distances(x, v, s, p.delta), s, mp);
        auto [h, b] = ecm_linear_system(x, m, p.alpha, p.beta);
        Eigen::FullPivLU<Matrix> lu(h);
        if (lu.rank() < c)
            throw NumericError("ECM center system is singular; perturb the initial centers");
        Matrix next = lu.solve(b);
        out.report.objective_trace.push_back(objective(m, detail::ecm_distances(x, next, s, p.delta), mp));
        out.report.iterations = t;
        const double move = (next - v).cwiseAbs().maxCoeff();
        v = std::move(next);
        if (move < p.tol) {
            out.report.converged_by = StopReason::prototypes_stable;
            break;
        }
    }
    out.partition = mass_update(detail::ecm_distances(x, v, s, p.delta), s, mp);
    out.centers = std::move(v);
    return out;
}

}  // namespace mecm

#endif  // MECM_BASELINES_HPP
