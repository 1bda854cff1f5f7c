#ifndef MECM_GENERATORS_HPP
#define MECM_GENERATORS_HPP

// Synthetic data sets. All take an explicit seed.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mecm/baselines.hpp"
#include "mecm/graph.hpp"

namespace mecm {

struct LabeledData {
    Matrix x;
    HardPartition labels;
};

struct LabeledGraph {
    WeightedGraph graph;
    Matrix points;
    HardPartition labels;
};

struct GaussianComponent {
    Eigen::VectorXd mean;
    Matrix cov;
    int count = 0;
};

namespace detail {

// Square-root factor of a positive semidefinite covariance.
inline Matrix covariance_factor(const Matrix& cov) {
    require(cov.rows() == cov.cols(), "covariance must be square");
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()),
            "covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    const auto& ev = es.eigenvalues();
    require(ev.minCoeff() >= -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff()),
            "covariance is not positive semidefinite");
    return es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

// Box-Muller on top of the engine so output does not depend on the standard
// library's normal_distribution.
class Normal {
public:
    explicit Normal(std::mt19937_64& rng) : rng_(rng) {}
    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do u1 = uniform(); while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }
    double uniform() { return double(rng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64& rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace detail

inline LabeledData gaussian_mixture_generator(const std::vector<GaussianComponent>& comps, std::uint64_t seed) {
    detail::require(!comps.empty(), "at least one component required");
    const auto p = comps.front().mean.size();
    int total = 0;
    for (const auto& c : comps) {
        detail::require(c.count >= 1, "component counts must be >= 1");
        detail::require(c.mean.size() == p && c.cov.rows() == p, "component dimensions disagree");
        total += c.count;
    }
    std::mt19937_64 rng(seed);
    detail::Normal normal(rng);
    LabeledData out{Matrix(total, p), {}};
    int row = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        const Matrix f = detail::covariance_factor(comps[k].cov);
        for (int i = 0; i < comps[k].count; ++i, ++row) {
            Eigen::VectorXd z(p);
            for (Eigen::Index q = 0; q < p; ++q) z(q) = normal();
            out.x.row(row) = (comps[k].mean + f * z).transpose();
            out.labels.push_back(static_cast<int>(k));
        }
    }
    return out;
}

// The three well separated clusters plus two noise clouds used for the
// Gaussian-mixture experiment; noise points get labels 3 and 4.
inline std::vector<GaussianComponent> default_mixture_spec(int per_cluster = 50, int per_noise = 5) {
    auto comp = [](double x, double y, double var, int count) {
        return GaussianComponent{Eigen::Vector2d(x, y), var * Matrix::Identity(2, 2), count};
    };
    return {comp(0, 0, 120, per_cluster), comp(40, 40, 120, per_cluster), comp(80, 80, 120, per_cluster),
            comp(-50, 90, 80, per_noise), comp(-10, 130, 80, per_noise)};
}

// Uniform points in two discs of equal radius; label = source disc.
inline LabeledData overlapped_circles_generator(const Eigen::Vector2d& c1, const Eigen::Vector2d& c2, double radius,
                                                int n_per, std::uint64_t seed) {
    detail::require(radius > 0.0, "radius must be positive");
    detail::require(n_per >= 1, "need at least one point per circle");
    std::mt19937_64 rng(seed);
    detail::Normal draw(rng);
    LabeledData out{Matrix(2 * n_per, 2), {}};
    const Eigen::Vector2d centers[2] = {c1, c2};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < n_per; ++i) {
            const double r = radius * std::sqrt(draw.uniform());
            const double th = 2.0 * std::numbers::pi * draw.uniform();
            out.x.row(k * n_per + i) << centers[k](0) + r * std::cos(th), centers[k](1) + r * std::sin(th);
            out.labels.push_back(k);
        }
    return out;
}

// Points from 2-D Gaussians; nodes closer than dist are joined by a unit edge.
inline LabeledGraph gaussian_graph_generator(const std::vector<Eigen::Vector2d>& means, const Matrix& cov,
                                             const std::vector<int>& sizes, double dist, std::uint64_t seed) {
    detail::require(dist > 0.0, "dist must be positive");
    detail::require(means.size() == sizes.size() && !means.empty(), "one size per mean required");
    detail::require(cov.rows() == 2 && cov.cols() == 2, "covariance must be 2 x 2");
    std::vector<GaussianComponent> comps;
    for (std::size_t k = 0; k < means.size(); ++k) comps.push_back({means[k], cov, sizes[k]});
    LabeledData pts = gaussian_mixture_generator(comps, seed);
    const auto n = pts.x.rows();
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if ((pts.x.row(i) - pts.x.row(j)).norm() <= dist) w(i, j) = w(j, i) = 1.0;
    return {WeightedGraph(std::move(w)), std::move(pts.x), std::move(pts.labels)};
}

// Drops every node outside the largest connected component.
inline LabeledGraph restrict_to_largest_component(const LabeledGraph& lg) {
    const auto keep = largest_component(lg.graph);
    LabeledGraph out{induced_subgraph(lg.graph, keep), Matrix(static_cast<Eigen::Index>(keep.size()), lg.points.cols()), {}};
    for (std::size_t a = 0; a < keep.size(); ++a) {
        out.points.row(static_cast<Eigen::Index>(a)) = lg.points.row(keep[a]);
        out.labels.push_back(lg.labels[keep[a]]);
    }
    return out;
}

inline LabeledGraph default_gaussian_graph(std::uint64_t seed, double dist = 0.8) {
    return gaussian_graph_generator({{1.0, 4.0}, {2.5, 5.5}, {0.5, 6.0}}, 0.25 * Matrix::Identity(2, 2), {50, 50, 50},
                                    dist, seed);
}

}  // namespace mecm

#endif  // MECM_GENERATORS_HPP
