#ifndef MECM_GRAPH_HPP
#define MECM_GRAPH_HPP

// Weighted undirected graphs, random-walk dissimilarity, ESC centrality and
// prototype seeding.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "mecm/belief.hpp"
#include "mecm/credal.hpp"
#include "mecm/error.hpp"
#include "mecm/parallel.hpp"

namespace mecm {

class WeightedGraph {
public:
    WeightedGraph() = default;

    explicit WeightedGraph(Matrix w, std::vector<std::string> ids = {}) : w_(std::move(w)), ids_(std::move(ids)) {
        detail::require(w_.rows() == w_.cols(), "weight matrix must be square");
        const auto n = w_.rows();
        if (ids_.empty())
            for (Eigen::Index i = 0; i < n; ++i) ids_.push_back(std::to_string(i + 1));
        detail::require(static_cast<Eigen::Index>(ids_.size()) == n, "one label per node required");
        for (Eigen::Index i = 0; i < n; ++i) {
            detail::require(w_(i, i) == 0.0, "self-loops are not allowed (node " + ids_[i] + ")");
            for (Eigen::Index j = 0; j < n; ++j) {
                detail::require(std::isfinite(w_(i, j)) && w_(i, j) >= 0.0, "edge weights must be finite and nonnegative");
                detail::require(w_(i, j) == w_(j, i), "weight matrix must be symmetric");
            }
        }
    }

    // 0-based endpoints; duplicate edges add up.
    static WeightedGraph from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges,
                                    std::vector<std::string> ids = {}) {
        detail::require(n >= 1, "graph needs at least one node");
        Matrix w = Matrix::Zero(n, n);
        for (auto [u, v, x] : edges) {
            detail::require(u >= 0 && u < n && v >= 0 && v < n, "edge endpoint out of range");
            detail::require(u != v, "self-loops are not allowed");
            detail::require(x > 0.0 && std::isfinite(x), "edge weights must be positive");
            w(u, v) += x;
            w(v, u) += x;
        }
        return WeightedGraph(std::move(w), std::move(ids));
    }

    int n() const { return static_cast<int>(w_.rows()); }
    const Matrix& weights() const { return w_; }
    const std::vector<std::string>& node_ids() const { return ids_; }
    bool adjacent(int i, int j) const { return w_(i, j) > 0.0; }
    double strength(int i) const { return w_.row(i).sum(); }
    int degree(int i) const { return static_cast<int>((w_.row(i).array() > 0.0).count()); }
    // ||W||: sum of all entries, i.e. twice the total edge weight.
    double total_weight() const { return w_.sum(); }
    int edge_count() const { return static_cast<int>((w_.array() > 0.0).count() / 2); }

    std::vector<int> neighbors(int i) const {
        std::vector<int> out;
        for (int j = 0; j < n(); ++j)
            if (adjacent(i, j)) out.push_back(j);
        return out;
    }

    // Component id per node, numbered in order of first node.
    std::vector<int> components() const {
        std::vector<int> comp(static_cast<std::size_t>(n()), -1);
        int next = 0;
        for (int s = 0; s < n(); ++s) {
            if (comp[s] >= 0) continue;
            std::vector<int> stack{s};
            comp[s] = next;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int v : neighbors(u))
                    if (comp[v] < 0) {
                        comp[v] = next;
                        stack.push_back(v);
                    }
            }
            ++next;
        }
        return comp;
    }

private:
    Matrix w_;
    std::vector<std::string> ids_;
};

// Induced subgraph on the given nodes, in the given order.
inline WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<int>& nodes) {
    const auto k = static_cast<Eigen::Index>(nodes.size());
    Matrix w(k, k);
    std::vector<std::string> ids;
    for (Eigen::Index a = 0; a < k; ++a) {
        ids.push_back(g.node_ids()[nodes[a]]);
        for (Eigen::Index b = 0; b < k; ++b) w(a, b) = g.weights()(nodes[a], nodes[b]);
    }
    return WeightedGraph(std::move(w), std::move(ids));
}

// Nodes of the largest connected component (lowest id wins ties), ascending.
inline std::vector<int> largest_component(const WeightedGraph& g) {
    auto comp = g.components();
    std::vector<int> size(static_cast<std::size_t>(*std::max_element(comp.begin(), comp.end()) + 1), 0);
    for (int x : comp) ++size[x];
    const int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<int> out;
    for (int i = 0; i < g.n(); ++i)
        if (comp[i] == best) out.push_back(i);
    return out;
}

namespace detail {

inline void require_connected(const WeightedGraph& g) {
    require(g.n() >= 2, "graph needs at least two nodes");
    for (int i = 0; i < g.n(); ++i)
        require(g.degree(i) > 0, "node " + g.node_ids()[i] + " is isolated");
    auto comp = g.components();
    const int count = *std::max_element(comp.begin(), comp.end()) + 1;
    if (count == 1) return;
    std::string msg = "graph is disconnected (" + std::to_string(count) + " components):";
    for (int k = 0; k < count; ++k) {
        msg += k ? "; {" : " {";
        int shown = 0;
        for (int i = 0; i < g.n(); ++i)
            if (comp[i] == k) {
                if (shown == 5) {
                    msg += " ...";
                    break;
                }
                msg += (shown++ ? " " : "") + g.node_ids()[i];
            }
        msg += "}";
    }
    throw ValidationError(msg);
}

}  // namespace detail

// t(x, y): expected steps for a walker started at x to first reach y.
// One linear solve per target; t(y, y) = 0.
inline Matrix mean_first_passage_times(const WeightedGraph& g, int threads = 1) {
    detail::require_connected(g);
    const int n = g.n();
    Matrix p = g.weights();
    for (int i = 0; i < n; ++i) p.row(i) /= g.strength(i);

    Matrix t(n, n);
    detail::parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t yy) {
        const auto y = static_cast<Eigen::Index>(yy);
        Matrix a = -p;
        a.col(y).setZero();
        a.diagonal().array() += 1.0;
        Eigen::PartialPivLU<Matrix> lu(a);
        Eigen::VectorXd col = lu.solve(Eigen::VectorXd::Ones(n));
        if (!col.allFinite()) throw NumericError("first-passage system is singular");
        col(y) = 0.0;
        t.col(y) = col;
    });
    return t;
}

enum class LambdaScale {
    root_mean,      // sqrt(sum / (n - 2))
    scaled_root,    // sqrt(sum) / (n - 2)
};

struct Dissimilarity {
    Matrix lambda;
    Matrix normalized;  // lambda / max entry, for seeding thresholds
};

// Lambda(x, y) compares the first-passage profiles of x and y towards every other node.
inline Dissimilarity zhou_dissimilarity(const Matrix& t, LambdaScale scale = LambdaScale::root_mean) {
    detail::require(t.rows() == t.cols(), "first-passage matrix must be square");
    const auto n = t.rows();
    detail::require(n >= 3, "dissimilarity index needs at least three nodes");
    Dissimilarity out{Matrix::Zero(n, n), Matrix::Zero(n, n)};
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y) {
            double sum = 0.0;
            for (Eigen::Index z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                const double diff = t(x, z) - t(y, z);
                sum += diff * diff;
            }
            const double v = scale == LambdaScale::root_mean ? std::sqrt(sum / double(n - 2))
                                                             : std::sqrt(sum) / double(n - 2);
            out.lambda(x, y) = out.lambda(y, x) = v;
        }
    const double top = out.lambda.maxCoeff();
    if (top > 0.0) out.normalized = out.lambda / top;
    return out;
}

inline Dissimilarity graph_dissimilarity(const WeightedGraph& g, LambdaScale scale = LambdaScale::root_mean,
                                         int threads = 1) {
    return zhou_dissimilarity(mean_first_passage_times(g, threads), scale);
}

// Evidential semi-local centrality. Degree and strength become mass functions on
// {high, low}, are fused by Dempster's rule, and the pignistic contrast is
// summed over two-hop neighbourhoods.
inline std::vector<double> esc_centrality(const WeightedGraph& g) {
    const int n = g.n();
    detail::require(n >= 2, "centrality needs at least two nodes");
    constexpr double soft = 0.5;

    std::vector<double> k(n), w(n);
    for (int i = 0; i < n; ++i) {
        k[i] = g.degree(i);
        w[i] = g.strength(i);
    }
    std::map<double, int> degree_count;
    for (double x : k) ++degree_count[x];
    std::map<double, double> cdf;
    double acc = 0.0;
    for (auto [deg, cnt] : degree_count) cdf[deg] = (acc += double(cnt) / n);

    const auto [km, kM] = std::minmax_element(k.begin(), k.end());
    const auto [wm, wM] = std::minmax_element(w.begin(), w.end());
    const FocalStructure theta(2, FocalMode::full_power_set);  // bit 0 = high, bit 1 = low

    std::vector<double> mec_star(n);
    for (int i = 0; i < n; ++i) {
        const double lam = cdf[k[i]];
        const double kd = *kM - *km + 2 * soft, wd = *wM - *wm + 2 * soft;
        const double kh = lam * (k[i] - *km) / kd, kl = lam * (*kM - k[i]) / kd;
        const double wh = (w[i] - *wm) / wd, wl = (*wM - w[i]) / wd;
        MassFunction mk(theta, {0.0, kh, kl, 1.0 - kh - kl});
        MassFunction mw(theta, {0.0, wh, wl, 1.0 - wh - wl});
        auto bet = dempster_combine(mk, mw).pignistic();
        mec_star[i] = bet[0] - bet[1];
    }
    const double shift = std::abs(*std::min_element(mec_star.begin(), mec_star.end()));
    double total = 0.0;
    for (double x : mec_star) total += shift + x;
    std::vector<double> mec(n);
    for (int i = 0; i < n; ++i) mec[i] = total > 0.0 ? (shift + mec_star[i]) / total : 1.0 / n;

    std::vector<std::vector<int>> nb(n);
    for (int i = 0; i < n; ++i) nb[i] = g.neighbors(i);
    std::vector<double> r(n), b(n), esc(n);
    std::vector<int> mark(n, -1);
    for (int v = 0; v < n; ++v) {
        double s = mec[v];
        mark[v] = v;
        for (int a : nb[v]) {
            if (mark[a] != v) { mark[a] = v; s += mec[a]; }
            for (int c2 : nb[a])
                if (mark[c2] != v) { mark[c2] = v; s += mec[c2]; }
        }
        r[v] = s;
    }
    for (int u = 0; u < n; ++u) {
        b[u] = 0.0;
        for (int v : nb[u]) b[u] += r[v];
    }
    for (int i = 0; i < n; ++i) {
        esc[i] = 0.0;
        for (int j : nb[i]) esc[i] += b[j];
    }
    return esc;
}

struct SeedConfig {
    int c = 2;
    double mu = 0.8;
    double mu_decay = 0.9;

    void validate() const {
        detail::require(c >= 1, "c must be positive");
        detail::require(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
        detail::require(mu_decay > 0.0 && mu_decay < 1.0, "mu_decay must lie in (0, 1)");
    }
};

// Highest scores first, skipping nodes within mu of an accepted seed.
// If fewer than c seeds survive, mu shrinks and the scan restarts from the top.
inline PrototypeSet select_prototypes(const std::vector<double>& scores, const Matrix& d_norm, const SeedConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(scores.size());
    detail::require(d_norm.rows() == n && d_norm.cols() == n, "score and dissimilarity sizes differ");
    detail::require(cfg.c <= n, "more seeds requested than nodes");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });

    for (double mu = cfg.mu;; mu *= cfg.mu_decay) {
        const bool admit_all = mu < 1e-12;
        PrototypeSet seeds;
        for (int node : order) {
            bool ok = true;
            for (int s : seeds)
                if (!admit_all && !(d_norm(node, s) > mu && d_norm(s, node) > mu)) {
                    ok = false;
                    break;
                }
            if (ok) seeds.push_back(node);
            if (static_cast<int>(seeds.size()) == cfg.c) return seeds;
        }
    }
}

}  // namespace mecm

#endif  // MECM_GRAPH_HPP
