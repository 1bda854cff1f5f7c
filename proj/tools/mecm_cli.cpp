// mecm: command-line front end for the clustering library.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "mecm/mecm.hpp"

namespace {

using mecm::io::json;

constexpr const char* kVersion = "1.0.0";

struct Common {
    int threads = 1;
    std::vector<std::string> args;  // argv without --threads, for the manifest
};

json manifest(const Common& common, const std::string& sub, json params) {
    return {{"tool", "mecm"}, {"version", kVersion}, {"subcommand", sub}, {"args", common.args},
            {"parameters", std::move(params)}};
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mecm::ValidationError("cannot write " + path);
    return out;
}

mecm::WeightedGraph load_graph(const std::string& path, bool directed) {
    if (directed) throw mecm::ValidationError("--directed is reserved; directed graphs are not supported yet");
    return mecm::io::load_edge_list(path);
}

mecm::LambdaScale parse_scale(const std::string& s) {
    return s == "scaled_root" ? mecm::LambdaScale::scaled_root : mecm::LambdaScale::root_mean;
}

mecm::FocalStructure focal_structure(const std::string& mode, int c) {
    if (mode == "full") return {c, mecm::FocalMode::full_power_set};
    if (mode == "pairs") return {c, mecm::FocalMode::pairs_plus_omega};
    return mecm::FocalStructure::default_for(c);
}

mecm::Matrix euclidean(const mecm::Matrix& x) {
    const auto n = x.rows();
    mecm::Matrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
    return d;
}

std::vector<std::string> labels_of(const std::vector<std::string>& all, const mecm::PrototypeSet& v) {
    std::vector<std::string> out;
    for (int k : v) out.push_back(all[k]);
    return out;
}

// ---- dissim / centrality ---------------------------------------------------

struct DissimOpts {
    std::string graph, out, scale = "root_mean", what = "lambda";
    bool directed = false;
};

int run_dissim(const DissimOpts& o, const Common& common) {
    auto g = load_graph(o.graph, o.directed);
    const mecm::Matrix t = mecm::mean_first_passage_times(g, common.threads);
    mecm::Matrix m = t;
    if (o.what != "mfpt") {
        auto d = mecm::zhou_dissimilarity(t, parse_scale(o.scale));
        m = o.what == "normalized" ? d.normalized : d.lambda;
    }
    auto out = open_output(o.out);
    mecm::io::write_matrix_csv(out, m, g.node_ids(), g.node_ids(),
                               manifest(common, "dissim", {{"graph", o.graph}, {"scale", o.scale}, {"matrix", o.what}}));
    return 0;
}

struct CentralityOpts {
    std::string graph, out;
    bool directed = false;
};

int run_centrality(const CentralityOpts& o, const Common& common) {
    auto g = load_graph(o.graph, o.directed);
    auto esc = mecm::esc_centrality(g);
    mecm::Matrix m(g.n(), 1);
    for (int i = 0; i < g.n(); ++i) m(i, 0) = esc[i];
    auto out = open_output(o.out);
    mecm::io::write_matrix_csv(out, m, g.node_ids(), {"esc"}, manifest(common, "centrality", {{"graph", o.graph}}));
    return 0;
}

// ---- cluster ---------------------------------------------------------------

struct ClusterOpts {
    std::string method, dissim, objects, out, init = "random", focal = "auto";
    std::vector<std::string> prototypes;
    std::optional<std::uint64_t> seed;
    int c = 2, max_iter = 100;
    double alpha = 1.0, beta = 2.0, delta = 10.0, gamma = 1.0, eta = 1.0;
};

mecm::PrototypeSet resolve_prototypes(const ClusterOpts& o, const std::vector<std::string>& labels,
                                      const mecm::Matrix& d, int threads) {
    const int n = static_cast<int>(labels.size());
    if (o.init == "explicit") {
        if (static_cast<int>(o.prototypes.size()) != o.c)
            throw mecm::ValidationError("--prototypes needs exactly c entries");
        std::unordered_map<std::string, int> index;
        for (int i = 0; i < n; ++i) index.emplace(labels[i], i);
        mecm::PrototypeSet v;
        for (const auto& p : o.prototypes) {
            auto it = index.find(p);
            if (it == index.end()) throw mecm::ValidationError("unknown prototype object '" + p + "'");
            v.push_back(it->second);
        }
        mecm::validate_prototypes(v, n, o.c);
        return v;
    }
    if (!o.seed) throw mecm::ValidationError("--seed is required with --init " + o.init);
    auto v = mecm::random_prototypes(n, o.c, *o.seed);
    if (o.init == "mfcm") v = mecm::mfcm_fit(d, o.c, o.beta, v, o.max_iter, threads).prototypes;
    return v;
}

int run_cluster(const ClusterOpts& o, const Common& common) {
    if (o.dissim.empty() == o.objects.empty()) throw mecm::ValidationError("give exactly one of --dissim or --objects");
    if (o.method == "ecm" && o.objects.empty()) throw mecm::ValidationError("ecm needs --objects");
    mecm::io::LabeledMatrix input =
        o.dissim.empty() ? mecm::io::load_objects_csv(o.objects) : mecm::io::load_dissimilarity_csv(o.dissim);
    const mecm::Matrix d = o.dissim.empty() ? euclidean(input.values) : input.values;
    const auto v0 = resolve_prototypes(o, input.labels, d, common.threads);

    json params = {{"method", o.method}, {"input", o.dissim.empty() ? o.objects : o.dissim},
                   {"input_kind", o.dissim.empty() ? "objects" : "dissimilarity"},
                   {"c", o.c}, {"alpha", o.alpha}, {"beta", o.beta}, {"delta", o.delta}, {"gamma", o.gamma},
                   {"eta", o.eta}, {"max_iter", o.max_iter}, {"init", o.init}, {"focal", o.focal},
                   {"initial_prototypes", labels_of(input.labels, v0)}};
    if (o.seed) params["seed"] = *o.seed;

    mecm::io::CredalDocument doc;
    doc.method = o.method;
    doc.object_labels = input.labels;
    doc.manifest = manifest(common, "cluster", params);
    if (o.method == "mecm") {
        mecm::MecmParams p;
        p.c = o.c;
        p.alpha = o.alpha;
        p.beta = o.beta;
        p.delta = o.delta;
        p.gamma = o.gamma;
        p.eta = o.eta;
        p.max_iter = o.max_iter;
        p.threads = common.threads;
        auto r = mecm::mecm_fit(d, p, focal_structure(o.focal, o.c), v0);
        doc.partition = std::move(r.partition);
        doc.prototypes = labels_of(input.labels, r.prototypes);
        doc.report = r.report;
        if (o.c >= 2) doc.extra["validity_index"] = mecm::validity_index(doc.partition);
    } else if (o.method == "mcm") {
        auto r = mecm::mcm_fit(d, o.c, v0, o.max_iter, common.threads);
        doc.partition = mecm::crisp_partition(r.labels, o.c);
        doc.prototypes = labels_of(input.labels, r.prototypes);
        doc.report = r.report;
    } else if (o.method == "mfcm") {
        auto r = mecm::mfcm_fit(d, o.c, o.beta, v0, o.max_iter, common.threads);
        doc.partition = mecm::bayesian_partition(r.memberships);
        doc.prototypes = labels_of(input.labels, r.prototypes);
        doc.report = r.report;
    } else {
        mecm::Matrix centers(o.c, input.values.cols());
        for (int k = 0; k < o.c; ++k) centers.row(k) = input.values.row(v0[k]);
        mecm::EcmParams p{o.alpha, o.beta, o.delta, o.max_iter};
        auto r = mecm::ecm_fit(input.values, o.c, p, focal_structure(o.focal, o.c), centers);
        doc.partition = std::move(r.partition);
        doc.report = r.report;
        json cj = json::array();
        for (int k = 0; k < o.c; ++k) {
            std::vector<double> row;
            for (Eigen::Index q = 0; q < r.centers.cols(); ++q) row.push_back(r.centers(k, q));
            cj.push_back(row);
        }
        doc.extra["centers"] = cj;
    }
    mecm::io::write_credal_result(doc, o.out);
    return 0;
}

// ---- detect ----------------------------------------------------------------

struct DetectOpts {
    std::string graph, out, init = "esc", scale = "root_mean", focal = "auto";
    std::optional<std::uint64_t> seed;
    int cmin = 2, cmax = 6, max_iter = 100;
    double alpha = 1.0, beta = 2.0, delta = 10.0, gamma = 1.0, eta = 1.0, mu = 0.8, mu_decay = 0.9;
    bool directed = false;
};

int run_detect(const DetectOpts& o, const Common& common) {
    auto g = load_graph(o.graph, o.directed);
    mecm::DetectionConfig cfg;
    cfg.c_min = o.cmin;
    cfg.c_max = o.cmax;
    cfg.mecm.alpha = o.alpha;
    cfg.mecm.beta = o.beta;
    cfg.mecm.delta = o.delta;
    cfg.mecm.gamma = o.gamma;
    cfg.mecm.eta = o.eta;
    cfg.mecm.max_iter = o.max_iter;
    cfg.mecm.threads = common.threads;
    cfg.seeding.mu = o.mu;
    cfg.seeding.mu_decay = o.mu_decay;
    cfg.scale = parse_scale(o.scale);
    cfg.init = o.init == "random" ? mecm::InitStrategy::random
               : o.init == "mfcm" ? mecm::InitStrategy::mfcm_refined
                                  : mecm::InitStrategy::esc;
    if (cfg.init == mecm::InitStrategy::random) {
        if (!o.seed) throw mecm::ValidationError("--seed is required with --init random");
        cfg.seed = *o.seed;
    }
    if (o.focal != "auto") throw mecm::ValidationError("detect uses the default focal structure per c");
    auto r = mecm::detect_communities(g, cfg);

    json params = {{"graph", o.graph}, {"cmin", o.cmin}, {"cmax", o.cmax}, {"alpha", o.alpha}, {"beta", o.beta},
                   {"delta", o.delta}, {"gamma", o.gamma}, {"eta", o.eta}, {"max_iter", o.max_iter}, {"mu", o.mu},
                   {"mu_decay", o.mu_decay}, {"init", o.init}, {"scale", o.scale}};
    if (o.seed) params["seed"] = *o.seed;

    mecm::io::CredalDocument doc;
    doc.method = "mecm";
    doc.object_labels = g.node_ids();
    doc.manifest = manifest(common, "detect", params);
    doc.partition = r.best.partition;
    doc.prototypes = labels_of(g.node_ids(), r.best.prototypes);
    doc.report = r.best.report;
    doc.extra["best_c"] = r.best_c;
    json trace = json::array();
    for (std::size_t k = 0; k < r.fits.size(); ++k) {
        const auto& f = r.fits[k];
        trace.push_back({{"c", r.q_trace[k].first}, {"q", r.q_trace[k].second},
                         {"prototypes", labels_of(g.node_ids(), f.prototypes)},
                         {"iterations", f.report.iterations},
                         {"converged_by", mecm::to_string(f.report.converged_by)},
                         {"objective_trace", f.report.objective_trace}});
    }
    doc.extra["q_trace"] = trace;
    mecm::io::write_credal_result(doc, o.out);
    std::cout << "best_c=" << r.best_c << "\n";
    return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalOpts {
    std::string pred, ref, graph, out;
    bool no_header = false;
};

int run_eval(const EvalOpts& o, const Common& common) {
    auto doc = mecm::io::read_credal_result(o.pred);
    const auto ref = mecm::io::align_labels(mecm::io::load_labels_csv(o.ref), doc.object_labels);
    const auto hard = mecm::harden_pignistic(doc.partition);
    const auto pi = mecm::pair_indices(hard, ref);
    const auto ev = mecm::evidential_indices(mecm::harden_credal(doc.partition), ref);
    const auto info = mecm::nmi_vi(hard, ref);
    auto f = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", x);
        return std::string(buf);
    };
    std::string q = "NA";
    if (!o.graph.empty()) {
        auto g = mecm::io::load_edge_list(o.graph);
        std::unordered_map<std::string, int> pos;
        for (std::size_t i = 0; i < doc.object_labels.size(); ++i) pos.emplace(doc.object_labels[i], int(i));
        mecm::HardPartition by_node;
        for (const auto& id : g.node_ids()) {
            auto it = pos.find(id);
            if (it == pos.end()) throw mecm::ValidationError("graph node " + id + " missing from the result");
            by_node.push_back(hard[it->second]);
        }
        q = f(mecm::modularity(g, mecm::indicator_matrix(by_node, doc.partition.c())));
    }
    std::ostringstream row;
    row << f(pi.precision) << ',' << f(pi.recall) << ',' << f(pi.rand_index) << ',' << f(ev.ep) << ',' << f(ev.er)
        << ',' << f(ev.eri) << ',' << f(info.nmi) << ',' << f(info.vi) << ',' << q << '\n';
    const std::string header = "P,R,RI,EP,ER,ERI,NMI,VI,Q\n";
    std::cout << (o.no_header ? "" : header) << row.str();
    if (!o.out.empty()) {
        auto out = open_output(o.out);
        out << "# manifest: "
            << manifest(common, "eval", {{"pred", o.pred}, {"ref", o.ref}, {"graph", o.graph}}).dump() << "\n"
            << header << row.str();
    }
    return 0;
}

// ---- generate --------------------------------------------------------------

struct GenerateOpts {
    std::string kind, out;
    std::optional<std::uint64_t> seed;
    double r = 30.0, dist = 0.8;
    std::vector<double> centers{0.0, 0.0, 30.0, 30.0};
    std::optional<int> n;  // per component; 100 for circles, 50 otherwise
    int noise = 5;
    bool largest_component = false;
};

int run_generate(const GenerateOpts& o, const Common& common) {
    if (!o.seed) throw mecm::ValidationError("--seed is required");
    const int n = o.n.value_or(o.kind == "circles" ? 100 : 50);
    json params = {{"generator", o.kind}, {"seed", *o.seed}, {"n", n}};
    mecm::HardPartition labels;
    std::vector<std::string> ids;
    if (o.kind == "gaussian-graph") {
        params["dist"] = o.dist;
        params["largest_component"] = o.largest_component;
        auto lg = mecm::gaussian_graph_generator({{1.0, 4.0}, {2.5, 5.5}, {0.5, 6.0}}, 0.25 * mecm::Matrix::Identity(2, 2),
                                                 {n, n, n}, o.dist, *o.seed);
        if (o.largest_component) lg = mecm::restrict_to_largest_component(lg);
        auto out = open_output(o.out + ".edges");
        mecm::io::write_edge_list(out, lg.graph, "manifest: " + manifest(common, "generate", params).dump());
        labels = lg.labels;
        ids = lg.graph.node_ids();
    } else {
        mecm::LabeledData data;
        if (o.kind == "circles") {
            if (o.centers.size() != 4) throw mecm::ValidationError("--centers needs x1,y1,x2,y2");
            params["r"] = o.r;
            params["centers"] = o.centers;
            data = mecm::overlapped_circles_generator({o.centers[0], o.centers[1]}, {o.centers[2], o.centers[3]}, o.r,
                                                      n, *o.seed);
        } else {
            params["noise"] = o.noise;
            data = mecm::gaussian_mixture_generator(mecm::default_mixture_spec(n, o.noise), *o.seed);
        }
        for (Eigen::Index i = 0; i < data.x.rows(); ++i) ids.push_back(std::to_string(i + 1));
        auto out = open_output(o.out + ".csv");
        mecm::io::write_matrix_csv(out, data.x, ids, {"x", "y"}, manifest(common, "generate", params));
        labels = data.labels;
    }
    auto lout = open_output(o.out + "_labels.csv");
    mecm::io::write_labels_csv(lout, ids, labels, manifest(common, "generate", params));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Median evidential c-means clustering and community detection"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    Common common;
    app.add_option("--threads", common.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    const std::vector<std::string> scales{"root_mean", "scaled_root"};

    DissimOpts dopt;
    auto* dis = app.add_subcommand("dissim", "Edge list -> random-walk dissimilarity CSV");
    dis->add_option("--graph", dopt.graph, "Edge list")->required()->check(CLI::ExistingFile);
    dis->add_option("--out", dopt.out, "Output CSV")->required();
    dis->add_option("--scale", dopt.scale, "Lambda scaling")->check(CLI::IsMember(scales));
    dis->add_option("--matrix", dopt.what, "Which matrix to write")
        ->check(CLI::IsMember({"lambda", "normalized", "mfpt"}));
    dis->add_flag("--directed", dopt.directed, "Reserved");

    CentralityOpts copt;
    auto* cen = app.add_subcommand("centrality", "Edge list -> ESC scores");
    cen->add_option("--graph", copt.graph, "Edge list")->required()->check(CLI::ExistingFile);
    cen->add_option("--out", copt.out, "Output CSV")->required();
    cen->add_flag("--directed", copt.directed, "Reserved");

    ClusterOpts kopt;
    auto* clu = app.add_subcommand("cluster", "Cluster a dissimilarity matrix or object table");
    clu->add_option("--method", kopt.method, "Algorithm")->required()->check(CLI::IsMember({"mecm", "mcm", "mfcm", "ecm"}));
    clu->add_option("--dissim", kopt.dissim, "Dissimilarity CSV")->check(CLI::ExistingFile);
    clu->add_option("--objects", kopt.objects, "Object CSV (Euclidean distances)")->check(CLI::ExistingFile);
    clu->add_option("--out", kopt.out, "Output JSON")->required();
    clu->add_option("--c", kopt.c, "Number of clusters")->required()->check(CLI::PositiveNumber);
    clu->add_option("--alpha", kopt.alpha, "Cardinality penalty");
    clu->add_option("--beta", kopt.beta, "Weighting exponent");
    clu->add_option("--delta", kopt.delta, "Outlier distance");
    clu->add_option("--gamma", kopt.gamma, "Ignorance/uncertainty balance");
    clu->add_option("--eta", kopt.eta, "Discount control");
    clu->add_option("--max-iter", kopt.max_iter, "Iteration cap");
    clu->add_option("--focal", kopt.focal, "Focal structure")->check(CLI::IsMember({"auto", "full", "pairs"}));
    clu->add_option("--init", kopt.init, "Initial prototypes")->check(CLI::IsMember({"random", "explicit", "mfcm"}));
    clu->add_option("--prototypes", kopt.prototypes, "Object labels for --init explicit")->delimiter(',');
    clu->add_option("--seed", kopt.seed, "RNG seed");

    DetectOpts topt;
    auto* det = app.add_subcommand("detect", "Community detection on a graph");
    det->add_option("--graph", topt.graph, "Edge list")->required()->check(CLI::ExistingFile);
    det->add_option("--out", topt.out, "Output JSON")->required();
    det->add_option("--cmin", topt.cmin, "Smallest c");
    det->add_option("--cmax", topt.cmax, "Largest c");
    det->add_option("--alpha", topt.alpha, "Cardinality penalty");
    det->add_option("--beta", topt.beta, "Weighting exponent");
    det->add_option("--delta", topt.delta, "Outlier distance");
    det->add_option("--gamma", topt.gamma, "Ignorance/uncertainty balance");
    det->add_option("--eta", topt.eta, "Discount control");
    det->add_option("--max-iter", topt.max_iter, "Iteration cap");
    det->add_option("--mu", topt.mu, "Seed separation threshold");
    det->add_option("--mu-decay", topt.mu_decay, "Threshold decay factor");
    det->add_option("--init", topt.init, "Seeding")->check(CLI::IsMember({"esc", "mfcm", "random"}));
    det->add_option("--scale", topt.scale, "Lambda scaling")->check(CLI::IsMember(scales));
    det->add_option("--focal", topt.focal, "Focal structure")->check(CLI::IsMember({"auto"}));
    det->add_option("--seed", topt.seed, "RNG seed");
    det->add_flag("--directed", topt.directed, "Reserved");

    EvalOpts eopt;
    auto* ev = app.add_subcommand("eval", "Score a result file against reference labels");
    ev->add_option("--pred", eopt.pred, "Result JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("--ref", eopt.ref, "Reference labels CSV")->required()->check(CLI::ExistingFile);
    ev->add_option("--graph", eopt.graph, "Edge list for modularity")->check(CLI::ExistingFile);
    ev->add_option("--out", eopt.out, "Also write the row here");
    ev->add_flag("--no-header", eopt.no_header, "Omit the header line");

    GenerateOpts gopt;
    auto* gen = app.add_subcommand("generate", "Synthetic data sets");
    gen->add_option("kind", gopt.kind, "Generator")->required()->check(CLI::IsMember({"circles", "gaussian-mixture", "gaussian-graph"}));
    gen->add_option("--out", gopt.out, "Output path prefix")->required();
    gen->add_option("--seed", gopt.seed, "RNG seed");
    gen->add_option("--r", gopt.r, "Circle radius");
    gen->add_option("--centers", gopt.centers, "x1,y1,x2,y2")->delimiter(',');
    gen->add_option("--n", gopt.n, "Points per component")->check(CLI::PositiveNumber);
    gen->add_option("--noise", gopt.noise, "Points per noise component")->check(CLI::PositiveNumber);
    gen->add_option("--dist", gopt.dist, "Edge threshold");
    gen->add_flag("--largest-component", gopt.largest_component, "Keep only the largest connected component");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0) continue;
        common.args.push_back(a);
    }

    try {
        if (*dis) return run_dissim(dopt, common);
        if (*cen) return run_centrality(copt, common);
        if (*clu) return run_cluster(kopt, common);
        if (*det) return run_detect(topt, common);
        if (*ev) return run_eval(eopt, common);
        if (*gen) return run_generate(gopt, common);
    } catch (const mecm::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
