#ifndef MECM_IO_HPP
#define MECM_IO_HPP

// Edge lists, CSV matrices, label files and JSON result documents.

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "mecm/baselines.hpp"
#include "mecm/credal.hpp"
#include "mecm/evaluation.hpp"
#include "mecm/graph.hpp"

namespace mecm::io {

using json = nlohmann::json;

inline std::string format_real(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

inline bool parse_real(const std::string& tok, double& out) {
    const std::string t = trim(tok);
    if (t.empty()) return false;
    const char* first = t.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

inline ValidationError line_error(const std::string& src, int line, const std::string& what) {
    return ValidationError(src + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

// "u v [w]" per line, '#' comments. Labels map to indices in order of first
// appearance; repeated edges add their weights.
inline WeightedGraph read_edge_list(std::istream& in, const std::string& src = "<input>") {
    std::vector<std::string> ids;
    std::unordered_map<std::string, int> index;
    std::map<std::pair<int, int>, double> acc;
    auto node = [&](const std::string& tok) {
        auto [it, fresh] = index.emplace(tok, static_cast<int>(ids.size()));
        if (fresh) ids.push_back(tok);
        return it->second;
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::vector<std::string> tok;
        for (std::string s; ss >> s;) tok.push_back(s);
        if (tok.size() != 2 && tok.size() != 3)
            throw detail::line_error(src, lineno, "expected 'u v [w]', got " + std::to_string(tok.size()) + " fields");
        double w = 1.0;
        if (tok.size() == 3 && (!detail::parse_real(tok[2], w) || !std::isfinite(w) || w <= 0.0))
            throw detail::line_error(src, lineno, "edge weight must be a positive number, got '" + tok[2] + "'");
        if (tok[0] == tok[1]) throw detail::line_error(src, lineno, "self-loop on node " + tok[0]);
        int u = node(tok[0]), v = node(tok[1]);
        acc[{std::min(u, v), std::max(u, v)}] += w;
    }
    if (acc.empty()) throw ValidationError(src + ": graph has no edges");
    const auto n = static_cast<Eigen::Index>(ids.size());
    Matrix wm = Matrix::Zero(n, n);
    for (auto [e, w] : acc) wm(e.first, e.second) = wm(e.second, e.first) = w;
    return WeightedGraph(std::move(wm), std::move(ids));
}

inline WeightedGraph load_edge_list(const std::string& path) {
    auto in = detail::open_in(path);
    return read_edge_list(in, path);
}

inline void write_edge_list(std::ostream& out, const WeightedGraph& g, const std::string& header = "") {
    if (!header.empty()) out << "# " << header << "\n";
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (g.adjacent(i, j)) {
                out << g.node_ids()[i] << ' ' << g.node_ids()[j];
                if (g.weights()(i, j) != 1.0) out << ' ' << format_real(g.weights()(i, j));
                out << '\n';
            }
}

struct LabeledMatrix {
    Matrix values;
    std::vector<std::string> labels;  // row labels; "1".."n" when the file has none
};

// Numeric CSV with optional header row and/or label column; '#' lines skipped.
inline LabeledMatrix read_numeric_csv(std::istream& in, const std::string& src = "<input>") {
    std::vector<std::vector<std::string>> rows;
    std::vector<int> linenos;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        rows.push_back(detail::split_csv(t));
        linenos.push_back(lineno);
    }
    if (rows.empty()) throw ValidationError(src + ": no data rows");
    double dummy;
    // Row 0 is a header when a cell past the first is non-numeric (a lone
    // non-numeric first cell is more likely a row label), or when it starts
    // with "node" or an empty cell, which also marks a label column.
    const auto& first = rows[0];
    bool label_col = first[0].empty() || first[0] == "node";
    bool header = label_col || (first.size() == 1 && !detail::parse_real(first[0], dummy));
    for (std::size_t j = 1; j < first.size(); ++j)
        if (!detail::parse_real(first[j], dummy)) header = true;
    if (header) {
        rows.erase(rows.begin());
        linenos.erase(linenos.begin());
    }
    if (rows.empty()) throw ValidationError(src + ": no data rows");
    for (const auto& r : rows)
        if (!r.empty() && !detail::parse_real(r[0], dummy)) label_col = true;

    const std::size_t width = rows[0].size() - (label_col ? 1 : 0);
    if (width == 0) throw ValidationError(src + ": no numeric columns");
    LabeledMatrix out{Matrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width)), {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() - (label_col ? 1 : 0) != width)
            throw detail::line_error(src, linenos[i], "expected " + std::to_string(width) + " values, got " +
                                                          std::to_string(r.size() - (label_col ? 1 : 0)));
        out.labels.push_back(label_col ? r[0] : std::to_string(i + 1));
        for (std::size_t j = 0; j < width; ++j) {
            double v;
            const auto& cell = r[j + (label_col ? 1 : 0)];
            if (!detail::parse_real(cell, v) || !std::isfinite(v))
                throw detail::line_error(src, linenos[i], "non-numeric entry '" + cell + "'");
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return out;
}

inline LabeledMatrix read_dissimilarity_csv(std::istream& in, const std::string& src = "<input>") {
    LabeledMatrix m = read_numeric_csv(in, src);
    if (m.values.rows() != m.values.cols())
        throw ValidationError(src + ": dissimilarity matrix is " + std::to_string(m.values.rows()) + " x " +
                              std::to_string(m.values.cols()) + ", expected square");
    for (Eigen::Index i = 0; i < m.values.rows(); ++i)
        for (Eigen::Index j = 0; j < m.values.cols(); ++j)
            if (m.values(i, j) < 0.0)
                throw ValidationError(src + ": negative entry at row " + std::to_string(i + 1) + ", column " +
                                      std::to_string(j + 1));
    return m;
}

inline LabeledMatrix load_dissimilarity_csv(const std::string& path) {
    auto in = detail::open_in(path);
    return read_dissimilarity_csv(in, path);
}

inline LabeledMatrix load_objects_csv(const std::string& path) {
    auto in = detail::open_in(path);
    return read_numeric_csv(in, path);
}

// Writes "# manifest: {...}", a header row, then one labelled row per object.
inline void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& row_labels,
                             const std::vector<std::string>& col_names, const json& manifest) {
    if (!manifest.is_null()) out << "# manifest: " << manifest.dump() << "\n";
    out << "node";
    for (const auto& c : col_names) out << ',' << c;
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << row_labels[i];
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_real(m(i, j));
        out << '\n';
    }
}

// "node,label" rows. Returns (node, label) in file order.
inline std::vector<std::pair<std::string, std::string>> read_labels_csv(std::istream& in,
                                                                         const std::string& src = "<input>") {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cells = detail::split_csv(t);
        if (cells.size() != 2) throw detail::line_error(src, lineno, "expected 'node,label'");
        if (first && cells[0] == "node") {
            first = false;
            continue;
        }
        first = false;
        out.emplace_back(cells[0], cells[1]);
    }
    if (out.empty()) throw ValidationError(src + ": no labels");
    return out;
}

inline std::vector<std::pair<std::string, std::string>> load_labels_csv(const std::string& path) {
    auto in = detail::open_in(path);
    return read_labels_csv(in, path);
}

// Reference labels aligned to the given node order, as dense 0-based classes
// numbered by first appearance in the file.
inline HardPartition align_labels(const std::vector<std::pair<std::string, std::string>>& labels,
                                  const std::vector<std::string>& nodes) {
    std::unordered_map<std::string, int> by_node;
    for (const auto& [node, lab] : labels) {
        if (!by_node.emplace(node, 0).second) throw ValidationError("duplicate label for node " + node);
    }
    std::unordered_map<std::string, int> dense;
    for (const auto& [node, lab] : labels) {
        auto it = dense.emplace(lab, static_cast<int>(dense.size())).first;
        by_node[node] = it->second;
    }
    HardPartition out;
    for (const auto& n : nodes) {
        auto it = by_node.find(n);
        if (it == by_node.end()) throw ValidationError("no reference label for node " + n);
        out.push_back(it->second);
    }
    return out;
}

inline void write_labels_csv(std::ostream& out, const std::vector<std::string>& nodes, const HardPartition& labels,
                             const json& manifest) {
    if (!manifest.is_null()) out << "# manifest: " << manifest.dump() << "\n";
    out << "node,label\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) out << nodes[i] << ',' << labels[i] + 1 << '\n';
}

inline json focal_json(const FocalSet& a) {
    json arr = json::array();
    for (int k : a.members()) arr.push_back(k + 1);
    return arr;
}

inline FocalSet focal_from_json(const json& arr, int c) {
    std::uint32_t mask = 0;
    for (const auto& v : arr) {
        const int k = v.get<int>();
        if (k < 1 || k > c) throw ValidationError("focal set member out of range");
        mask |= 1u << (k - 1);
    }
    return {c, mask};
}

struct CredalDocument {
    std::string method;
    CredalPartition partition;
    std::vector<std::string> object_labels;
    std::vector<std::string> prototypes;
    FitReport report;
    json manifest;
    json extra;  // method-specific fields (centers, q_trace, ...)
};

inline json credal_json(const CredalDocument& doc) {
    const auto& m = doc.partition;
    const auto& s = m.structure();
    json j;
    j["manifest"] = doc.manifest;
    j["method"] = doc.method;
    j["frame_size"] = m.c();
    j["focal_mode"] = to_string(s.mode());
    const auto hard = harden_pignistic(m);
    const auto hard_focal = harden_credal(m);
    json objs = json::array();
    for (int i = 0; i < m.n(); ++i) {
        json o;
        o["label"] = doc.object_labels.empty() ? std::to_string(i + 1) : doc.object_labels[i];
        json masses = json::array();
        auto r = m.row(i);
        for (std::size_t f = 0; f < s.size(); ++f) masses.push_back({{"focal", focal_json(s[f])}, {"mass", r[f]}});
        o["masses"] = std::move(masses);
        o["pignistic"] = pignistic(s, r);
        o["hard_label"] = hard[i] + 1;
        o["hard_focal"] = focal_json(hard_focal[i]);
        objs.push_back(std::move(o));
    }
    j["objects"] = std::move(objs);
    j["prototypes"] = doc.prototypes;
    j["objective_trace"] = doc.report.objective_trace;
    j["iterations"] = doc.report.iterations;
    j["converged_by"] = to_string(doc.report.converged_by);
    for (auto it = doc.extra.begin(); doc.extra.is_object() && it != doc.extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

inline void write_credal_result(const CredalDocument& doc, const std::string& path) {
    auto out = detail::open_out(path);
    out << credal_json(doc).dump(2) << '\n';
    if (!out) throw ValidationError("failed writing " + path);
}

inline CredalDocument parse_credal_result(const json& j) {
    try {
        CredalDocument doc;
        doc.method = j.at("method").get<std::string>();
        doc.manifest = j.value("manifest", json());
        const int c = j.at("frame_size").get<int>();
        const auto mode = j.at("focal_mode").get<std::string>() == "pairs" ? FocalMode::pairs_plus_omega
                                                                             : FocalMode::full_power_set;
        FocalStructure s(c, mode);
        const auto& objs = j.at("objects");
        RowMatrix m = RowMatrix::Zero(static_cast<Eigen::Index>(objs.size()), static_cast<Eigen::Index>(s.size()));
        for (std::size_t i = 0; i < objs.size(); ++i) {
            doc.object_labels.push_back(objs[i].at("label").get<std::string>());
            for (const auto& e : objs[i].at("masses"))
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s.index_of(focal_from_json(e.at("focal"), c)))) =
                    e.at("mass").get<double>();
        }
        doc.partition = CredalPartition(std::move(s), std::move(m));
        doc.prototypes = j.value("prototypes", std::vector<std::string>{});
        doc.report.objective_trace = j.value("objective_trace", std::vector<double>{});
        doc.report.iterations = j.value("iterations", 0);
        doc.report.converged_by =
            j.value("converged_by", std::string("max_iter")) == "prototypes_stable" ? StopReason::prototypes_stable
                                                                                    : StopReason::max_iter;
        for (const char* key : {"centers", "q_trace", "best_c", "validity_index"})
            if (j.contains(key)) doc.extra[key] = j[key];
        return doc;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed result document: ") + e.what());
    }
}

inline CredalDocument read_credal_result(const std::string& path) {
    auto in = detail::open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(path + ": not valid JSON: " + e.what());
    }
    return parse_credal_result(j);
}

}  // namespace mecm::io

#endif  // MECM_IO_HPP
