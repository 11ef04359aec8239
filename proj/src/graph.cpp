#include "htc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "htc/errors.hpp"

namespace htc {
namespace {

bool parse_int(const std::string& tok, int& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_double(const std::string& tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    if (sep == ' ') { // any whitespace run
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) fields.push_back(tok);
        return fields;
    }
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    // trim surrounding spaces so "a, b" parses
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        if (b == std::string::npos) {
            f.clear();
        } else {
            const auto e = f.find_last_not_of(" \t");
            f = f.substr(b, e - b + 1);
        }
    }
    return fields;
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

Graph Graph::from_edges(int node_count, std::vector<std::pair<int, int>> edges,
                        std::vector<std::string> labels) {
    if (node_count < 0) throw ArgumentError("node count must be non-negative");
    if (!labels.empty() && static_cast<int>(labels.size()) != node_count)
        throw DimensionError("label list size does not match node count");

    Graph g;
    g.node_count_ = node_count;
    g.labels_ = std::move(labels);
    for (int i = 0; i < static_cast<int>(g.labels_.size()); ++i) {
        if (!g.label_index_.emplace(g.labels_[i], i).second)
            throw ValidationError("duplicate node label '" + g.labels_[i] + "'");
    }

    g.edges_.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a < 0 || a >= node_count || b < 0 || b >= node_count)
            throw ValidationError("edge endpoint out of range");
        if (a == b) throw ValidationError("self-loop is not allowed");
        g.edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
    }
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge& x, const Edge& y) { return x.u < y.u || (x.u == y.u && x.v < y.v); });
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

    g.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (const Edge& e : g.edges_) {
        ++g.offsets_[static_cast<std::size_t>(e.u) + 1];
        ++g.offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.incident_.resize(g.edges_.size() * 2);
    std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (int id = 0; id < static_cast<int>(g.edges_.size()); ++id) {
        const Edge& e = g.edges_[static_cast<std::size_t>(id)];
        g.incident_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)]++)] = {e.v, id};
        g.incident_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)]++)] = {e.u, id};
    }
    for (int v = 0; v < node_count; ++v) {
        auto row = g.incident_.begin() + g.offsets_[static_cast<std::size_t>(v)];
        auto end = g.incident_.begin() + g.offsets_[static_cast<std::size_t>(v) + 1];
        std::sort(row, end, [](const IncidentEdge& x, const IncidentEdge& y) {
            return x.neighbor < y.neighbor;
        });
        g.max_degree_ = std::max(g.max_degree_, static_cast<int>(end - row));
    }
    return g;
}

std::span<const IncidentEdge> Graph::incident(int v) const {
    const auto lo = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    const auto hi = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return {incident_.data() + lo, hi - lo};
}

int Graph::degree(int v) const {
    return offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)];
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_ || u == v) return false;
    auto row = incident(degree(u) <= degree(v) ? u : v);
    const int want = degree(u) <= degree(v) ? v : u;
    auto it = std::lower_bound(row.begin(), row.end(), want,
                               [](const IncidentEdge& e, int x) { return e.neighbor < x; });
    return it != row.end() && it->neighbor == want;
}

std::optional<int> Graph::index_of(const std::string& label) const {
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

std::string Graph::display_id(int v) const {
    if (!labels_.empty()) return labels_[static_cast<std::size_t>(v)];
    return std::to_string(v);
}

Graph load_edge_list(const std::string& path, IdPolicy policy, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list '" + path + "'");

    std::unordered_map<std::string, int> idmap;
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> edges;
    int max_id = -1;

    auto resolve = [&](const std::string& tok, long line_no) {
        if (policy == IdPolicy::RemapDense) {
            auto [it, inserted] = idmap.emplace(tok, static_cast<int>(labels.size()));
            if (inserted) labels.push_back(tok);
            return it->second;
        }
        int id = 0;
        if (!parse_int(tok, id) || id < 0)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": id '" + tok + "' is not a non-negative integer");
        max_id = std::max(max_id, id);
        return id;
    };

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line[line.find_first_not_of(" \t")] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b))
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected two node ids");
        if (ls >> extra)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected exactly two node ids");
        const int ia = resolve(a, line_no);
        const int ib = resolve(b, line_no);
        if (ia == ib) {
            if (warnings)
                *warnings << path << ":" << line_no << ": dropping self-loop on '" << a << "'\n";
            continue;
        }
        edges.emplace_back(ia, ib);
    }

    const int n = policy == IdPolicy::RemapDense ? static_cast<int>(labels.size()) : max_id + 1;
    return Graph::from_edges(n, std::move(edges),
                             policy == IdPolicy::RemapDense ? std::move(labels)
                                                            : std::vector<std::string>{});
}

void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write edge list '" + path + "'");
    for (const Edge& e : g.edges())
        out << g.display_id(e.u) << '\t' << g.display_id(e.v) << '\n';
}

AttributeMatrix load_attributes(const std::string& path, const Graph& g, bool l2_normalize) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open attribute table '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    char sep = '\0';
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        if (sep == '\0')
            sep = line.find(',') != std::string::npos ? ','
                : line.find('\t') != std::string::npos ? '\t'
                                                       : ' ';
        auto fields = split_fields(line, sep);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!parse_double(fields[i], row[i])) {
                numeric = false;
                if (!first_data_line)
                    throw ParseError(path + ":" + std::to_string(line_no) +
                                     ": non-numeric value '" + fields[i] + "'");
                break;
            }
        }
        if (first_data_line) {
            first_data_line = false;
            if (!numeric) continue; // header line
        }
        if (!rows.empty() && rows.front().size() != row.size())
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(rows.front().size()) + " columns, found " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    }

    if (static_cast<int>(rows.size()) != g.node_count())
        throw DimensionError(path + ": " + std::to_string(rows.size()) +
                             " attribute rows for " + std::to_string(g.node_count()) + " nodes");
    const Eigen::Index d = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
    if (g.node_count() > 0 && d == 0) throw DimensionError(path + ": attribute rows are empty");

    AttributeMatrix attrs(static_cast<Eigen::Index>(rows.size()), d);
    for (Eigen::Index r = 0; r < attrs.rows(); ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            attrs(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];

    if (l2_normalize) {
        for (Eigen::Index r = 0; r < attrs.rows(); ++r) {
            const double norm = attrs.row(r).norm();
            if (norm > 0.0) attrs.row(r) /= norm;
        }
    }
    return attrs;
}

void write_attributes(const AttributeMatrix& attrs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write attribute table '" + path + "'");
    for (Eigen::Index r = 0; r < attrs.rows(); ++r) {
        for (Eigen::Index c = 0; c < attrs.cols(); ++c) {
            if (c) out << ',';
            out << fmt_double(attrs(r, c));
        }
        out << '\n';
    }
}

GroundTruth load_groundtruth(const std::string& path, const Graph& source, const Graph& target) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open ground truth '" + path + "'");

    auto resolve = [&](const Graph& g, const std::string& tok, long line_no) {
        if (g.has_labels()) {
            if (auto idx = g.index_of(tok)) return *idx;
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": unknown node '" + tok + "'");
        }
        int id = 0;
        if (!parse_int(tok, id) || id < 0 || id >= g.node_count())
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": node index '" + tok + "' out of range");
        return id;
    };

    GroundTruth truth;
    std::vector<char> seen_src(static_cast<std::size_t>(source.node_count()), 0);
    std::vector<char> seen_tgt(static_cast<std::size_t>(target.node_count()), 0);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line) || line[line.find_first_not_of(" \t")] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b) || (ls >> extra))
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected two node ids");
        const int s = resolve(source, a, line_no);
        const int t = resolve(target, b, line_no);
        if (seen_src[static_cast<std::size_t>(s)])
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": source node '" + a + "' listed twice");
        if (seen_tgt[static_cast<std::size_t>(t)])
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": target node '" + b + "' listed twice");
        seen_src[static_cast<std::size_t>(s)] = 1;
        seen_tgt[static_cast<std::size_t>(t)] = 1;
        truth.pairs.emplace_back(s, t);
    }
    return truth;
}

void write_groundtruth(const GroundTruth& truth, const Graph& source, const Graph& target,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write ground truth '" + path + "'");
    for (auto [s, t] : truth.pairs)
        out << source.display_id(s) << '\t' << target.display_id(t) << '\n';
}

} // namespace htc
