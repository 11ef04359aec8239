#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace htc {

// Undirected edge with canonical endpoint order u < v.
struct Edge {
    int u = 0;
    int v = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct IncidentEdge {
    int neighbor = 0;
    int edge_id = 0;
};

// Simple undirected graph, immutable after construction. Edges are stored
// once in canonical (u < v) lexicographic order; adjacency is CSR with
// sorted neighbor lists so membership tests can binary-search.
class Graph {
  public:
    Graph() = default;

    // Validates ids, symmetrizes, collapses duplicates, rejects self-loops.
    // labels, when non-empty, maps node index -> external id.
    static Graph from_edges(int node_count, std::vector<std::pair<int, int>> edges,
                            std::vector<std::string> labels = {});

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const IncidentEdge> incident(int v) const;
    int degree(int v) const;
    int max_degree() const { return max_degree_; }
    bool has_edge(int u, int v) const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    // Node index for an external label; empty when labels are absent/unknown.
    std::optional<int> index_of(const std::string& label) const;
    // External label when present, otherwise the decimal index.
    std::string display_id(int v) const;

  private:
    int node_count_ = 0;
    int max_degree_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> offsets_;           // CSR row starts, size node_count_+1
    std::vector<IncidentEdge> incident_; // CSR payload, both directions
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> label_index_;
};

using AttributeMatrix = Eigen::MatrixXd;

// Verified one-to-one correspondence: no source and no target repeats.
struct GroundTruth {
    std::vector<std::pair<int, int>> pairs;
    bool empty() const { return pairs.empty(); }
    int size() const { return static_cast<int>(pairs.size()); }
};

// Everything one alignment run consumes.
struct AlignmentDataset {
    Graph source;
    Graph target;
    AttributeMatrix source_attrs;
    AttributeMatrix target_attrs;
    GroundTruth truth;
};

enum class IdPolicy {
    RemapDense,  // arbitrary tokens, indexed in first-appearance order
    RequireDense // ids must already be non-negative integers, used as-is
};

// Edge-list file: two whitespace-separated ids per line, '#' starts a
// comment. Directed inputs are symmetrized, duplicate edges collapse, and
// self-loops are dropped with a note to `warnings` when provided.
Graph load_edge_list(const std::string& path, IdPolicy policy, std::ostream* warnings = nullptr);

void write_edge_list(const Graph& g, const std::string& path);

// Comma- or tab-separated numeric table; a non-numeric first line is taken
// as a header. Row r holds the attribute vector of node r.
AttributeMatrix load_attributes(const std::string& path, const Graph& g, bool l2_normalize = false);

void write_attributes(const AttributeMatrix& attrs, const std::string& path);

// Two ids per line: source node, its true target. Tokens resolve through
// the graphs' label maps when present, otherwise as decimal indices.
GroundTruth load_groundtruth(const std::string& path, const Graph& source, const Graph& target);

void write_groundtruth(const GroundTruth& truth, const Graph& source, const Graph& target,
                       const std::string& path);

} // namespace htc
