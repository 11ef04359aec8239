#include "htc/synthetic.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>

#include "htc/errors.hpp"
#include "htc/rng.hpp"

namespace htc {

AlignmentDataset make_noisy_copy(const Graph& source, const AttributeMatrix& attrs,
                                 const NoiseSpec& noise) {
    if (noise.removal_ratio < 0.0 || noise.removal_ratio > 1.0)
        throw ArgumentError("removal ratio must lie in [0, 1]");
    if (attrs.rows() != source.node_count())
        throw DimensionError("attribute rows do not match node count");

    Rng rng(noise.seed);
    const int n = source.node_count();

    // Uniform sample without replacement: shuffle edge ids, keep a suffix.
    const auto keep_from = static_cast<std::size_t>(
        std::floor(noise.removal_ratio * static_cast<double>(source.edge_count())));
    std::vector<int> edge_ids(static_cast<std::size_t>(source.edge_count()));
    std::iota(edge_ids.begin(), edge_ids.end(), 0);
    rng.shuffle(edge_ids);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    if (noise.permute) rng.shuffle(perm);

    std::vector<std::pair<int, int>> target_edges;
    target_edges.reserve(edge_ids.size() - std::min(keep_from, edge_ids.size()));
    for (std::size_t i = keep_from; i < edge_ids.size(); ++i) {
        const Edge& e = source.edges()[static_cast<std::size_t>(edge_ids[i])];
        target_edges.emplace_back(perm[static_cast<std::size_t>(e.u)],
                                  perm[static_cast<std::size_t>(e.v)]);
    }

    AlignmentDataset data;
    data.source = source;
    data.target = Graph::from_edges(n, std::move(target_edges));
    data.source_attrs = attrs;
    data.target_attrs.resize(attrs.rows(), attrs.cols());
    for (int i = 0; i < n; ++i)
        data.target_attrs.row(perm[static_cast<std::size_t>(i)]) = attrs.row(i);
    for (int i = 0; i < n; ++i)
        data.truth.pairs.emplace_back(i, perm[static_cast<std::size_t>(i)]);
    return data;
}

AlignmentDataset make_random_attributed_pair(int n, double edge_prob, int attr_dim,
                                             const NoiseSpec& noise) {
    if (n < 0) throw ArgumentError("node count must be non-negative");
    if (edge_prob < 0.0 || edge_prob > 1.0) throw ArgumentError("edge probability must lie in [0, 1]");
    if (attr_dim < 1) throw ArgumentError("attribute dimension must be positive");

    Rng rng(noise.seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) edges.emplace_back(i, j);
    Graph source = Graph::from_edges(n, std::move(edges));

    AttributeMatrix attrs(n, attr_dim);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < attr_dim; ++c) attrs(i, c) = rng.normal();

    return make_noisy_copy(source, attrs, noise);
}

void write_dataset(const AlignmentDataset& data, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_edge_list(data.source, (base / "source.edges").string());
    write_edge_list(data.target, (base / "target.edges").string());
    write_attributes(data.source_attrs, (base / "source_attrs.csv").string());
    write_attributes(data.target_attrs, (base / "target_attrs.csv").string());
    write_groundtruth(data.truth, data.source, data.target, (base / "groundtruth.tsv").string());
}

} // namespace htc
