#pragma once

#include <cstdint>
#include <string>

#include "htc/graph.hpp"

namespace htc {

// Controlled distortion applied when deriving a target graph from a source.
struct NoiseSpec {
    double removal_ratio = 0.0; // fraction of edges to delete, in [0, 1]
    bool permute = false;       // relabel target nodes with a random permutation
    std::uint64_t seed = 0;
};

// Target = copy of the source with floor(ratio * e) uniformly chosen edges
// removed (no replacement) and, optionally, permuted node indices.
// Attributes are copied noiselessly; ground truth maps every node.
AlignmentDataset make_noisy_copy(const Graph& source, const AttributeMatrix& attrs,
                                 const NoiseSpec& noise);

// G(n, p) source with i.i.d. standard normal attribute rows, plus its
// noisy copy. Same seed, same dataset.
AlignmentDataset make_random_attributed_pair(int n, double edge_prob, int attr_dim,
                                             const NoiseSpec& noise);

// Writes source/target edge lists, attribute tables, and the ground truth
// into dir using the standard file formats (creates the directory).
void write_dataset(const AlignmentDataset& data, const std::string& dir);

} // namespace htc
