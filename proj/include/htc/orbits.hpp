#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "htc/graph.hpp"

namespace htc {

// Edge orbits of the nine connected graphlets on 2..4 nodes. Counts say in
// how many induced subgraphs an edge plays each structural role:
//
//   orbit  graphlet            role of the counted edge
//   -----  ------------------  -----------------------------------------
//     0    single edge         the edge itself
//     1    3-node path         either path edge
//     2    triangle            any triangle edge
//     3    4-node path         end edge (touches a path endpoint)
//     4    4-node path         middle edge
//     5    3-star              any star edge
//     6    4-cycle             any cycle edge
//     7    paw                 the pendant edge
//     8    paw                 triangle edge at the attachment node
//     9    paw                 triangle edge opposite the pendant
//    10    diamond             perimeter edge
//    11    diamond             the chord
//    12    4-clique            any edge
inline constexpr int kOrbitCount = 13;

// Graphlet index (0..8) an orbit belongs to.
int orbit_graphlet(int orbit);
const char* orbit_name(int orbit);

// K sparse symmetric per-edge count matrices over one graph's edge set.
// Entry (u, v) of matrix k is counts(k)[edge_id(u, v)]; off-edge entries
// are structurally zero and the diagonal is empty.
class OrbitMatrixSet {
  public:
    OrbitMatrixSet() = default;
    OrbitMatrixSet(int node_count, std::vector<Edge> edges,
                   std::vector<std::vector<std::int64_t>> counts);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int orbit_count() const { return static_cast<int>(counts_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const std::int64_t> counts(int orbit) const;
    // 0 for non-edges; symmetric in (u, v).
    std::int64_t value(int orbit, int u, int v) const;
    std::int64_t nonzero_count(int orbit) const;

  private:
    int node_count_ = 0;
    std::vector<Edge> edges_; // canonical order, mirrors the source graph
    std::vector<std::vector<std::int64_t>> counts_;
};

// Reference counter: classifies every induced connected subgraph on 2..4
// nodes by exhaustive subset enumeration. O(n^4); the equivalence oracle
// for the fast counter.
OrbitMatrixSet count_orbits_bruteforce(const Graph& g);

// Production counter: per-edge merge of the two endpoint neighborhoods,
// closed forms for the 2/3-node orbits, and local enumeration over the
// merged neighborhood for the 4-node orbits. O(e * D^2) worst case.
OrbitMatrixSet count_orbits_fast(const Graph& g, int threads = 1);

// First `first_k` orbit matrices (1 <= first_k <= orbit count).
OrbitMatrixSet restrict_orbits(const OrbitMatrixSet& set, int first_k);

// Debug table: one row per edge, two endpoint ids then the 13 counts.
void write_orbit_table(const OrbitMatrixSet& set, const Graph& g, std::ostream& out);

} // namespace htc
