#include "htc/orbits.hpp"

#include <algorithm>
#include <array>
#include <ostream>

#include "htc/errors.hpp"
#include "htc/util.hpp"

namespace htc {

namespace {

constexpr std::array<int, kOrbitCount> kGraphletOfOrbit = {0, 1, 2, 3, 3, 4, 5, 6, 6, 6, 7, 7, 8};

constexpr std::array<const char*, kOrbitCount> kOrbitNames = {
    "edge",          "path3",        "triangle",    "path4-end",   "path4-middle",
    "star3",         "cycle4",       "paw-pendant", "paw-at-hub",  "paw-opposite",
    "diamond-rim",   "diamond-chord", "clique4"};

int edge_index(const std::vector<Edge>& edges, int u, int v) {
    if (u > v) std::swap(u, v);
    const Edge probe{u, v};
    auto it = std::lower_bound(edges.begin(), edges.end(), probe,
                               [](const Edge& a, const Edge& b) {
                                   return a.u < b.u || (a.u == b.u && a.v < b.v);
                               });
    if (it == edges.end() || !(*it == probe)) return -1;
    return static_cast<int>(it - edges.begin());
}

} // namespace

int orbit_graphlet(int orbit) {
    if (orbit < 0 || orbit >= kOrbitCount) throw ArgumentError("orbit index out of range");
    return kGraphletOfOrbit[static_cast<std::size_t>(orbit)];
}

const char* orbit_name(int orbit) {
    if (orbit < 0 || orbit >= kOrbitCount) throw ArgumentError("orbit index out of range");
    return kOrbitNames[static_cast<std::size_t>(orbit)];
}

OrbitMatrixSet::OrbitMatrixSet(int node_count, std::vector<Edge> edges,
                               std::vector<std::vector<std::int64_t>> counts)
    : node_count_(node_count), edges_(std::move(edges)), counts_(std::move(counts)) {
    if (counts_.empty() || counts_.size() > kOrbitCount)
        throw ArgumentError("orbit matrix set needs 1..13 matrices");
    for (const auto& c : counts_)
        if (c.size() != edges_.size())
            throw DimensionError("orbit count vector does not match edge list");
}

std::span<const std::int64_t> OrbitMatrixSet::counts(int orbit) const {
    if (orbit < 0 || orbit >= orbit_count()) throw ArgumentError("orbit index out of range");
    return counts_[static_cast<std::size_t>(orbit)];
}

std::int64_t OrbitMatrixSet::value(int orbit, int u, int v) const {
    if (orbit < 0 || orbit >= orbit_count()) throw ArgumentError("orbit index out of range");
    const int id = edge_index(edges_, u, v);
    return id < 0 ? 0 : counts_[static_cast<std::size_t>(orbit)][static_cast<std::size_t>(id)];
}

std::int64_t OrbitMatrixSet::nonzero_count(int orbit) const {
    auto c = counts(orbit);
    std::int64_t nnz = 0;
    for (auto x : c)
        if (x != 0) nnz += 2; // symmetric matrix stores each edge once
    return nnz;
}

OrbitMatrixSet count_orbits_bruteforce(const Graph& g) {
    const int n = g.node_count();
    std::vector<std::vector<std::int64_t>> counts(
        kOrbitCount, std::vector<std::int64_t>(g.edges().size(), 0));

    // 2-node graphlet: each edge counts itself.
    for (int id = 0; id < g.edge_count(); ++id) counts[0][static_cast<std::size_t>(id)] = 1;

    // 3-node subsets: two edges form a path, three a triangle.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int eij = edge_index(g.edges(), i, j);
            for (int k = j + 1; k < n; ++k) {
                const int eik = edge_index(g.edges(), i, k);
                const int ejk = edge_index(g.edges(), j, k);
                const std::array<int, 3> present{eij, eik, ejk};
                int m = 0;
                for (int e : present)
                    if (e >= 0) ++m;
                if (m == 2) {
                    for (int e : present)
                        if (e >= 0) ++counts[1][static_cast<std::size_t>(e)];
                } else if (m == 3) {
                    for (int e : present)
                        if (e >= 0) ++counts[2][static_cast<std::size_t>(e)];
                }
            }
        }
    }

    // 4-node subsets: classify by edge count and the degree profile inside
    // the induced subgraph, then hand each present edge its role.
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            for (int c = b + 1; c < n; ++c) {
                for (int d = c + 1; d < n; ++d) {
                    const std::array<int, 4> node{a, b, c, d};
                    std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
                    std::array<int, 6> eid{};
                    std::array<int, 4> deg{};
                    int e4 = 0;
                    for (int p = 0; p < 6; ++p) {
                        eid[static_cast<std::size_t>(p)] =
                            edge_index(g.edges(), node[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)][0])],
                                       node[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)][1])]);
                        if (eid[static_cast<std::size_t>(p)] >= 0) {
                            ++e4;
                            ++deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)][0])];
                            ++deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)][1])];
                        }
                    }
                    if (e4 < 3) continue; // cannot span four nodes
                    if (e4 == 3 && std::count(deg.begin(), deg.end(), 0) > 0)
                        continue; // triangle plus isolated node
                    const int dmax = *std::max_element(deg.begin(), deg.end());
                    for (int p = 0; p < 6; ++p) {
                        const int e = eid[static_cast<std::size_t>(p)];
                        if (e < 0) continue;
                        const int du = deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)][0])];
                        const int dv = deg[static_cast<std::size_t>(pairs[static_cast<std::size_t>(p)][1])];
                        const int lo = std::min(du, dv);
                        const int hi = std::max(du, dv);
                        int orbit;
                        if (e4 == 3) {
                            orbit = dmax == 3 ? 5 : (lo == 1 ? 3 : 4);
                        } else if (e4 == 4) {
                            orbit = dmax == 3 ? (lo == 1 ? 7 : (hi == 3 ? 8 : 9)) : 6;
                        } else if (e4 == 5) {
                            orbit = lo == 3 ? 11 : 10;
                        } else {
                            orbit = 12;
                        }
                        ++counts[static_cast<std::size_t>(orbit)][static_cast<std::size_t>(e)];
                    }
                }
            }
        }
    }

    return {n, g.edges(), std::move(counts)};
}

OrbitMatrixSet count_orbits_fast(const Graph& g, int threads) {
    const int n = g.node_count();
    const auto& edges = g.edges();
    std::vector<std::vector<std::int64_t>> counts(
        kOrbitCount, std::vector<std::int64_t>(edges.size(), 0));

    struct Scratch {
        std::vector<std::uint8_t> mark;  // bit 1: in N(u), bit 2: in N(v)
        std::vector<std::uint64_t> seen; // token of the last w adjacent to the node
        std::vector<int> merged;         // N(u) union N(v) minus the endpoints
        std::uint64_t token = 0;
    };

    const int workers = std::max(1, std::min<int>(threads, g.edge_count()));
    std::vector<Scratch> scratch(static_cast<std::size_t>(workers));
    for (auto& s : scratch) {
        s.mark.assign(static_cast<std::size_t>(n), 0);
        s.seen.assign(static_cast<std::size_t>(n), 0);
    }
    const std::size_t per_worker = workers == 0 ? 0 : (edges.size() + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);

    auto run_range = [&](std::size_t worker) {
        Scratch& sc = scratch[worker];
        const std::size_t lo = worker * per_worker;
        const std::size_t hi = std::min(edges.size(), lo + per_worker);
        for (std::size_t id = lo; id < hi; ++id) {
            const int u = edges[id].u;
            const int v = edges[id].v;
            sc.merged.clear();

            for (const IncidentEdge& ie : g.incident(u)) {
                if (ie.neighbor == v) continue;
                sc.mark[static_cast<std::size_t>(ie.neighbor)] = 1;
                sc.merged.push_back(ie.neighbor);
            }
            int common = 0;
            for (const IncidentEdge& ie : g.incident(v)) {
                if (ie.neighbor == u) continue;
                auto& m = sc.mark[static_cast<std::size_t>(ie.neighbor)];
                if (m == 0) sc.merged.push_back(ie.neighbor);
                if (m & 1) ++common;
                m |= 2;
            }

            counts[0][id] = 1;
            counts[2][id] = common;
            counts[1][id] = static_cast<std::int64_t>(g.degree(u) - 1 - common) +
                            static_cast<std::int64_t>(g.degree(v) - 1 - common);

            // Four-node subgraphs {u, v, w, x}. Any node outside the merged
            // neighborhood reaches the edge only through some w inside it,
            // which pins the shape to path-end or paw-opposite; pairs inside
            // the neighborhood are classified from five adjacency bits.
            const std::size_t msize = sc.merged.size();
            for (std::size_t wi = 0; wi < msize; ++wi) {
                const int w = sc.merged[wi];
                const std::uint8_t mw = sc.mark[static_cast<std::size_t>(w)];
                const std::uint64_t token = ++sc.token;
                int inside = 0;
                for (const IncidentEdge& ie : g.incident(w)) {
                    const int x = ie.neighbor;
                    if (x == u || x == v) continue;
                    if (sc.mark[static_cast<std::size_t>(x)]) {
                        sc.seen[static_cast<std::size_t>(x)] = token;
                        ++inside;
                    }
                }
                const int tails = g.degree(w) - inside - ((mw & 1) ? 1 : 0) - ((mw & 2) ? 1 : 0);
                if (mw == 3)
                    counts[9][id] += tails;
                else
                    counts[3][id] += tails;

                for (std::size_t xi = wi + 1; xi < msize; ++xi) {
                    const int x = sc.merged[xi];
                    const std::uint8_t mx = sc.mark[static_cast<std::size_t>(x)];
                    const bool wx = sc.seen[static_cast<std::size_t>(x)] == token;
                    const int anchors = ((mw & 1) ? 1 : 0) + ((mw & 2) ? 1 : 0) +
                                        ((mx & 1) ? 1 : 0) + ((mx & 2) ? 1 : 0);
                    int orbit;
                    if (wx) {
                        if (anchors == 2)
                            orbit = mw == mx ? 7 : 6; // triangle off one endpoint vs 4-cycle
                        else if (anchors == 3)
                            orbit = 10;
                        else
                            orbit = 12;
                    } else {
                        if (anchors == 2)
                            orbit = mw == mx ? 5 : 4; // star vs middle of a path
                        else if (anchors == 3)
                            orbit = 8;
                        else
                            orbit = 11;
                    }
                    ++counts[static_cast<std::size_t>(orbit)][id];
                }
            }

            for (const IncidentEdge& ie : g.incident(u)) sc.mark[static_cast<std::size_t>(ie.neighbor)] = 0;
            for (const IncidentEdge& ie : g.incident(v)) sc.mark[static_cast<std::size_t>(ie.neighbor)] = 0;
        }
    };

    parallel_for(static_cast<std::size_t>(workers), workers, run_range);

    return {n, edges, std::move(counts)};
}

OrbitMatrixSet restrict_orbits(const OrbitMatrixSet& set, int first_k) {
    if (first_k < 1 || first_k > set.orbit_count())
        throw ArgumentError("orbit restriction must keep between 1 and " +
                            std::to_string(set.orbit_count()) + " matrices");
    std::vector<std::vector<std::int64_t>> kept;
    kept.reserve(static_cast<std::size_t>(first_k));
    for (int k = 0; k < first_k; ++k) {
        auto span = set.counts(k);
        kept.emplace_back(span.begin(), span.end());
    }
    return {set.node_count(), set.edges(), std::move(kept)};
}

void write_orbit_table(const OrbitMatrixSet& set, const Graph& g, std::ostream& out) {
    for (int id = 0; id < set.edge_count(); ++id) {
        const Edge& e = set.edges()[static_cast<std::size_t>(id)];
        out << g.display_id(e.u) << '\t' << g.display_id(e.v);
        for (int k = 0; k < set.orbit_count(); ++k)
            out << '\t' << set.counts(k)[static_cast<std::size_t>(id)];
        for (int k = set.orbit_count(); k < kOrbitCount; ++k) out << '\t' << 0;
        out << '\n';
    }
}

} // namespace htc
