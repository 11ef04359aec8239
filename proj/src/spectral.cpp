#include "htc/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "htc/errors.hpp"

namespace htc {

ReinforcementVector update_reinforcement(const ReinforcementVector& r,
                                         std::span<const int> trusted_nodes, double beta) {
    if (!(beta > 1.0)) throw ArgumentError("reinforcement rate must be greater than 1");
    ReinforcementVector out = r;
    for (int v : trusted_nodes) {
        if (v < 0 || v >= out.size()) throw ArgumentError("trusted node index out of range");
        out.factors[static_cast<std::size_t>(v)] *= beta;
    }
    return out;
}

OrbitLaplacian::OrbitLaplacian(int node_count, int orbit_id, std::vector<Edge> edges,
                               std::vector<double> off_diagonal, std::vector<double> diagonal)
    : node_count_(node_count),
      orbit_id_(orbit_id),
      edges_(std::move(edges)),
      off_(std::move(off_diagonal)),
      diag_(std::move(diagonal)) {
    if (off_.size() != edges_.size())
        throw DimensionError("off-diagonal values do not match edge list");
    if (static_cast<int>(diag_.size()) != node_count_)
        throw DimensionError("diagonal does not match node count");

    offsets_.assign(static_cast<std::size_t>(node_count_) + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[static_cast<std::size_t>(e.u) + 1];
        ++offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    incident_.resize(edges_.size() * 2);
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        incident_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.u)]++)] = {e.v, id};
        incident_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.v)]++)] = {e.u, id};
    }
}

Eigen::MatrixXd OrbitLaplacian::multiply(const Eigen::MatrixXd& h) const {
    if (h.rows() != node_count_) throw DimensionError("matrix rows do not match node count");
    Eigen::MatrixXd out(h.rows(), h.cols());
    for (int i = 0; i < node_count_; ++i) {
        out.row(i) = diag_[static_cast<std::size_t>(i)] * h.row(i);
        const auto lo = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(i)]);
        const auto hi = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(i) + 1]);
        for (std::size_t t = lo; t < hi; ++t)
            out.row(i) += off_[static_cast<std::size_t>(incident_[t].edge_id)] *
                          h.row(incident_[t].neighbor);
    }
    return out;
}

double OrbitLaplacian::inner_with_gram(const Eigen::MatrixXd& h) const {
    if (h.rows() != node_count_) throw DimensionError("matrix rows do not match node count");
    double acc = 0.0;
    for (int i = 0; i < node_count_; ++i)
        acc += diag_[static_cast<std::size_t>(i)] * h.row(i).squaredNorm();
    for (std::size_t id = 0; id < edges_.size(); ++id)
        acc += 2.0 * off_[id] * h.row(edges_[id].u).dot(h.row(edges_[id].v));
    return acc;
}

double OrbitLaplacian::frobenius_squared() const {
    double acc = 0.0;
    for (double d : diag_) acc += d * d;
    for (double o : off_) acc += 2.0 * o * o;
    return acc;
}

Eigen::MatrixXd OrbitLaplacian::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(node_count_, node_count_);
    for (int i = 0; i < node_count_; ++i) m(i, i) = diag_[static_cast<std::size_t>(i)];
    for (std::size_t id = 0; id < edges_.size(); ++id) {
        m(edges_[id].u, edges_[id].v) = off_[id];
        m(edges_[id].v, edges_[id].u) = off_[id];
    }
    return m;
}

std::vector<double> self_connection(const OrbitMatrixSet& set, int orbit) {
    auto counts = set.counts(orbit);
    std::vector<std::int64_t> row_max(static_cast<std::size_t>(set.node_count()), 0);
    for (std::size_t id = 0; id < set.edges().size(); ++id) {
        const Edge& e = set.edges()[id];
        row_max[static_cast<std::size_t>(e.u)] = std::max(row_max[static_cast<std::size_t>(e.u)], counts[id]);
        row_max[static_cast<std::size_t>(e.v)] = std::max(row_max[static_cast<std::size_t>(e.v)], counts[id]);
    }
    std::vector<double> diag(row_max.size());
    for (std::size_t i = 0; i < row_max.size(); ++i)
        diag[i] = row_max[i] > 0 ? static_cast<double>(row_max[i]) : 1.0;
    return diag;
}

OrbitLaplacian normalized_laplacian(const OrbitMatrixSet& set, int orbit,
                                    const std::vector<double>& self_conn) {
    if (static_cast<int>(self_conn.size()) != set.node_count())
        throw DimensionError("self-connection diagonal does not match node count");
    auto counts = set.counts(orbit);

    // Row sums of O + C; strictly positive because C is.
    std::vector<double> rowsum(self_conn);
    for (std::size_t id = 0; id < set.edges().size(); ++id) {
        const Edge& e = set.edges()[id];
        rowsum[static_cast<std::size_t>(e.u)] += static_cast<double>(counts[id]);
        rowsum[static_cast<std::size_t>(e.v)] += static_cast<double>(counts[id]);
    }
    std::vector<double> inv_sqrt(rowsum.size());
    for (std::size_t i = 0; i < rowsum.size(); ++i) inv_sqrt[i] = 1.0 / std::sqrt(rowsum[i]);

    std::vector<double> off(set.edges().size());
    for (std::size_t id = 0; id < set.edges().size(); ++id) {
        const Edge& e = set.edges()[id];
        off[id] = static_cast<double>(counts[id]) * inv_sqrt[static_cast<std::size_t>(e.u)] *
                  inv_sqrt[static_cast<std::size_t>(e.v)];
    }
    std::vector<double> diag(self_conn.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        diag[i] = self_conn[i] * inv_sqrt[i] * inv_sqrt[i];

    return {set.node_count(), orbit, set.edges(), std::move(off), std::move(diag)};
}

std::vector<OrbitLaplacian> build_orbit_laplacians(const OrbitMatrixSet& set) {
    std::vector<OrbitLaplacian> laps;
    laps.reserve(static_cast<std::size_t>(set.orbit_count()));
    for (int k = 0; k < set.orbit_count(); ++k)
        laps.push_back(normalized_laplacian(set, k, self_connection(set, k)));
    return laps;
}

OrbitLaplacian reinforce_laplacian(const OrbitLaplacian& lap, const ReinforcementVector& r) {
    if (r.size() != lap.node_count())
        throw DimensionError("reinforcement vector does not match node count");
    std::vector<double> off(lap.off_diagonal());
    const auto& edges = lap.edges();
    for (std::size_t id = 0; id < edges.size(); ++id)
        off[id] *= r.factors[static_cast<std::size_t>(edges[id].u)] *
                   r.factors[static_cast<std::size_t>(edges[id].v)];
    std::vector<double> diag(lap.diagonal());
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] *= r.factors[i] * r.factors[i];
    return {lap.node_count(), lap.orbit_id(), edges, std::move(off), std::move(diag)};
}

} // namespace htc
