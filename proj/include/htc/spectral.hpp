#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "htc/graph.hpp"
#include "htc/orbits.hpp"

namespace htc {

// Per-node multiplicative factors applied during trusted-pair
// reinforcement. All entries start at 1 and only ever grow.
struct ReinforcementVector {
    std::vector<double> factors;
    static ReinforcementVector ones(int n) {
        return {std::vector<double>(static_cast<std::size_t>(n), 1.0)};
    }
    int size() const { return static_cast<int>(factors.size()); }
};

// Multiplies the factors of the listed nodes by beta (> 1 required).
ReinforcementVector update_reinforcement(const ReinforcementVector& r,
                                         std::span<const int> trusted_nodes, double beta);

// Symmetric normalized propagation matrix of one orbit count matrix O:
// the self-connection diagonal C holds each row's maximum count (1 when
// the row is empty), and with F the row sums of O + C the stored matrix
// is F^{-1/2} (O + C) F^{-1/2}. Entries are finite and non-negative, the
// diagonal strictly positive, eigenvalues lie in [-1, 1].
class OrbitLaplacian {
  public:
    OrbitLaplacian() = default;
    OrbitLaplacian(int node_count, int orbit_id, std::vector<Edge> edges,
                   std::vector<double> off_diagonal, std::vector<double> diagonal);

    int node_count() const { return node_count_; }
    int orbit_id() const { return orbit_id_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& off_diagonal() const { return off_; }
    const std::vector<double>& diagonal() const { return diag_; }

    // Product with a dense matrix, O(e * cols).
    Eigen::MatrixXd multiply(const Eigen::MatrixXd& h) const;
    // <L, H H^T>, used by the reconstruction loss without forming n x n.
    double inner_with_gram(const Eigen::MatrixXd& h) const;
    double frobenius_squared() const;
    Eigen::MatrixXd dense() const;

  private:
    int node_count_ = 0;
    int orbit_id_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> off_;  // one value per edge
    std::vector<double> diag_; // one value per node
    std::vector<int> offsets_; // CSR over (neighbor, edge id)
    std::vector<IncidentEdge> incident_;
};

// Self-connection diagonal of one orbit matrix: row maximum, or 1 for rows
// with no counted edge, so the propagation matrix never loses a node.
std::vector<double> self_connection(const OrbitMatrixSet& set, int orbit);

OrbitLaplacian normalized_laplacian(const OrbitMatrixSet& set, int orbit,
                                    const std::vector<double>& self_conn);

// Convenience: Laplacians for every orbit matrix in the set.
std::vector<OrbitLaplacian> build_orbit_laplacians(const OrbitMatrixSet& set);

// Entrywise R L R: entry (i, j) scaled by r_i * r_j. No re-normalization;
// reinforced matrices deliberately push beyond unit spectral bounds.
OrbitLaplacian reinforce_laplacian(const OrbitLaplacian& lap, const ReinforcementVector& r);

} // namespace htc
