#include "htc/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "htc/errors.hpp"

namespace htc {
namespace {

// A centered row whose sum of squares is this small relative to its raw
// scale is considered constant; its correlations are defined as 0.
bool zero_variance(double centered_sq, double raw_sq, Eigen::Index d) {
    return centered_sq <= raw_sq * static_cast<double>(d) * 1e-28;
}

// Rows centered and scaled to unit norm; constant rows become zero rows.
Eigen::MatrixXd standardize_rows(const Eigen::MatrixXd& h) {
    Eigen::MatrixXd out(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const double mean = h.row(i).mean();
        Eigen::RowVectorXd centered = h.row(i).array() - mean;
        const double sq = centered.squaredNorm();
        if (zero_variance(sq, h.row(i).squaredNorm(), h.cols()) || sq == 0.0)
            out.row(i).setZero();
        else
            out.row(i) = centered / std::sqrt(sq);
    }
    return out;
}

double mean_of_top(std::vector<double>& buffer, int m) {
    std::nth_element(buffer.begin(), buffer.begin() + (m - 1), buffer.end(),
                     std::greater<double>());
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += buffer[static_cast<std::size_t>(i)];
    return acc / static_cast<double>(m);
}

} // namespace

Eigen::MatrixXd pearson_similarity(const Eigen::MatrixXd& h_source,
                                   const Eigen::MatrixXd& h_target) {
    if (h_source.cols() != h_target.cols())
        throw DimensionError("embedding dimensions of the two graphs differ");
    if (h_source.cols() < 2)
        throw ArgumentError("correlation needs embedding dimension >= 2");
    return standardize_rows(h_source) * standardize_rows(h_target).transpose();
}

Eigen::MatrixXd lisi_scores(const Eigen::MatrixXd& corr, int m) {
    const Eigen::Index ns = corr.rows();
    const Eigen::Index nt = corr.cols();
    if (m < 1 || m > std::min(ns, nt))
        throw ArgumentError("neighborhood size must be between 1 and the smaller node count");

    Eigen::VectorXd row_density(ns);
    std::vector<double> buffer;
    for (Eigen::Index i = 0; i < ns; ++i) {
        buffer.assign(corr.row(i).begin(), corr.row(i).end());
        row_density(i) = mean_of_top(buffer, m);
    }
    Eigen::VectorXd col_density(nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
        buffer.assign(corr.col(j).begin(), corr.col(j).end());
        col_density(j) = mean_of_top(buffer, m);
    }

    Eigen::MatrixXd out = 2.0 * corr;
    out.colwise() -= row_density;
    out.rowwise() -= col_density.transpose();
    return out;
}

std::vector<std::pair<int, int>> trusted_pairs(const Eigen::MatrixXd& scores) {
    const Eigen::Index ns = scores.rows();
    const Eigen::Index nt = scores.cols();
    std::vector<std::pair<int, int>> pairs;
    if (ns == 0 || nt == 0) return pairs;

    // Unique argmax per row and per column; -1 marks a tie.
    std::vector<int> row_best(static_cast<std::size_t>(ns));
    for (Eigen::Index i = 0; i < ns; ++i) {
        int best = 0;
        bool unique = true;
        for (Eigen::Index j = 1; j < nt; ++j) {
            if (scores(i, j) > scores(i, best)) {
                best = static_cast<int>(j);
                unique = true;
            } else if (scores(i, j) == scores(i, best)) {
                unique = false;
            }
        }
        row_best[static_cast<std::size_t>(i)] = unique ? best : -1;
    }
    std::vector<int> col_best(static_cast<std::size_t>(nt));
    for (Eigen::Index j = 0; j < nt; ++j) {
        int best = 0;
        bool unique = true;
        for (Eigen::Index i = 1; i < ns; ++i) {
            if (scores(i, j) > scores(best, j)) {
                best = static_cast<int>(i);
                unique = true;
            } else if (scores(i, j) == scores(best, j)) {
                unique = false;
            }
        }
        col_best[static_cast<std::size_t>(j)] = unique ? best : -1;
    }

    for (Eigen::Index i = 0; i < ns; ++i) {
        const int j = row_best[static_cast<std::size_t>(i)];
        if (j >= 0 && col_best[static_cast<std::size_t>(j)] == static_cast<int>(i))
            pairs.emplace_back(static_cast<int>(i), j);
    }
    return pairs;
}

FineTuneResult fine_tune(const OrbitLaplacian& lap_source, const OrbitLaplacian& lap_target,
                         const Eigen::MatrixXd& attrs_source, const Eigen::MatrixXd& attrs_target,
                         const Eigen::MatrixXd& h_source, const Eigen::MatrixXd& h_target,
                         const EncoderParams& params, double beta, int m) {
    if (!(beta > 1.0)) throw ArgumentError("reinforcement rate must be greater than 1");

    ReinforcementVector r_source = ReinforcementVector::ones(lap_source.node_count());
    ReinforcementVector r_target = ReinforcementVector::ones(lap_target.node_count());

    Eigen::MatrixXd h_s = h_source;
    Eigen::MatrixXd h_t = h_target;

    FineTuneResult best;
    int previous = 0;
    bool have_snapshot = false;
    int iteration = 0;
    while (true) {
        ++iteration;
        Eigen::MatrixXd scores = lisi_scores(pearson_similarity(h_s, h_t), m);
        const auto trusted = trusted_pairs(scores);
        const int current = static_cast<int>(trusted.size());
        if (iteration == 1) best.initial_trusted = current;

        if (!have_snapshot || current > best.trusted_count) {
            best.scores = {std::move(scores), lap_source.orbit_id()};
            best.trusted_count = current;
            have_snapshot = true;
        }
        if (current <= previous) break; // stopped growing
        previous = current;

        std::vector<int> src_nodes, tgt_nodes;
        src_nodes.reserve(trusted.size());
        tgt_nodes.reserve(trusted.size());
        for (auto [s, t] : trusted) {
            src_nodes.push_back(s);
            tgt_nodes.push_back(t);
        }
        r_source = update_reinforcement(r_source, src_nodes, beta);
        r_target = update_reinforcement(r_target, tgt_nodes, beta);

        h_s = forward(reinforce_laplacian(lap_source, r_source), attrs_source, params).embedding();
        h_t = forward(reinforce_laplacian(lap_target, r_target), attrs_target, params).embedding();
    }
    best.iterations = iteration;
    return best;
}

AlignmentResult integrate(std::vector<ScoreMatrix> per_orbit,
                          const std::vector<int>& trusted_counts) {
    if (per_orbit.empty()) throw ArgumentError("nothing to integrate");
    if (per_orbit.size() != trusted_counts.size())
        throw DimensionError("score matrices and trusted counts differ in length");
    for (const auto& s : per_orbit)
        if (s.values.rows() != per_orbit.front().values.rows() ||
            s.values.cols() != per_orbit.front().values.cols())
            throw DimensionError("score matrices differ in shape");
    for (int t : trusted_counts)
        if (t < 0) throw ArgumentError("trusted counts cannot be negative");

    AlignmentResult result;
    const std::size_t k = per_orbit.size();
    const long total = std::accumulate(trusted_counts.begin(), trusted_counts.end(), 0L);
    result.weights.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        result.weights[i] = total > 0
                                ? static_cast<double>(trusted_counts[i]) / static_cast<double>(total)
                                : 1.0 / static_cast<double>(k);

    // Summed in ascending orbit id so input order cannot change the result.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return per_orbit[a].orbit_id < per_orbit[b].orbit_id;
    });
    Eigen::MatrixXd final_values = Eigen::MatrixXd::Zero(per_orbit.front().values.rows(),
                                                         per_orbit.front().values.cols());
    for (std::size_t i : order) final_values += result.weights[i] * per_orbit[i].values;

    result.per_orbit = std::move(per_orbit);
    result.trusted_counts = trusted_counts;
    result.final = {std::move(final_values), -1};
    return result;
}

std::vector<std::vector<int>> predict(const Eigen::MatrixXd& scores, int q,
                                      std::ostream* warnings) {
    if (q < 1) throw ArgumentError("q must be positive");
    const int nt = static_cast<int>(scores.cols());
    if (q > nt) {
        if (warnings)
            *warnings << "note: q=" << q << " clamped to " << nt << " target nodes\n";
        q = nt;
    }
    std::vector<std::vector<int>> out(static_cast<std::size_t>(scores.rows()));
    std::vector<int> idx(static_cast<std::size_t>(nt));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        std::iota(idx.begin(), idx.end(), 0);
        std::partial_sort(idx.begin(), idx.begin() + q, idx.end(), [&](int a, int b) {
            const double sa = scores(i, a);
            const double sb = scores(i, b);
            return sa > sb || (sa == sb && a < b);
        });
        out[static_cast<std::size_t>(i)].assign(idx.begin(), idx.begin() + q);
    }
    return out;
}

} // namespace htc
