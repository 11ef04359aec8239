#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "htc/encoder.hpp"
#include "htc/spectral.hpp"

namespace htc {

// n_s x n_t similarity scores; orbit_id is -1 for the integrated matrix.
struct ScoreMatrix {
    Eigen::MatrixXd values;
    int orbit_id = -1;
};

// Row-wise Pearson correlation between the two embedding sets. Rows with
// zero variance correlate 0 with everything; needs dimension >= 2.
Eigen::MatrixXd pearson_similarity(const Eigen::MatrixXd& h_source,
                                   const Eigen::MatrixXd& h_target);

// Hubness-corrected similarity: 2 corr(i, j) minus the mean correlation of
// i to its m nearest targets minus the mean of j to its m nearest sources.
// Neighborhoods come from the correlation matrix itself. Values in [-4, 4].
Eigen::MatrixXd lisi_scores(const Eigen::MatrixXd& corr, int m);

// Pairs that pick each other as unique best score: j is the sole row
// maximum of i and i the sole column maximum of j. Ties disqualify.
std::vector<std::pair<int, int>> trusted_pairs(const Eigen::MatrixXd& scores);

struct FineTuneResult {
    ScoreMatrix scores;      // snapshot with the highest trusted count
    int trusted_count = 0;   // that snapshot's count
    int initial_trusted = 0; // count seen on the first evaluation
    int iterations = 0;      // LISI evaluations performed
};

// Reinforcement loop for one orbit view with frozen weights: score with
// LISI, collect trusted pairs, boost their propagation weight by beta, and
// regenerate embeddings; stops as soon as the trusted count fails to grow.
// Reinforcement factors start fresh for every call.
FineTuneResult fine_tune(const OrbitLaplacian& lap_source, const OrbitLaplacian& lap_target,
                         const Eigen::MatrixXd& attrs_source, const Eigen::MatrixXd& attrs_target,
                         const Eigen::MatrixXd& h_source, const Eigen::MatrixXd& h_target,
                         const EncoderParams& params, double beta, int m);

struct AlignmentResult {
    std::vector<ScoreMatrix> per_orbit;
    std::vector<int> trusted_counts;
    std::vector<double> weights; // one per orbit, sums to 1
    ScoreMatrix final;
};

// Confidence-weighted combination: weight_k = T_k / sum(T), uniform when
// every count is zero; final = sum_k weight_k * M_k.
AlignmentResult integrate(std::vector<ScoreMatrix> per_orbit,
                          const std::vector<int>& trusted_counts);

// Top-q target indices per source row, by descending score then ascending
// index. q larger than the target count is clamped with a note.
std::vector<std::vector<int>> predict(const Eigen::MatrixXd& scores, int q,
                                      std::ostream* warnings = nullptr);

} // namespace htc
