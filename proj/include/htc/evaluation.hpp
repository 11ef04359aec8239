#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "htc/graph.hpp"
#include "htc/options.hpp"

namespace htc {

// Rank of the true target within a source's score row: 1 plus the number
// of strictly better targets plus the equal-scored targets with a smaller
// index. Mirrors the deterministic ordering used by prediction.
int true_target_rank(const Eigen::MatrixXd& scores, int source, int target);

// Fraction of ground-truth pairs whose target ranks within the top q.
double precision_at_q(const Eigen::MatrixXd& scores, const GroundTruth& truth, int q);

// Mean reciprocal rank of the true targets.
double mean_reciprocal_rank(const Eigen::MatrixXd& scores, const GroundTruth& truth);

struct MetricReport {
    std::map<int, double> precision_at;
    double mrr = 0.0;
    int pair_count = 0;
    std::map<std::string, double> stage_seconds;
};

// Pipeline variants used in ablation runs:
//   HtcL  - first orbit only, raw correlation scores, no reinforcement
//   HtcH  - all orbit views, raw correlation scores, no reinforcement
//   HtcLT - first orbit only, with the reinforcement loop
//   Htc   - complete pipeline
enum class Variant { HtcL, HtcH, HtcLT, Htc };

// Accepts HTC, HTC-L, HTC-H, HTC-LT (case-insensitive); anything else,
// including HTC-DT, is rejected.
Variant parse_variant(const std::string& name);
const char* variant_name(Variant v);

MetricReport run_ablation(Variant variant, const AlignmentDataset& data, const HtcOptions& opts,
                          const std::vector<int>& q_list);

} // namespace htc
