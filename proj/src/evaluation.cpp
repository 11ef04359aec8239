#include "htc/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "htc/errors.hpp"
#include "htc/pipeline.hpp"

namespace htc {

int true_target_rank(const Eigen::MatrixXd& scores, int source, int target) {
    if (source < 0 || source >= scores.rows() || target < 0 || target >= scores.cols())
        throw ValidationError("ground-truth index outside the score matrix");
    const double s = scores(source, target);
    int rank = 1;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        const double x = scores(source, j);
        if (x > s || (x == s && j < target)) ++rank;
    }
    return rank;
}

double precision_at_q(const Eigen::MatrixXd& scores, const GroundTruth& truth, int q) {
    if (truth.empty()) throw ArgumentError("cannot score an empty ground truth");
    if (q < 1) throw ArgumentError("q must be positive");
    int hits = 0;
    for (auto [s, t] : truth.pairs)
        if (true_target_rank(scores, s, t) <= q) ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double mean_reciprocal_rank(const Eigen::MatrixXd& scores, const GroundTruth& truth) {
    if (truth.empty()) throw ArgumentError("cannot score an empty ground truth");
    double acc = 0.0;
    for (auto [s, t] : truth.pairs)
        acc += 1.0 / static_cast<double>(true_target_rank(scores, s, t));
    return acc / static_cast<double>(truth.size());
}

Variant parse_variant(const std::string& name) {
    std::string up;
    for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "HTC") return Variant::Htc;
    if (up == "HTC-L") return Variant::HtcL;
    if (up == "HTC-H") return Variant::HtcH;
    if (up == "HTC-LT") return Variant::HtcLT;
    throw ArgumentError("unknown variant '" + name + "' (expected HTC, HTC-L, HTC-H, or HTC-LT)");
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Htc: return "HTC";
        case Variant::HtcL: return "HTC-L";
        case Variant::HtcH: return "HTC-H";
        case Variant::HtcLT: return "HTC-LT";
    }
    return "?";
}

MetricReport run_ablation(Variant variant, const AlignmentDataset& data, const HtcOptions& opts,
                          const std::vector<int>& q_list) {
    if (data.truth.empty()) throw ArgumentError("ablation runs need ground truth");

    AlignmentRun run = run_alignment(data, opts, variant);

    const auto t0 = std::chrono::steady_clock::now();
    MetricReport report;
    report.pair_count = data.truth.size();
    for (int q : q_list) report.precision_at[q] = precision_at_q(run.alignment.final.values, data.truth, q);
    report.mrr = mean_reciprocal_rank(run.alignment.final.values, data.truth);
    report.stage_seconds = run.stage_seconds;
    report.stage_seconds["evaluation"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace htc
