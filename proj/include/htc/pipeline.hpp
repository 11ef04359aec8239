#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htc/aligner.hpp"
#include "htc/evaluation.hpp"
#include "htc/graph.hpp"
#include "htc/options.hpp"
#include "htc/synthetic.hpp"

namespace htc {

struct SyntheticSpec {
    int n = 100;
    double edge_prob = 0.1;
    double ratio = 0.0;
    bool permute = true;
    int attr_dim = 16;
};

// One full run as configured from the command line.
struct RunConfig {
    // Either file inputs...
    std::string source_path;
    std::string target_path;
    std::string source_attrs_path;
    std::string target_attrs_path;
    std::string truth_path; // optional
    IdPolicy id_policy = IdPolicy::RemapDense;
    bool normalize_attrs = false;
    // ...or a generated dataset.
    std::optional<SyntheticSpec> synthetic;
    std::string dump_dataset_dir; // optional copy of the generated inputs

    HtcOptions opts;
    Variant variant = Variant::Htc;
    std::vector<int> q_list{1, 10, 30, 50};
    std::string out_dir;
    bool use_oracle_counter = false; // count-orbits only
};

// Per-orbit diagnostics and stage timings from one alignment run.
struct AlignmentRun {
    AlignmentResult alignment;
    std::vector<int> loop_iterations; // per orbit, 0 when no loop ran
    std::vector<int> initial_trusted; // per orbit, the first evaluation's count
    std::map<std::string, double> stage_seconds;
};

// The shared core: orbit counting, Laplacians, training, variant-specific
// scoring, integration. Writes training progress to train_log if given.
AlignmentRun run_alignment(const AlignmentDataset& data, const HtcOptions& opts, Variant variant,
                           std::ostream* train_log = nullptr);

// Full CLI behaviour: ingest or synthesize, align, write artifacts
// (scores.tsv, pairs_topq.tsv, orbit_report.txt, metrics.txt, timings.txt)
// into cfg.out_dir. Returns the process exit code.
int run_pipeline(const RunConfig& cfg, std::ostream& log, std::ostream& err);

// Orbit-count subcommand: writes the per-edge count table for one graph.
int count_orbits_command(const std::string& graph_path, IdPolicy policy, bool use_oracle,
                         int threads, const std::string& out_path, std::ostream& err);

} // namespace htc
