#include "htc/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "htc/errors.hpp"
#include "htc/orbits.hpp"
#include "htc/trainer.hpp"
#include "htc/util.hpp"

namespace htc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

TrainConfig train_config(const HtcOptions& opts, std::ostream* progress) {
    TrainConfig cfg;
    cfg.epochs = opts.epochs;
    cfg.learning_rate = opts.learning_rate;
    cfg.layer_dims.assign(static_cast<std::size_t>(opts.layers), opts.embedding_dim);
    cfg.activation = opts.activation;
    cfg.seed = opts.seed;
    cfg.threads = opts.threads;
    cfg.progress = progress;
    return cfg;
}

AlignmentDataset synthesize(const SyntheticSpec& spec, std::uint64_t seed) {
    NoiseSpec noise;
    noise.removal_ratio = spec.ratio;
    noise.permute = spec.permute;
    noise.seed = seed;
    return make_random_attributed_pair(spec.n, spec.edge_prob, spec.attr_dim, noise);
}

AlignmentDataset ingest(const RunConfig& cfg, std::ostream& log) {
    if (cfg.synthetic) {
        AlignmentDataset data = synthesize(*cfg.synthetic, cfg.opts.seed);
        if (!cfg.dump_dataset_dir.empty()) {
            write_dataset(data, cfg.dump_dataset_dir);
            log << "dataset written to " << cfg.dump_dataset_dir << "\n";
        }
        return data;
    }
    if (cfg.source_path.empty() || cfg.target_path.empty())
        throw ArgumentError("need --source and --target (or --synthetic)");
    if (cfg.source_attrs_path.empty() || cfg.target_attrs_path.empty())
        throw ArgumentError("need attribute tables for both graphs");

    AlignmentDataset data;
    data.source = load_edge_list(cfg.source_path, cfg.id_policy, &log);
    data.target = load_edge_list(cfg.target_path, cfg.id_policy, &log);
    data.source_attrs = load_attributes(cfg.source_attrs_path, data.source, cfg.normalize_attrs);
    data.target_attrs = load_attributes(cfg.target_attrs_path, data.target, cfg.normalize_attrs);
    if (!cfg.truth_path.empty())
        data.truth = load_groundtruth(cfg.truth_path, data.source, data.target);
    return data;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ArgumentError*>(&e)) return 1;
    if (dynamic_cast<const NumericError*>(&e)) return 3;
    return 2; // parse, dimension, validation
}

} // namespace

void validate(const HtcOptions& opts) {
    if (opts.orbit_count < 1 || opts.orbit_count > kOrbitCount)
        throw ArgumentError("orbit count must be between 1 and 13");
    if (opts.layers < 1) throw ArgumentError("layer count must be positive");
    if (opts.embedding_dim < 2) throw ArgumentError("embedding dimension must be at least 2");
    if (!(opts.learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
    if (opts.epochs < 1) throw ArgumentError("epoch count must be positive");
    if (opts.neighbor_count < 1) throw ArgumentError("neighborhood size must be positive");
    if (!(opts.reinforcement_rate > 1.0))
        throw ArgumentError("reinforcement rate must be greater than 1");
    if (opts.threads < 1) throw ArgumentError("thread count must be positive");
}

AlignmentRun run_alignment(const AlignmentDataset& data, const HtcOptions& opts, Variant variant,
                           std::ostream* train_log) {
    validate(opts);
    AlignmentRun run;

    // Low-order variants keep only the first orbit view.
    const int k = (variant == Variant::HtcL || variant == Variant::HtcLT) ? 1 : opts.orbit_count;
    // The hubness neighborhood cannot exceed either node count.
    const int m = std::max(1, std::min({opts.neighbor_count, data.source.node_count(),
                                        data.target.node_count()}));

    auto t0 = Clock::now();
    OrbitMatrixSet orbits_s = count_orbits_fast(data.source, opts.threads);
    OrbitMatrixSet orbits_t = count_orbits_fast(data.target, opts.threads);
    if (k < orbits_s.orbit_count()) {
        orbits_s = restrict_orbits(orbits_s, k);
        orbits_t = restrict_orbits(orbits_t, k);
    }
    run.stage_seconds["orbit_counting"] = seconds_since(t0);

    t0 = Clock::now();
    const std::vector<OrbitLaplacian> laps_s = build_orbit_laplacians(orbits_s);
    const std::vector<OrbitLaplacian> laps_t = build_orbit_laplacians(orbits_t);
    run.stage_seconds["laplacian_construction"] = seconds_since(t0);

    t0 = Clock::now();
    TrainResult trained =
        train(laps_s, laps_t, data.source_attrs, data.target_attrs, train_config(opts, train_log));
    run.stage_seconds["training"] = seconds_since(t0);

    t0 = Clock::now();
    const bool reinforce = variant == Variant::Htc || variant == Variant::HtcLT;
    std::vector<ScoreMatrix> per_orbit(static_cast<std::size_t>(k));
    std::vector<int> trusted(static_cast<std::size_t>(k), 0);
    run.loop_iterations.assign(static_cast<std::size_t>(k), 0);
    run.initial_trusted.assign(static_cast<std::size_t>(k), 0);

    parallel_for(static_cast<std::size_t>(k), opts.threads, [&](std::size_t i) {
        const Eigen::MatrixXd& h_s = trained.embeddings.source[i].embedding();
        const Eigen::MatrixXd& h_t = trained.embeddings.target[i].embedding();
        if (reinforce) {
            FineTuneResult ft =
                fine_tune(laps_s[i], laps_t[i], data.source_attrs, data.target_attrs, h_s, h_t,
                          trained.params, opts.reinforcement_rate, m);
            per_orbit[i] = std::move(ft.scores);
            trusted[i] = ft.trusted_count;
            run.initial_trusted[i] = ft.initial_trusted;
            run.loop_iterations[i] = ft.iterations;
        } else {
            // Raw correlation scores; a single hubness pass still supplies
            // the trusted counts that weight the integration.
            Eigen::MatrixXd corr = pearson_similarity(h_s, h_t);
            trusted[i] = static_cast<int>(trusted_pairs(lisi_scores(corr, m)).size());
            run.initial_trusted[i] = trusted[i];
            per_orbit[i] = {std::move(corr), laps_s[i].orbit_id()};
        }
    });
    run.stage_seconds["fine_tuning"] = seconds_since(t0);

    t0 = Clock::now();
    run.alignment = integrate(std::move(per_orbit), trusted);
    run.stage_seconds["integration"] = seconds_since(t0);
    return run;
}

int run_pipeline(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    const auto wall_start = Clock::now();
    try {
        validate(cfg.opts);
        if (cfg.out_dir.empty()) throw ArgumentError("need an output directory");
        for (int q : cfg.q_list)
            if (q < 1) throw ArgumentError("q values must be positive");

        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path out(cfg.out_dir);

        AlignmentDataset data = ingest(cfg, log);
        log << "source: " << data.source.node_count() << " nodes, " << data.source.edge_count()
            << " edges; target: " << data.target.node_count() << " nodes, "
            << data.target.edge_count() << " edges\n";

        std::ofstream train_log(out / "train_log.txt");
        AlignmentRun run = run_alignment(data, cfg.opts, cfg.variant, &train_log);
        const Eigen::MatrixXd& scores = run.alignment.final.values;

        // scores.tsv: the integrated matrix, one source row per line.
        {
            std::ofstream f(out / "scores.tsv");
            for (Eigen::Index i = 0; i < scores.rows(); ++i) {
                for (Eigen::Index j = 0; j < scores.cols(); ++j) {
                    if (j) f << '\t';
                    f << fmt_double(scores(i, j));
                }
                f << '\n';
            }
        }

        // pairs_topq.tsv: ranked candidates for every source node.
        {
            const int q = cfg.q_list.empty()
                              ? 1
                              : *std::max_element(cfg.q_list.begin(), cfg.q_list.end());
            const auto top = predict(scores, q, &log);
            std::ofstream f(out / "pairs_topq.tsv");
            f << "# source\ttarget\tscore\trank\n";
            for (std::size_t i = 0; i < top.size(); ++i) {
                for (std::size_t r = 0; r < top[i].size(); ++r) {
                    const int j = top[i][r];
                    f << data.source.display_id(static_cast<int>(i)) << '\t'
                      << data.target.display_id(j) << '\t'
                      << fmt_double(scores(static_cast<Eigen::Index>(i), j)) << '\t' << (r + 1)
                      << '\n';
                }
            }
        }

        // orbit_report.txt: per-view diagnostics.
        {
            std::ofstream f(out / "orbit_report.txt");
            for (std::size_t i = 0; i < run.alignment.per_orbit.size(); ++i) {
                const int orbit = run.alignment.per_orbit[i].orbit_id;
                f << "orbit=" << orbit << " name=" << orbit_name(orbit)
                  << " trusted=" << run.alignment.trusted_counts[i]
                  << " weight=" << fmt_double(run.alignment.weights[i])
                  << " iterations=" << run.loop_iterations[i] << '\n';
            }
        }

        // metrics.txt: only meaningful when ground truth is available.
        {
            std::ofstream f(out / "metrics.txt");
            f << "pairs=" << data.truth.size() << '\n';
            if (!data.truth.empty()) {
                for (int q : cfg.q_list)
                    f << "precision@" << q << '=' << fmt_double(precision_at_q(scores, data.truth, q))
                      << '\n';
                f << "mrr=" << fmt_double(mean_reciprocal_rank(scores, data.truth)) << '\n';
            }
        }

        // timings.txt: stage decomposition plus the unattributed remainder.
        {
            double accounted = 0.0;
            for (const auto& [name, sec] : run.stage_seconds) accounted += sec;
            const double total = seconds_since(wall_start);
            std::ofstream f(out / "timings.txt");
            for (const char* stage : {"orbit_counting", "laplacian_construction", "training",
                                      "fine_tuning", "integration"})
                f << stage << '\t' << run.stage_seconds[stage] << '\n';
            f << "other\t" << std::max(0.0, total - accounted) << '\n';
            f << "total\t" << total << '\n';
        }

        log << "artifacts written to " << cfg.out_dir << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int count_orbits_command(const std::string& graph_path, IdPolicy policy, bool use_oracle,
                         int threads, const std::string& out_path, std::ostream& err) {
    try {
        if (threads < 1) throw ArgumentError("thread count must be positive");
        Graph g = load_edge_list(graph_path, policy, &err);
        const OrbitMatrixSet set =
            use_oracle ? count_orbits_bruteforce(g) : count_orbits_fast(g, threads);
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write orbit table '" + out_path + "'");
        write_orbit_table(set, g, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace htc
