// Command-line front end: `htc align` runs the full alignment pipeline,
// `htc count-orbits` dumps per-edge orbit counts for one graph.

#include <charconv>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "htc/errors.hpp"
#include "htc/pipeline.hpp"

namespace {

htc::SyntheticSpec parse_synthetic(const std::string& text) {
    htc::SyntheticSpec spec;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(pos, end - pos);
        pos = end + 1;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw htc::ArgumentError("synthetic spec items must look like key=value");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        const char* first = value.data();
        const char* last = value.data() + value.size();
        auto need_int = [&](int& out) {
            if (std::from_chars(first, last, out).ptr != last)
                throw htc::ArgumentError("synthetic spec: bad integer '" + value + "'");
        };
        auto need_double = [&](double& out) {
            if (std::from_chars(first, last, out).ptr != last)
                throw htc::ArgumentError("synthetic spec: bad number '" + value + "'");
        };
        if (key == "n") {
            need_int(spec.n);
        } else if (key == "p") {
            need_double(spec.edge_prob);
        } else if (key == "ratio") {
            need_double(spec.ratio);
        } else if (key == "attr_dim") {
            need_int(spec.attr_dim);
        } else if (key == "permute") {
            int flag = 1;
            need_int(flag);
            spec.permute = flag != 0;
        } else {
            throw htc::ArgumentError("synthetic spec: unknown key '" + key + "'");
        }
    }
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"htc: unsupervised alignment of attributed networks"};
    app.require_subcommand(1);

    // ---- align ----
    auto* align = app.add_subcommand("align", "align two attributed networks");
    htc::RunConfig cfg;
    std::string synthetic_text, id_policy = "remap", variant = "HTC", activation = "tanh";

    align->add_option("--source", cfg.source_path, "source edge list");
    align->add_option("--target", cfg.target_path, "target edge list");
    align->add_option("--source-attrs", cfg.source_attrs_path, "source attribute table");
    align->add_option("--target-attrs", cfg.target_attrs_path, "target attribute table");
    align->add_option("--truth", cfg.truth_path, "ground-truth pair list (enables metrics)");
    align->add_option("--synthetic", synthetic_text,
                      "generate inputs, e.g. n=100,p=0.1,ratio=0.1,attr_dim=16,permute=1");
    align->add_option("--dump-dataset", cfg.dump_dataset_dir, "write generated inputs here");
    align->add_option("--id-policy", id_policy, "node id handling: remap | dense")
        ->check(CLI::IsMember({"remap", "dense"}));
    align->add_flag("--normalize-attrs", cfg.normalize_attrs, "L2-normalize attribute rows");
    align->add_option("--variant", variant, "HTC | HTC-L | HTC-H | HTC-LT");
    align->add_option("--orbits", cfg.opts.orbit_count, "orbit views to use (1-13)");
    align->add_option("--layers", cfg.opts.layers, "propagation depth");
    align->add_option("--dim", cfg.opts.embedding_dim, "embedding dimension");
    align->add_option("--eta", cfg.opts.learning_rate, "learning rate");
    align->add_option("--epochs", cfg.opts.epochs, "training epochs");
    align->add_option("--neighbors", cfg.opts.neighbor_count, "hubness neighborhood size");
    align->add_option("--beta", cfg.opts.reinforcement_rate, "reinforcement rate (> 1)");
    align->add_option("--activation", activation, "linear | tanh | relu");
    align->add_option("--seed", cfg.opts.seed, "random seed");
    align->add_option("--threads", cfg.opts.threads, "worker threads (1 = reproducible)");
    align->add_option("--q", cfg.q_list, "report precision at these depths")->delimiter(',');
    align->add_option("--out", cfg.out_dir, "output directory")->required();
    align->set_config("--config", "", "read defaults from an INI file (flags win)");

    // ---- count-orbits ----
    auto* count = app.add_subcommand("count-orbits", "per-edge orbit counts of one graph");
    std::string graph_path, count_out, count_policy = "remap";
    bool use_oracle = false;
    int count_threads = 1;
    count->add_option("--graph", graph_path, "edge list")->required();
    count->add_option("--out", count_out, "output table path")->required();
    count->add_flag("--oracle", use_oracle, "use the exhaustive reference counter");
    count->add_option("--id-policy", count_policy, "node id handling: remap | dense")
        ->check(CLI::IsMember({"remap", "dense"}));
    count->add_option("--threads", count_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (align->parsed()) {
            if (!synthetic_text.empty()) cfg.synthetic = parse_synthetic(synthetic_text);
            cfg.id_policy =
                id_policy == "dense" ? htc::IdPolicy::RequireDense : htc::IdPolicy::RemapDense;
            cfg.variant = htc::parse_variant(variant);
            cfg.opts.activation = htc::parse_activation(activation);
            return htc::run_pipeline(cfg, std::cout, std::cerr);
        }
        const htc::IdPolicy policy =
            count_policy == "dense" ? htc::IdPolicy::RequireDense : htc::IdPolicy::RemapDense;
        return htc::count_orbits_command(graph_path, policy, use_oracle, count_threads, count_out,
                                         std::cerr);
    } catch (const htc::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const htc::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const htc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
