#include "htc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "htc/errors.hpp"
#include "htc/util.hpp"

namespace htc {
namespace {

struct OrbitPass {
    ForwardCache source;
    ForwardCache target;
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> grads;
};

std::vector<Eigen::MatrixXd> zero_like(const EncoderParams& params) {
    std::vector<Eigen::MatrixXd> z;
    z.reserve(params.weights.size());
    for (const auto& w : params.weights) z.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    return z;
}

// Reduction order is pinned to ascending orbit id so that permuting the
// Laplacian lists (or running multi-threaded) reproduces identical sums.
std::vector<std::size_t> reduction_order(const std::vector<OrbitLaplacian>& laps) {
    std::vector<std::size_t> order(laps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return laps[a].orbit_id() < laps[b].orbit_id();
    });
    return order;
}

} // namespace

TrainResult train(const std::vector<OrbitLaplacian>& laps_source,
                  const std::vector<OrbitLaplacian>& laps_target,
                  const Eigen::MatrixXd& attrs_source, const Eigen::MatrixXd& attrs_target,
                  const TrainConfig& cfg) {
    if (laps_source.empty() || laps_source.size() != laps_target.size())
        throw ArgumentError("need matching non-empty Laplacian lists for both graphs");
    if (attrs_source.cols() != attrs_target.cols())
        throw DimensionError("attribute widths of the two graphs differ");
    if (cfg.epochs < 1) throw ArgumentError("epoch count must be positive");
    if (!(cfg.learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
    if (cfg.layer_dims.empty()) throw ArgumentError("need at least one layer dimension");

    const std::size_t orbit_count = laps_source.size();
    std::vector<int> dims;
    dims.push_back(static_cast<int>(attrs_source.cols()));
    dims.insert(dims.end(), cfg.layer_dims.begin(), cfg.layer_dims.end());

    Rng rng(cfg.seed);
    EncoderParams params = init_params(dims, cfg.activation, rng);
    AdamState adam = AdamState::for_params(params, cfg.learning_rate);
    const auto order = reduction_order(laps_source);

    std::vector<OrbitPass> passes(orbit_count);
    auto run_passes = [&] {
        parallel_for(orbit_count, cfg.threads, [&](std::size_t k) {
            OrbitPass& p = passes[k];
            p.source = forward(laps_source[k], attrs_source, params);
            p.target = forward(laps_target[k], attrs_target, params);
            p.loss = reconstruction_loss(p.source.embedding(), p.target.embedding(),
                                         laps_source[k], laps_target[k]);
            p.grads = zero_like(params);
            accumulate_loss_gradient(laps_source[k], p.source, params, p.grads);
            accumulate_loss_gradient(laps_target[k], p.target, params, p.grads);
        });
    };

    TrainResult result;
    result.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        run_passes();

        double total = 0.0;
        for (std::size_t k : order) total += passes[k].loss;
        if (!std::isfinite(total))
            throw NumericError("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch));
        result.epoch_loss.push_back(total);

        if (cfg.progress) {
            *cfg.progress << "epoch=" << epoch << " total=" << total << " per_orbit=";
            for (std::size_t i = 0; i < order.size(); ++i)
                *cfg.progress << (i ? "," : "") << passes[order[i]].loss;
            *cfg.progress << '\n';
        }

        std::vector<Eigen::MatrixXd> grads = zero_like(params);
        for (std::size_t k : order)
            for (std::size_t l = 0; l < grads.size(); ++l) grads[l] += passes[k].grads[l];
        adam_step(params, grads, adam);
    }

    // Embeddings reflect the weights after the final step.
    run_passes();
    double total = 0.0;
    for (std::size_t k : order) total += passes[k].loss;
    if (!std::isfinite(total))
        throw NumericError("training diverged: non-finite loss at epoch " +
                           std::to_string(cfg.epochs));
    result.final_loss = total;

    result.params = std::move(params);
    result.embeddings.source.reserve(orbit_count);
    result.embeddings.target.reserve(orbit_count);
    for (auto& p : passes) {
        result.embeddings.source.push_back(std::move(p.source));
        result.embeddings.target.push_back(std::move(p.target));
    }
    return result;
}

} // namespace htc
