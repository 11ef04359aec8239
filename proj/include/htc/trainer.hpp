#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "htc/encoder.hpp"

namespace htc {

struct TrainConfig {
    int epochs = 200;
    double learning_rate = 0.01;
    // Output width of each layer; the input width comes from the attributes.
    std::vector<int> layer_dims;
    Activation activation = Activation::Tanh;
    std::uint64_t seed = 1;
    int threads = 1;
    std::ostream* progress = nullptr; // one machine-readable line per epoch
};

// Per-orbit forward caches for both graphs after training.
struct EmbeddingSet {
    std::vector<ForwardCache> source;
    std::vector<ForwardCache> target;
    int orbit_count() const { return static_cast<int>(source.size()); }
};

struct TrainResult {
    EncoderParams params;
    EmbeddingSet embeddings;
    std::vector<double> epoch_loss; // pre-step total loss per epoch
    double final_loss = 0.0;        // after the last update
};

// Trains one weight set shared by every orbit view of both graphs. Each
// epoch sums the per-orbit reconstruction losses into one objective and
// takes a single optimizer step. Per-orbit work may run on `threads`
// workers; gradients are reduced in ascending orbit id, so results do not
// depend on list order or thread count.
TrainResult train(const std::vector<OrbitLaplacian>& laps_source,
                  const std::vector<OrbitLaplacian>& laps_target,
                  const Eigen::MatrixXd& attrs_source, const Eigen::MatrixXd& attrs_target,
                  const TrainConfig& cfg);

} // namespace htc
