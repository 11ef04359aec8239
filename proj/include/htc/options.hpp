#pragma once

#include <cstdint>

#include "htc/encoder.hpp"

namespace htc {

// Hyperparameters shared by the pipeline and the ablation harness.
struct HtcOptions {
    int orbit_count = 13;          // structural views per graph
    int layers = 2;                // propagation depth
    int embedding_dim = 200;       // output width of every layer
    double learning_rate = 0.01;
    int epochs = 200;
    int neighbor_count = 20;       // m, hubness neighborhood size
    double reinforcement_rate = 1.1; // beta
    std::uint64_t seed = 1;
    int threads = 1;
    Activation activation = Activation::Tanh;
};

// Throws ArgumentError on out-of-domain values.
void validate(const HtcOptions& opts);

} // namespace htc
