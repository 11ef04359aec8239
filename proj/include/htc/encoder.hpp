#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "htc/rng.hpp"
#include "htc/spectral.hpp"

namespace htc {

enum class Activation { Linear, Tanh, Relu };

Activation parse_activation(const std::string& name);
const char* activation_name(Activation a);

// Stacked graph-convolution weights, shared across orbit views and both
// graphs. weights[l] maps layer dimension d_l to d_{l+1}.
struct EncoderParams {
    std::vector<Eigen::MatrixXd> weights;
    Activation activation = Activation::Tanh;
    int layer_count() const { return static_cast<int>(weights.size()); }
};

// Glorot-uniform weights over the dimension chain d_0, ..., d_L.
EncoderParams init_params(const std::vector<int>& dims, Activation activation, Rng& rng);

// One propagation pass: H^{l+1} = f(L H^l W^l) with H^0 = X. Keeps every
// layer output plus the propagated inputs L H^l for the backward pass.
struct ForwardCache {
    std::vector<Eigen::MatrixXd> layers;     // H^0 .. H^L
    std::vector<Eigen::MatrixXd> propagated; // L H^l for l = 0 .. L-1
    const Eigen::MatrixXd& embedding() const { return layers.back(); }
};

ForwardCache forward(const OrbitLaplacian& lap, const Eigen::MatrixXd& attrs,
                     const EncoderParams& params);

// || L_s - H_s H_s^T ||_F + || L_t - H_t H_t^T ||_F, evaluated through the
// d x d Gram matrices so no n x n reconstruction is materialized.
double reconstruction_loss(const Eigen::MatrixXd& h_s, const Eigen::MatrixXd& h_t,
                           const OrbitLaplacian& lap_s, const OrbitLaplacian& lap_t);

// Adds this graph/orbit view's loss gradient w.r.t. every weight matrix
// onto `grads` (entries must be pre-sized and zeroed by the caller).
void accumulate_loss_gradient(const OrbitLaplacian& lap, const ForwardCache& cache,
                              const EncoderParams& params, std::vector<Eigen::MatrixXd>& grads);

struct AdamState {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    std::vector<Eigen::MatrixXd> m;
    std::vector<Eigen::MatrixXd> v;

    static AdamState for_params(const EncoderParams& params, double learning_rate);
};

void adam_step(EncoderParams& params, const std::vector<Eigen::MatrixXd>& grads, AdamState& state);

// Versioned text checkpoint: weights plus the RNG state text.
void save_checkpoint(const std::string& path, const EncoderParams& params,
                     const std::string& rng_state);
std::pair<EncoderParams, std::string> load_checkpoint(const std::string& path);

} // namespace htc
