#include "htc/encoder.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "htc/errors.hpp"

namespace htc {
namespace {

// Loss below this is treated as an exact reconstruction; the Frobenius
// norm is not differentiable at zero so the subgradient 0 is used.
constexpr double kLossFloor = 1e-300;

Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z) {
    switch (act) {
        case Activation::Linear: return z;
        case Activation::Tanh: return z.array().tanh().matrix();
        case Activation::Relu: return z.cwiseMax(0.0);
    }
    throw ArgumentError("unknown activation");
}

// Derivative expressed through the layer output, valid for all three
// supported activations (relu uses the a.e. convention f'(0) = 0).
Eigen::ArrayXXd activation_derivative(Activation act, const Eigen::MatrixXd& out) {
    switch (act) {
        case Activation::Linear: return Eigen::ArrayXXd::Ones(out.rows(), out.cols());
        case Activation::Tanh: return 1.0 - out.array().square();
        case Activation::Relu: return (out.array() > 0.0).cast<double>();
    }
    throw ArgumentError("unknown activation");
}

double loss_one_side(const Eigen::MatrixXd& h, const OrbitLaplacian& lap) {
    // ||L - H H^T||_F^2 = ||H^T H||_F^2 - 2 <L, H H^T> + ||L||_F^2
    const Eigen::MatrixXd gram = h.transpose() * h;
    const double sq = gram.squaredNorm() - 2.0 * lap.inner_with_gram(h) + lap.frobenius_squared();
    return std::sqrt(std::max(sq, 0.0));
}

} // namespace

Activation parse_activation(const std::string& name) {
    if (name == "linear") return Activation::Linear;
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    throw ArgumentError("unknown activation '" + name + "' (expected linear, tanh, or relu)");
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
    }
    return "?";
}

EncoderParams init_params(const std::vector<int>& dims, Activation activation, Rng& rng) {
    if (dims.size() < 2) throw ArgumentError("need at least input and output dimensions");
    for (int d : dims)
        if (d < 1) throw ArgumentError("layer dimensions must be positive");
    EncoderParams params;
    params.activation = activation;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l];
        const int fan_out = dims[l + 1];
        const double scale = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd w(fan_in, fan_out);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-scale, scale);
        params.weights.push_back(std::move(w));
    }
    return params;
}

ForwardCache forward(const OrbitLaplacian& lap, const Eigen::MatrixXd& attrs,
                     const EncoderParams& params) {
    if (attrs.rows() != lap.node_count())
        throw DimensionError("attribute rows do not match node count");
    if (params.weights.empty()) throw ArgumentError("encoder has no layers");
    if (attrs.cols() != params.weights.front().rows())
        throw DimensionError("attribute width does not match first layer");

    ForwardCache cache;
    cache.layers.reserve(params.weights.size() + 1);
    cache.propagated.reserve(params.weights.size());
    cache.layers.push_back(attrs);
    for (const Eigen::MatrixXd& w : params.weights) {
        cache.propagated.push_back(lap.multiply(cache.layers.back()));
        cache.layers.push_back(apply_activation(params.activation, cache.propagated.back() * w));
    }
    return cache;
}

double reconstruction_loss(const Eigen::MatrixXd& h_s, const Eigen::MatrixXd& h_t,
                           const OrbitLaplacian& lap_s, const OrbitLaplacian& lap_t) {
    return loss_one_side(h_s, lap_s) + loss_one_side(h_t, lap_t);
}

void accumulate_loss_gradient(const OrbitLaplacian& lap, const ForwardCache& cache,
                              const EncoderParams& params, std::vector<Eigen::MatrixXd>& grads) {
    const int layers = params.layer_count();
    if (static_cast<int>(grads.size()) != layers)
        throw DimensionError("gradient slots do not match layer count");
    const Eigen::MatrixXd& h = cache.embedding();

    const double loss = loss_one_side(h, lap);
    if (loss < kLossFloor) return;

    // d||Delta||_F / dH = (2 / ||Delta||_F) Delta H with Delta = H H^T - L,
    // computed as H (H^T H) - L H to stay O(n d^2).
    Eigen::MatrixXd grad_h =
        (2.0 / loss) * (h * (h.transpose() * h) - lap.multiply(h));

    for (int l = layers - 1; l >= 0; --l) {
        const Eigen::MatrixXd& out = cache.layers[static_cast<std::size_t>(l) + 1];
        const Eigen::MatrixXd gz =
            (grad_h.array() * activation_derivative(params.activation, out)).matrix();
        grads[static_cast<std::size_t>(l)].noalias() +=
            cache.propagated[static_cast<std::size_t>(l)].transpose() * gz;
        if (l > 0)
            grad_h = lap.multiply(gz * params.weights[static_cast<std::size_t>(l)].transpose());
    }
}

AdamState AdamState::for_params(const EncoderParams& params, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    for (const auto& w : params.weights) {
        s.m.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        s.v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    return s;
}

void adam_step(EncoderParams& params, const std::vector<Eigen::MatrixXd>& grads, AdamState& state) {
    if (grads.size() != params.weights.size() || state.m.size() != params.weights.size())
        throw DimensionError("optimizer state does not match parameters");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        state.m[l] = state.beta1 * state.m[l] + (1.0 - state.beta1) * grads[l];
        state.v[l] = state.beta2 * state.v[l] + (1.0 - state.beta2) * grads[l].array().square().matrix();
        const Eigen::ArrayXXd m_hat = state.m[l].array() / bc1;
        const Eigen::ArrayXXd v_hat = state.v[l].array() / bc2;
        params.weights[l].array() -= state.learning_rate * m_hat / (v_hat.sqrt() + state.epsilon);
    }
}

void save_checkpoint(const std::string& path, const EncoderParams& params,
                     const std::string& rng_state) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint '" + path + "'");
    out.precision(17);
    out << "htc-checkpoint 1\n";
    out << activation_name(params.activation) << '\n';
    out << params.weights.size() << '\n';
    for (const auto& w : params.weights) {
        out << w.rows() << ' ' << w.cols() << '\n';
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                if (j) out << ' ';
                out << w(i, j);
            }
            out << '\n';
        }
    }
    out << "rng " << rng_state << '\n';
}

std::pair<EncoderParams, std::string> load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open checkpoint '" + path + "'");
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "htc-checkpoint" || version != 1)
        throw ParseError(path + ": not a version-1 checkpoint");
    std::string act;
    in >> act;
    EncoderParams params;
    params.activation = parse_activation(act);
    std::size_t layers = 0;
    in >> layers;
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::Index rows = 0, cols = 0;
        in >> rows >> cols;
        if (!in || rows < 1 || cols < 1) throw ParseError(path + ": bad layer header");
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                if (!(in >> w(i, j))) throw ParseError(path + ": truncated weight matrix");
        params.weights.push_back(std::move(w));
    }
    std::string tag;
    in >> tag;
    if (tag != "rng") throw ParseError(path + ": missing rng state");
    std::string rng_state;
    std::getline(in, rng_state);
    if (!rng_state.empty() && rng_state.front() == ' ') rng_state.erase(0, 1);
    return {std::move(params), std::move(rng_state)};
}

} // namespace htc
